#include "ridg/rkdg.hpp"

#include <cmath>
#include <stdexcept>

#include "ridg/corrector.hpp"
#include "ridg/errors.hpp"
#include "ridg/parallel.hpp"

namespace ridg {

SpatialOperators build_spatial_operators(const BasisSpec& spec) {
  if (spec.includes_time) throw std::domain_error("spatial basis expected");
  const int d = spec.dim;
  SpatialOperators ops;
  ops.spec = spec;
  const QuadratureRule vol =
      gauss_rule(std::max(triple_product_points(spec.degree), default_points(spec.degree)), d);
  ops.volume_weights = vol.weights / std::pow(2.0, d);
  const BasisTable table = tabulate(spec, vol.nodes);
  ops.volume_phi = table.values;
  for (int a = 0; a < d; ++a) ops.volume_dphi[a] = table.partials[a];

  const QuadratureRule lower = gauss_rule(default_points(spec.degree), d - 1);
  ops.face_weights = lower.weights / std::pow(2.0, d - 1);
  for (int a = 0; a < d; ++a)
    for (int s = 0; s < 2; ++s)
      ops.face_phi[a][s] =
          tabulate(spec, face_rule(lower, a, s == 0 ? -1.0 : 1.0).nodes, false).values;
  return ops;
}

Eigen::MatrixXd dg_rhs(const CoeffField& field, const ScalarFlux& flux,
                       const SpatialOperators& ops) {
  const Mesh& mesh = field.mesh;
  const int d = mesh.dim;
  const Eigen::VectorXd& fw = ops.face_weights;
  Eigen::MatrixXd out(field.coeffs.rows(), field.coeffs.cols());
  parallel_for(0, mesh.num_elements(), [&](int e) {
    const Eigen::VectorXd qe = field.coeffs.col(e);
    const Eigen::VectorXd qv = ops.volume_phi * qe;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(qe.size());
    for (int a = 0; a < d; ++a) {
      Index3 lo{0, 0, 0}, hi{0, 0, 0};
      lo[a] = -1;
      hi[a] = 1;
      const Eigen::VectorXd in_hi = ops.face_phi[a][1] * qe;
      const Eigen::VectorXd out_hi = ops.face_phi[a][0] * field.coeffs.col(mesh.neighbor(e, hi));
      const Eigen::VectorXd in_lo = ops.face_phi[a][0] * qe;
      const Eigen::VectorXd out_lo = ops.face_phi[a][1] * field.coeffs.col(mesh.neighbor(e, lo));
      Eigen::VectorXd f_hi(fw.size()), f_lo(fw.size());
      for (int p = 0; p < fw.size(); ++p) {
        f_hi[p] = fw[p] * rusanov_flux(in_hi[p], out_hi[p], flux, a);
        f_lo[p] = fw[p] * rusanov_flux(out_lo[p], in_lo[p], flux, a);
      }
      Eigen::VectorXd fv(qv.size());
      for (int p = 0; p < qv.size(); ++p) fv[p] = ops.volume_weights[p] * flux.value(a, qv[p]);
      rhs += (2.0 * ops.volume_dphi[a].transpose() * fv - ops.face_phi[a][1].transpose() * f_hi +
              ops.face_phi[a][0].transpose() * f_lo) /
             mesh.width(a);
    }
    out.col(e) = rhs;
  });
  return out;
}

Eigen::MatrixXd dg_rhs(const CoeffField& field, const ScalarFlux& flux) {
  return dg_rhs(field, flux, build_spatial_operators(field.spec));
}

CoeffField rkdg_step(const CoeffField& field, double dt, const ScalarFlux& flux,
                     const SpatialOperators& ops) {
  if (!(dt > 0.0)) throw std::domain_error("time step must be positive");
  CoeffField stage = field;
  CoeffField out = field;
  Eigen::MatrixXd k = dg_rhs(field, flux, ops);
  for (int s = 0; s < 4; ++s) {
    out.coeffs += dt * RKStage::weights[s] * k;
    if (s == 3) break;
    stage.coeffs = field.coeffs + dt * RKStage::nodes[s + 1] * k;
    k = dg_rhs(stage, flux, ops);
  }
  return out;
}

CoeffField rkdg_step(const CoeffField& field, double dt, const ScalarFlux& flux) {
  return rkdg_step(field, dt, flux, build_spatial_operators(field.spec));
}

RkdgRun advance_rkdg(const CoeffField& initial, double nu, double final_time,
                     const ScalarFlux& flux) {
  if (!(nu > 0.0)) throw std::domain_error("CFL target must be positive");
  const SpatialOperators ops = build_spatial_operators(initial.spec);
  RkdgRun run{initial, 0};
  double t = 0.0;
  const double eps = 1e-12 * std::max(1.0, final_time);
  while (final_time - t > eps) {
    double dt = burgers_time_step_size(run.field, nu, flux);
    if (t + dt >= final_time - eps) dt = final_time - t;
    run.field = rkdg_step(run.field, dt, flux, ops);
    t += dt;
    ++run.steps;
    const double big = run.field.coeffs.cwiseAbs().maxCoeff();
    if (!std::isfinite(big) || big > kBlowUpThreshold)
      throw NumericalError("solution blew up after " + std::to_string(run.steps) + " steps");
  }
  return run;
}

}  // namespace ridg
