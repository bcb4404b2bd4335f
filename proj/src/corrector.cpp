#include "ridg/corrector.hpp"

#include <cmath>
#include <stdexcept>

#include "ridg/errors.hpp"

namespace ridg {

CorrectorMatrices assemble_corrector(const ReferenceOperators& ops, const Courant& nu) {
  const int d = ops.bases.dim();
  if (nu.dim != d) throw std::domain_error("Courant dimension does not match the basis");
  CorrectorMatrices m;
  m.courant = nu;
  m.c0 = Eigen::MatrixXd::Zero(ops.correction_volume[0].rows(),
                               ops.correction_volume[0].cols());
  for (int a = 0; a < d; ++a) {
    m.c0 += nu.nu[a] * ops.correction_volume[a];
    m.c0 -= nu.plus(a) * ops.correction_face_self[a][1];
    m.c0 += nu.minus(a) * ops.correction_face_self[a][0];
    m.from_minus[a] = nu.plus(a) * ops.correction_face_cross[a][0];
    m.from_plus[a] = -nu.minus(a) * ops.correction_face_cross[a][1];
  }

  const int mp = static_cast<int>(m.c0.cols());
  m.offsets = {Index3{0, 0, 0}};
  m.stacked.resize(m.c0.rows(), (2 * d + 1) * mp);
  m.stacked.leftCols(mp) = m.c0;
  for (int a = 0; a < d; ++a) {
    Index3 lo{0, 0, 0}, hi{0, 0, 0};
    lo[a] = -1;
    hi[a] = 1;
    m.offsets.push_back(lo);
    m.offsets.push_back(hi);
    m.stacked.middleCols((2 * a + 1) * mp, mp) = m.from_minus[a];
    m.stacked.middleCols((2 * a + 2) * mp, mp) = m.from_plus[a];
  }
  return m;
}

CorrectorMatrices assemble_corrector(const SchemeBases& bases, const Courant& courant) {
  return assemble_corrector(build_reference_operators(bases), courant);
}

CoeffField correct(const CoeffField& field, const SpacetimeField& prediction,
                   const CorrectorMatrices& mats) {
  if (prediction.coeffs.cols() != field.coeffs.cols() ||
      prediction.coeffs.rows() != mats.c0.cols())
    throw std::domain_error("prediction does not match the field or corrector");
  CoeffField out = field;
  out.coeffs += apply_stencil(field.mesh, mats.offsets, mats.stacked, prediction.coeffs);
  return out;
}

LinearStep LinearStep::assemble(Scheme scheme, const ReferenceOperators& ops,
                                const Courant& courant) {
  return LinearStep{assemble_predictor(scheme, ops, courant),
                    assemble_corrector(ops, courant)};
}

CoeffField LinearStep::apply(const CoeffField& field) const {
  return correct(field, predict(field, predictor), corrector);
}

AdvectionRun advance_advection(
    Scheme scheme, const CoeffField& initial, const AdvectionConfig& config,
    double final_time, const std::function<void(int, const CoeffField&)>& observer) {
  if (!(config.dt > 0.0)) throw std::domain_error("time step must be positive");
  if (final_time < 0.0) throw std::domain_error("final time must be non-negative");

  const SchemeBases bases = scheme_bases(scheme, initial.spec.degree, initial.mesh.dim);
  if (bases.spatial != initial.spec)
    throw std::domain_error("initial field is not in the spatial basis");
  const ReferenceOperators ops = build_reference_operators(bases);

  // Full steps, then at most one shortened step; a remainder below round-off
  // of the final time is absorbed.
  const double tol = 1e-12 * std::max(1.0, final_time);
  int full = static_cast<int>(std::floor(final_time / config.dt + 1e-12));
  double rest = final_time - full * config.dt;
  if (rest < tol) rest = 0.0;

  AdvectionRun run{initial, 0, config.dt};
  auto check = [&](const CoeffField& f) {
    const double big = f.coeffs.cwiseAbs().maxCoeff();
    if (!std::isfinite(big) || big > kBlowUpThreshold)
      throw NumericalError("solution blew up after " + std::to_string(run.steps) + " steps");
  };

  if (full > 0) {
    const LinearStep step = LinearStep::assemble(scheme, ops, config.courant(initial.mesh));
    for (int n = 0; n < full; ++n) {
      run.field = step.apply(run.field);
      ++run.steps;
      check(run.field);
      if (observer) observer(run.steps, run.field);
    }
  }
  if (rest > 0.0) {
    AdvectionConfig last = config;
    last.dt = rest;
    const LinearStep step = LinearStep::assemble(scheme, ops, last.courant(initial.mesh));
    run.field = step.apply(run.field);
    ++run.steps;
    check(run.field);
    if (observer) observer(run.steps, run.field);
  }
  return run;
}

}  // namespace ridg
