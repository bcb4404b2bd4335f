#include "ridg/reference_operators.hpp"

#include <cmath>
#include <stdexcept>

namespace ridg {

SchemeBases scheme_bases(Scheme scheme, int degree, int dim) {
  const Truncation trunc =
      scheme == Scheme::Ridg ? Truncation::TensorProduct : Truncation::TotalDegree;
  return SchemeBases{spatial_spec(degree, dim), spacetime_spec(degree, dim, trunc)};
}

namespace {

// sum_p w_p a(p,:)^T b(p,:)
Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& a, const Eigen::VectorXd& w,
                              const Eigen::MatrixXd& b) {
  return a.transpose() * w.asDiagonal() * b;
}

}  // namespace

ReferenceOperators build_reference_operators(const SchemeBases& bases) {
  const int d = bases.dim();
  const int npts = default_points(bases.degree());
  const BasisSpec& st = bases.spacetime;
  const BasisSpec& sp = bases.spatial;
  if (st.dim != d || !st.includes_time || sp.includes_time)
    throw std::domain_error("inconsistent scheme bases");

  ReferenceOperators ops;
  ops.bases = bases;

  // Volume terms, as means over [-1,1]^(d+1).
  const QuadratureRule vol = gauss_rule(npts, d + 1);
  const Eigen::VectorXd vol_w = vol.weights / std::pow(2.0, d + 1);
  const BasisTable psi = tabulate(st, vol.nodes);
  const BasisTable phi = tabulate(sp, vol.nodes.bottomRows(d));
  ops.time_derivative = weighted_gram(psi.values, vol_w, psi.partials[0]);
  ops.time_constant_extension = weighted_gram(psi.values, vol_w, phi.values);
  for (int a = 0; a < d; ++a) {
    ops.advection[a] = weighted_gram(psi.values, vol_w, psi.partials[a + 1]);
    ops.correction_volume[a] = 2.0 * weighted_gram(phi.partials[a], vol_w, psi.values);
  }

  // Faces, as means over [-1,1]^d.
  const QuadratureRule lower = gauss_rule(npts, d);
  const Eigen::VectorXd face_w = lower.weights / std::pow(2.0, d);

  const QuadratureRule inflow = face_rule(lower, 0, -1.0);
  const BasisTable psi_in = tabulate(st, inflow.nodes, false);
  const BasisTable phi_in = tabulate(sp, inflow.nodes.bottomRows(d), false);
  ops.time_inflow = 0.5 * weighted_gram(psi_in.values, face_w, psi_in.values);
  ops.initial_data = 0.5 * weighted_gram(psi_in.values, face_w, phi_in.values);

  for (int a = 0; a < d; ++a) {
    std::array<Eigen::MatrixXd, 2> psi_face, phi_face;
    for (int s = 0; s < 2; ++s) {
      const QuadratureRule face = face_rule(lower, a + 1, s == 0 ? -1.0 : 1.0);
      psi_face[s] = tabulate(st, face.nodes, false).values;
      phi_face[s] = tabulate(sp, face.nodes.bottomRows(d), false).values;
    }
    for (int s = 0; s < 2; ++s) {
      const int o = 1 - s;
      ops.face_self[a][s] = 0.5 * weighted_gram(psi_face[s], face_w, psi_face[s]);
      ops.face_cross[a][s] = 0.5 * weighted_gram(psi_face[s], face_w, psi_face[o]);
      ops.correction_face_self[a][s] = weighted_gram(phi_face[s], face_w, psi_face[s]);
      ops.correction_face_cross[a][s] = weighted_gram(phi_face[s], face_w, psi_face[o]);
    }
  }
  return ops;
}

}  // namespace ridg
