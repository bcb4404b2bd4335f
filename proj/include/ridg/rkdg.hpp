#pragma once

#include <array>

#include <Eigen/Dense>

#include "ridg/burgers.hpp"

namespace ridg {

/// Classical four-stage, fourth-order Runge-Kutta tableau.
struct RKStage {
  static constexpr std::array<double, 4> weights{1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
  static constexpr std::array<double, 4> nodes{0.0, 0.5, 0.5, 1.0};
};

/// Quadrature rules and basis tables for the semi-discrete DG operator.
struct SpatialOperators {
  BasisSpec spec;
  Eigen::VectorXd volume_weights;  // sum to 1
  Eigen::MatrixXd volume_phi;
  std::array<Eigen::MatrixXd, 3> volume_dphi;
  Eigen::VectorXd face_weights;    // sum to 1
  std::array<std::array<Eigen::MatrixXd, 2>, 3> face_phi;
};

SpatialOperators build_spatial_operators(const BasisSpec& spec);

/// dQ/dt = sum_a (1/dx_a) (2 <Phi_{,a} f_a(q)> - <Phi f^>|+ + <Phi f^>|-)
/// with Rusanov face fluxes. Columns follow field.coeffs.
Eigen::MatrixXd dg_rhs(const CoeffField& field, const ScalarFlux& flux,
                       const SpatialOperators& ops);
Eigen::MatrixXd dg_rhs(const CoeffField& field, const ScalarFlux& flux);

CoeffField rkdg_step(const CoeffField& field, double dt, const ScalarFlux& flux,
                     const SpatialOperators& ops);
CoeffField rkdg_step(const CoeffField& field, double dt, const ScalarFlux& flux);

struct RkdgRun {
  CoeffField field;
  int steps = 0;
};

/// Same step-size rule as the nonlinear RIDG driver.
RkdgRun advance_rkdg(const CoeffField& initial, double nu, double final_time,
                     const ScalarFlux& flux);

}  // namespace ridg
