#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "ridg/basis.hpp"

namespace ridg {

enum class Scheme { Lidg, Ridg };

/// Spatial correction basis plus spacetime prediction basis of one scheme.
struct SchemeBases {
  BasisSpec spatial;
  BasisSpec spacetime;

  int dim() const { return spatial.dim; }
  int degree() const { return spatial.degree; }
};

/// LIDG predicts in the total-degree spacetime space, RIDG in the full
/// tensor-product space. Both correct in the total-degree spatial space.
SchemeBases scheme_bases(Scheme scheme, int degree, int dim);

/// Dimensionless CFL numbers nu_a = u_a dt / dx_a.
struct Courant {
  int dim = 1;
  std::array<double, 3> nu{0.0, 0.0, 0.0};

  double plus(int axis) const { return std::max(nu[axis], 0.0); }
  double minus(int axis) const { return std::min(nu[axis], 0.0); }
  /// max_a |nu_a|
  double magnitude() const {
    double m = 0.0;
    for (int a = 0; a < dim; ++a) m = std::max(m, std::abs(nu[a]));
    return m;
  }
};

/// CFL-independent reference integrals shared by the linear predictors and
/// the corrector. Integrals are exact (Gauss rule with degree + 2 points per
/// axis). `<.>` denotes the mean over the reference cell or face.
///
/// Face arrays are indexed [axis][side] with side 0 for the face at -1 and
/// side 1 for the face at +1.
struct ReferenceOperators {
  SchemeBases bases;

  Eigen::MatrixXd time_derivative;  // <Psi Psi_tau^T>
  Eigen::MatrixXd time_inflow;      // 1/2 <Psi Psi^T> on tau = -1
  Eigen::MatrixXd initial_data;     // 1/2 <Psi Phi^T> on tau = -1   (T)
  std::array<Eigen::MatrixXd, 3> advection;  // <Psi Psi_{,a}^T>

  // 1/2 <Psi|_s Psi|_s^T> and 1/2 <Psi|_s Psi|_{-s}^T> on the faces of axis a.
  std::array<std::array<Eigen::MatrixXd, 2>, 3> face_self;
  std::array<std::array<Eigen::MatrixXd, 2>, 3> face_cross;

  // Corrector pieces: 2 <Phi_{,a} Psi^T>, <Phi|_s Psi|_s^T>, <Phi|_s Psi|_{-s}^T>.
  std::array<Eigen::MatrixXd, 3> correction_volume;
  std::array<std::array<Eigen::MatrixXd, 2>, 3> correction_face_self;
  std::array<std::array<Eigen::MatrixXd, 2>, 3> correction_face_cross;

  /// Maps Q to the time-constant spacetime coefficients of the same polynomial.
  Eigen::MatrixXd time_constant_extension;
};

ReferenceOperators build_reference_operators(const SchemeBases& bases);

}  // namespace ridg
