#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ridg/linear_predictor.hpp"

namespace ridg {

/// Scalar flux with one component per spatial axis, f_a(q).
///
/// Fluxes that are polynomials of degree <= 2 carry their coefficients so the
/// spacetime volume terms can use the precomputed triple-product tensors.
struct ScalarFlux {
  std::string name;
  std::function<double(int axis, double q)> f;
  std::function<double(int axis, double q)> f_prime;
  /// Per-axis (c0, c1, c2) with f_a(q) = c0 + c1 q + c2 q^2.
  std::optional<std::array<std::array<double, 3>, 3>> quadratic;

  double value(int axis, double q) const { return f(axis, q); }
  double derivative(int axis, double q) const { return f_prime(axis, q); }

  /// f_a(q) = q^2 / 2 on every axis.
  static ScalarFlux burgers();
  /// f_a(q) = u_a q.
  static ScalarFlux linear(const std::array<double, 3>& velocity);
  static ScalarFlux quadratic_flux(std::string name,
                                   const std::array<std::array<double, 3>, 3>& coeffs);
  /// No polynomial structure; volume terms fall back to quadrature.
  static ScalarFlux generic(std::string name, std::function<double(int, double)> f,
                            std::function<double(int, double)> f_prime);
};

/// max(|f'(ql)|, |f'((ql+qr)/2)|, |f'(qr)|)
double rusanov_speed(double ql, double qr, const ScalarFlux& flux, int axis = 0);
/// 1/2 (f(ql) + f(qr)) - lambda/2 (qr - ql)
double rusanov_flux(double ql, double qr, const ScalarFlux& flux, int axis = 0);

struct NewtonSettings {
  double tolerance = 1e-4;  // L2 norm of the center element's residual block
  int max_iterations = 3;
};

/// Nonzero entries of a rank-3 tensor.
struct SparseTensor3 {
  struct Entry {
    int k, l, m;
    double value;
  };
  std::vector<Entry> entries;
};

/// E^a_{klm} = <psi_{k,a} psi_l psi_m> for each spatial axis a, means over
/// the reference spacetime cell. Symmetric in (l, m).
struct QuadFreeTensors {
  int points_per_axis = 0;  // rule used to evaluate them exactly
  std::array<SparseTensor3, 3> volume;
};

/// Points per axis that integrate products of three degree-m polynomials
/// with one derivative exactly.
inline int triple_product_points(int degree) { return (3 * degree) / 2 + 1; }

QuadFreeTensors build_quad_free_tensors(const BasisSpec& spacetime);

/// Reference data for the nonlinear predictor and corrector.
struct NonlinearOperators {
  SchemeBases bases;
  int mp = 0, mc = 0;

  Eigen::MatrixXd time_matrix;     // 1/2 <Psi Psi^T>|tau=1 - <Psi_tau Psi^T>
  Eigen::MatrixXd initial_data;    // T
  Eigen::MatrixXd extension;       // time-constant extension of Q

  // Face traces on x_a = -1 (side 0) and +1 (side 1); rows are face nodes.
  Eigen::VectorXd face_weights;    // sum to 1
  std::array<std::array<Eigen::MatrixXd, 2>, 3> face_psi, face_phi;

  // Volume rule exact for the quadratic flux terms.
  Eigen::VectorXd volume_weights;  // sum to 1
  Eigen::MatrixXd volume_psi;
  std::array<Eigen::MatrixXd, 3> volume_dpsi, volume_dphi;

  std::array<Eigen::MatrixXd, 3> advection_t;  // <Psi_{,a} Psi^T>
  std::array<Eigen::VectorXd, 3> gradient_mean;  // <Psi_{,a}>
  QuadFreeTensors tensors;

  std::vector<Index3> offsets;  // region layout, x fastest
  int center_block = 0;
  /// Block across the +a face of each block, or -1 on the region boundary.
  std::vector<std::array<int, 3>> upper_block;
};

NonlinearOperators build_nonlinear_operators(int degree, int dim);

/// Step ratios r_a = dt / dx_a.
std::array<double, 3> step_ratios(const Mesh& mesh, double dt);

/// Stacked residual of the region system. `w` holds one M_P column per region
/// block and `q` one M_C column per block, both in ops.offsets order.
Eigen::VectorXd region_residual(const NonlinearOperators& ops, const ScalarFlux& flux,
                                const std::array<double, 3>& ratios,
                                const Eigen::MatrixXd& w, const Eigen::MatrixXd& q);

/// Jacobian of region_residual with the Rusanov speed held fixed.
Eigen::MatrixXd region_jacobian(const NonlinearOperators& ops, const ScalarFlux& flux,
                                const std::array<double, 3>& ratios,
                                const Eigen::MatrixXd& w);

/// Volume contribution -sum_a r_a <Psi_{,a} f_a(w)> of one block, evaluated
/// with the tensors for quadratic fluxes and by quadrature otherwise.
Eigen::VectorXd volume_flux_term(const NonlinearOperators& ops, const ScalarFlux& flux,
                                 const std::array<double, 3>& ratios,
                                 const Eigen::VectorXd& w);

struct NewtonResult {
  Eigen::VectorXd center;
  Eigen::MatrixXd region;  // all blocks of the final iterate
  int iterations = 0;
  double residual = 0.0;   // center-block norm that ended the iteration
  bool converged = false;
};

/// Newton iteration on one region starting from the time-constant extension.
/// Throws NumericalError when the Jacobian is singular.
NewtonResult newton_predict(const NonlinearOperators& ops, const ScalarFlux& flux,
                            const std::array<double, 3>& ratios,
                            const Eigen::MatrixXd& q_region,
                            const NewtonSettings& settings, int element = -1);

struct PredictionStats {
  int max_iterations = 0;
  long total_iterations = 0;
  int unconverged = 0;
  long regions = 0;

  void merge(const PredictionStats& other);
};

SpacetimeField nonlinear_predict(const CoeffField& field, double dt, const ScalarFlux& flux,
                                 const NonlinearOperators& ops,
                                 const NewtonSettings& settings,
                                 PredictionStats* stats = nullptr);

/// DG update with Rusanov fluxes of the predicted traces and the spacetime
/// volume integral of f(w).
CoeffField nonlinear_correct(const CoeffField& field, const SpacetimeField& prediction,
                             double dt, const ScalarFlux& flux,
                             const NonlinearOperators& ops);

/// Largest |f_a'(q)| over the default quadrature nodes of every element.
double max_wave_speed(const CoeffField& field, const ScalarFlux& flux);
/// nu * min_a dx_a / max_wave_speed. Throws std::domain_error for zero speed.
double burgers_time_step_size(const CoeffField& field, double nu, const ScalarFlux& flux);

/// Initial data for the exact Burgers solution along characteristics.
struct BurgersInitialCondition {
  std::function<double(std::span<const double>)> value;
  std::function<std::array<double, 3>(std::span<const double>)> gradient;
  int dim = 1;
};

BurgersInitialCondition burgers_ic_1d();  // 1 - cos x
BurgersInitialCondition burgers_ic_2d();  // (1 - cos x)(1 - cos y)/4

/// Solves q = q0(x - q t (1, ..., 1)) by damped Newton. Throws NumericalError
/// when the iteration fails, e.g. past shock formation.
double burgers_exact(std::span<const double> x, double t, const BurgersInitialCondition& ic);

struct NonlinearRun {
  CoeffField field;
  int steps = 0;
  PredictionStats stats;
};

/// Nonlinear RIDG from 0 to final_time; dt from burgers_time_step_size each
/// step, with the last step shortened to land on final_time.
NonlinearRun advance_nonlinear(const CoeffField& initial, double nu, double final_time,
                               const ScalarFlux& flux, const NewtonSettings& settings = {});

}  // namespace ridg
