#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ridg {

enum class Truncation { TotalDegree, TensorProduct };

/// Describes a family of orthonormal Legendre polynomials on [-1,1]^n.
///
/// When `includes_time` is set the basis lives on spacetime and reference
/// axis 0 is tau; spatial axes follow in the order (xi, eta, zeta).
struct BasisSpec {
  int degree = 0;
  int dim = 1;
  Truncation truncation = Truncation::TotalDegree;
  bool includes_time = false;

  int num_axes() const { return dim + (includes_time ? 1 : 0); }
  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

/// Spatial basis used for the stored solution: total degree <= `degree`.
BasisSpec spatial_spec(int degree, int dim);
BasisSpec spacetime_spec(int degree, int dim, Truncation truncation);

/// Per-axis Legendre degrees of one basis function; unused axes are 0.
using MultiIndex = std::array<int, 4>;

/// Canonical ordering:
///   TotalDegree   - by total degree, then graded lexicographic (axis 0 power
///                   descending first), e.g. (1, tau, xi, tau^2, tau xi, xi^2)
///   TensorProduct - lexicographic in the per-axis degrees, axis 0 slowest.
std::vector<MultiIndex> basis_indices(const BasisSpec& spec);
int basis_size(const BasisSpec& spec);

/// Orthonormal Legendre polynomial sqrt(2n+1) P_n(x), so that
/// (1/2) int_{-1}^{1} p_m p_n dx = delta_mn.
double legendre(int n, double x);
double legendre_derivative(int n, double x);

/// Fills values[k] = p_k(x) and derivs[k] = p_k'(x) for k = 0..max_degree.
void legendre_table(int max_degree, double x, std::span<double> values,
                    std::span<double> derivs);

Eigen::VectorXd spatial_basis_eval(const BasisSpec& spec,
                                   std::span<const double> point);
Eigen::VectorXd spacetime_basis_eval(const BasisSpec& spec,
                                     std::span<const double> point);
/// Partial derivative of every basis function along reference axis `axis`.
Eigen::VectorXd basis_partial_eval(const BasisSpec& spec,
                                   std::span<const double> point, int axis);

/// Tensor-product Gauss-Legendre rule. `nodes` is (dim x n), one column per
/// point; weights sum to 2^dim.
struct QuadratureRule {
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;

  int dim() const { return static_cast<int>(nodes.rows()); }
  int size() const { return static_cast<int>(weights.size()); }
};

QuadratureRule gauss_rule(int points_per_axis, int dim);

/// Embeds a (d-1)-dimensional rule into the face {x_axis = value} of [-1,1]^d.
QuadratureRule face_rule(const QuadratureRule& lower, int axis, double value);

/// Points per axis used for every bilinear form of the linear schemes.
inline int default_points(int degree) { return degree + 2; }

/// Values and partial derivatives of a basis tabulated at a point set.
struct BasisTable {
  Eigen::MatrixXd values;                 // points x basis
  std::vector<Eigen::MatrixXd> partials;  // one (points x basis) per axis
};

/// `points` has one column per point and spec.num_axes() rows. Partials are
/// only tabulated when `with_partials` is set.
BasisTable tabulate(const BasisSpec& spec, const Eigen::MatrixXd& points,
                    bool with_partials = true);

}  // namespace ridg
