#include "ridg/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ridg {

BasisSpec spatial_spec(int degree, int dim) {
  return BasisSpec{degree, dim, Truncation::TotalDegree, false};
}

BasisSpec spacetime_spec(int degree, int dim, Truncation truncation) {
  return BasisSpec{degree, dim, truncation, true};
}

namespace {

void check_spec(const BasisSpec& spec) {
  if (spec.degree < 0) throw std::domain_error("basis degree must be >= 0");
  if (spec.dim < 1 || spec.dim > 3)
    throw std::domain_error("basis dimension must be 1, 2 or 3");
}

// All tuples of `axes` non-negative integers summing to `total`, with the
// first component descending.
void graded_tuples(int axes, int total, int axis, MultiIndex& current,
                   std::vector<MultiIndex>& out) {
  if (axis == axes - 1) {
    current[axis] = total;
    out.push_back(current);
    current[axis] = 0;
    return;
  }
  for (int k = total; k >= 0; --k) {
    current[axis] = k;
    graded_tuples(axes, total - k, axis + 1, current, out);
  }
  current[axis] = 0;
}

void check_point(const BasisSpec& spec, std::span<const double> point) {
  if (static_cast<int>(point.size()) != spec.num_axes())
    throw std::domain_error("point has " + std::to_string(point.size()) +
                            " coordinates, basis expects " +
                            std::to_string(spec.num_axes()));
  for (double x : point) {
    if (!(std::abs(x) <= 1.0 + 1e-12))
      throw std::domain_error("point outside the reference element");
  }
}

}  // namespace

std::vector<MultiIndex> basis_indices(const BasisSpec& spec) {
  check_spec(spec);
  const int axes = spec.num_axes();
  std::vector<MultiIndex> out;
  if (spec.truncation == Truncation::TotalDegree) {
    MultiIndex current{0, 0, 0, 0};
    for (int total = 0; total <= spec.degree; ++total)
      graded_tuples(axes, total, 0, current, out);
  } else {
    const int n = spec.degree + 1;
    int count = 1;
    for (int a = 0; a < axes; ++a) count *= n;
    out.reserve(count);
    for (int flat = 0; flat < count; ++flat) {
      MultiIndex idx{0, 0, 0, 0};
      int rem = flat;
      for (int a = axes - 1; a >= 0; --a) {
        idx[a] = rem % n;
        rem /= n;
      }
      out.push_back(idx);
    }
  }
  return out;
}

int basis_size(const BasisSpec& spec) {
  return static_cast<int>(basis_indices(spec).size());
}

void legendre_table(int max_degree, double x, std::span<double> values,
                    std::span<double> derivs) {
  // Unnormalized P_n and P_n' by the three-term recurrences, scaled at the end.
  double p_prev = 1.0, p = x;
  double d_prev = 0.0, d = 1.0;
  values[0] = 1.0;
  derivs[0] = 0.0;
  if (max_degree >= 1) {
    values[1] = x;
    derivs[1] = 1.0;
  }
  for (int n = 1; n < max_degree; ++n) {
    const double p_next = ((2.0 * n + 1.0) * x * p - n * p_prev) / (n + 1.0);
    const double d_next = d_prev + (2.0 * n + 1.0) * p;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
    values[n + 1] = p;
    derivs[n + 1] = d;
  }
  for (int n = 0; n <= max_degree; ++n) {
    const double scale = std::sqrt(2.0 * n + 1.0);
    values[n] *= scale;
    derivs[n] *= scale;
  }
}

double legendre(int n, double x) {
  std::vector<double> v(n + 1), d(n + 1);
  legendre_table(n, x, v, d);
  return v[n];
}

double legendre_derivative(int n, double x) {
  std::vector<double> v(n + 1), d(n + 1);
  legendre_table(n, x, v, d);
  return d[n];
}

namespace {

Eigen::VectorXd eval_impl(const BasisSpec& spec, std::span<const double> point,
                          int derivative_axis) {
  check_point(spec, point);
  const auto indices = basis_indices(spec);
  const int axes = spec.num_axes();
  const int n = spec.degree + 1;
  std::vector<double> values(axes * n), derivs(axes * n);
  for (int a = 0; a < axes; ++a)
    legendre_table(spec.degree, point[a],
                   std::span<double>(values).subspan(a * n, n),
                   std::span<double>(derivs).subspan(a * n, n));
  Eigen::VectorXd out(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    double prod = 1.0;
    for (int a = 0; a < axes; ++a) {
      const int deg = indices[k][a];
      prod *= (a == derivative_axis) ? derivs[a * n + deg] : values[a * n + deg];
    }
    out[k] = prod;
  }
  return out;
}

}  // namespace

Eigen::VectorXd spatial_basis_eval(const BasisSpec& spec,
                                   std::span<const double> point) {
  if (spec.includes_time)
    throw std::domain_error("spatial_basis_eval called with a spacetime basis");
  return eval_impl(spec, point, -1);
}

Eigen::VectorXd spacetime_basis_eval(const BasisSpec& spec,
                                     std::span<const double> point) {
  if (!spec.includes_time)
    throw std::domain_error("spacetime_basis_eval called with a spatial basis");
  return eval_impl(spec, point, -1);
}

Eigen::VectorXd basis_partial_eval(const BasisSpec& spec,
                                   std::span<const double> point, int axis) {
  if (axis < 0 || axis >= spec.num_axes())
    throw std::domain_error("invalid derivative axis " + std::to_string(axis));
  return eval_impl(spec, point, axis);
}

QuadratureRule gauss_rule(int points_per_axis, int dim) {
  if (points_per_axis < 1) throw std::domain_error("need at least one point");
  if (dim < 0) throw std::domain_error("negative quadrature dimension");
  const int n = points_per_axis;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * z * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? z : p1;
      const double pm = (n == 1) ? 1.0 : p0;
      dp = n * (z * pn - pm) / (z * z - 1.0);
      const double dz = pn / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      // Recompute the derivative at the converged root for the weight.
      double p0 = 1.0, p1 = z;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * z * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? z : p1;
      const double pm = (n == 1) ? 1.0 : p0;
      dp = n * (z * pn - pm) / (z * z - 1.0);
    }
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = weight;
    w[n - 1 - i] = weight;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;

  int total = 1;
  for (int a = 0; a < dim; ++a) total *= n;
  QuadratureRule rule;
  rule.nodes.resize(dim, total);
  rule.weights.resize(total);
  for (int flat = 0; flat < total; ++flat) {
    int rem = flat;
    double weight = 1.0;
    for (int a = dim - 1; a >= 0; --a) {
      const int i = rem % n;
      rem /= n;
      rule.nodes(a, flat) = x[i];
      weight *= w[i];
    }
    rule.weights[flat] = weight;
  }
  return rule;
}

QuadratureRule face_rule(const QuadratureRule& lower, int axis, double value) {
  const int d = lower.dim() + 1;
  if (axis < 0 || axis >= d) throw std::domain_error("invalid face axis");
  QuadratureRule rule;
  rule.nodes.resize(d, lower.size());
  rule.weights = lower.weights;
  for (int p = 0; p < lower.size(); ++p) {
    int src = 0;
    for (int a = 0; a < d; ++a)
      rule.nodes(a, p) = (a == axis) ? value : lower.nodes(src++, p);
  }
  return rule;
}

BasisTable tabulate(const BasisSpec& spec, const Eigen::MatrixXd& points,
                    bool with_partials) {
  const auto indices = basis_indices(spec);
  const int axes = spec.num_axes();
  if (points.rows() != axes)
    throw std::domain_error("tabulate: point dimension does not match basis");
  const int n = spec.degree + 1;
  const int np = static_cast<int>(points.cols());
  const int nb = static_cast<int>(indices.size());

  BasisTable table;
  table.values.resize(np, nb);
  if (with_partials) table.partials.assign(axes, Eigen::MatrixXd(np, nb));

  std::vector<double> values(axes * n), derivs(axes * n);
  for (int p = 0; p < np; ++p) {
    for (int a = 0; a < axes; ++a)
      legendre_table(spec.degree, points(a, p),
                     std::span<double>(values).subspan(a * n, n),
                     std::span<double>(derivs).subspan(a * n, n));
    for (int k = 0; k < nb; ++k) {
      double prod = 1.0;
      for (int a = 0; a < axes; ++a) prod *= values[a * n + indices[k][a]];
      table.values(p, k) = prod;
      if (!with_partials) continue;
      for (int da = 0; da < axes; ++da) {
        double part = 1.0;
        for (int a = 0; a < axes; ++a)
          part *= (a == da) ? derivs[a * n + indices[k][a]]
                            : values[a * n + indices[k][a]];
        table.partials[da](p, k) = part;
      }
    }
  }
  return table;
}

}  // namespace ridg
