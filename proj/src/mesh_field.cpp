#include "ridg/mesh_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ridg/parallel.hpp"

namespace ridg {

Mesh Mesh::uniform(int dim, int cells_per_axis, double lo, double hi) {
  if (dim < 1 || dim > 3) throw std::domain_error("mesh dimension must be 1-3");
  if (cells_per_axis < 1) throw std::domain_error("need at least one cell");
  if (!(hi > lo)) throw std::domain_error("mesh bounds must satisfy hi > lo");
  Mesh m;
  m.dim = dim;
  for (int a = 0; a < dim; ++a) {
    m.cells[a] = cells_per_axis;
    m.lower[a] = lo;
    m.upper[a] = hi;
  }
  return m;
}

double Mesh::min_width() const {
  double w = width(0);
  for (int a = 1; a < dim; ++a) w = std::min(w, width(a));
  return w;
}

int Mesh::num_elements() const {
  int n = 1;
  for (int a = 0; a < dim; ++a) n *= cells[a];
  return n;
}

double Mesh::element_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= width(a);
  return v;
}

double Mesh::domain_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= upper[a] - lower[a];
  return v;
}

Index3 Mesh::coords(int elem) const {
  Index3 c{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    c[a] = elem % cells[a];
    elem /= cells[a];
  }
  return c;
}

int Mesh::index(Index3 c) const {
  int idx = 0;
  for (int a = dim - 1; a >= 0; --a) {
    const int n = cells[a];
    const int wrapped = ((c[a] % n) + n) % n;
    idx = idx * n + wrapped;
  }
  return idx;
}

int Mesh::neighbor(int elem, Index3 offset) const {
  Index3 c = coords(elem);
  for (int a = 0; a < dim; ++a) c[a] += offset[a];
  return index(c);
}

std::array<double, 3> Mesh::center(int elem) const {
  const Index3 c = coords(elem);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) x[a] = lower[a] + (c[a] + 0.5) * width(a);
  return x;
}

int Mesh::locate(std::span<const double> x, std::span<double> xi) const {
  Index3 c{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    const double len = upper[a] - lower[a];
    double rel = std::fmod(x[a] - lower[a], len);
    if (rel < 0) rel += len;
    int i = static_cast<int>(std::floor(rel / width(a)));
    i = std::clamp(i, 0, cells[a] - 1);
    c[a] = i;
    const double local = (rel - (i + 0.5) * width(a)) / (0.5 * width(a));
    xi[a] = std::clamp(local, -1.0, 1.0);
  }
  return index(c);
}

CoeffField::CoeffField(const Mesh& m, const BasisSpec& s)
    : mesh(m), spec(s), coeffs(Eigen::MatrixXd::Zero(basis_size(s), m.num_elements())) {}

CoeffField project(const PointFunction& f, const Mesh& mesh,
                   const BasisSpec& spec, int points_per_axis) {
  if (spec.includes_time) throw std::domain_error("project needs a spatial basis");
  if (spec.dim != mesh.dim) throw std::domain_error("basis and mesh dimension differ");
  const int npts = points_per_axis > 0 ? points_per_axis : default_points(spec.degree);
  const QuadratureRule rule = gauss_rule(npts, mesh.dim);
  const BasisTable table = tabulate(spec, rule.nodes, false);
  const double measure = std::pow(2.0, mesh.dim);
  // Projection operator: Q = (1/2^d) Phi^T diag(w) f
  const Eigen::MatrixXd op =
      table.values.transpose() * rule.weights.asDiagonal() * (1.0 / measure);

  CoeffField field(mesh, spec);
  parallel_for(0, mesh.num_elements(), [&](int e) {
    const auto center = mesh.center(e);
    Eigen::VectorXd samples(rule.size());
    std::array<double, 3> x{};
    for (int p = 0; p < rule.size(); ++p) {
      for (int a = 0; a < mesh.dim; ++a)
        x[a] = center[a] + 0.5 * mesh.width(a) * rule.nodes(a, p);
      samples[p] = f(std::span<const double>(x.data(), mesh.dim));
    }
    field.coeffs.col(e) = op * samples;
  });
  return field;
}

double evaluate_field(const CoeffField& field, std::span<const double> x) {
  std::array<double, 3> xi{};
  const int e = field.mesh.locate(x, xi);
  const Eigen::VectorXd phi =
      spatial_basis_eval(field.spec, std::span<const double>(xi.data(), field.mesh.dim));
  return phi.dot(field.coeffs.col(e));
}

ErrorNorms error_norms(const CoeffField& field, const PointFunction& exact,
                       const QuadratureRule& rule) {
  const Mesh& mesh = field.mesh;
  const int d = mesh.dim;
  if (rule.dim() != d) throw std::domain_error("norm rule dimension mismatch");

  // Integration nodes followed by the 2^d element corners (Linf only).
  const int ncorner = 1 << d;
  Eigen::MatrixXd points(d, rule.size() + ncorner);
  points.leftCols(rule.size()) = rule.nodes;
  for (int c = 0; c < ncorner; ++c)
    for (int a = 0; a < d; ++a)
      points(a, rule.size() + c) = ((c >> a) & 1) ? 1.0 : -1.0;
  const BasisTable table = tabulate(field.spec, points, false);

  const int ne = mesh.num_elements();
  const double jac = mesh.element_volume() / std::pow(2.0, d);
  std::vector<std::array<double, 6>> partial(ne);
  parallel_for(0, ne, [&](int e) {
    const auto center = mesh.center(e);
    const Eigen::VectorXd uh = table.values * field.coeffs.col(e);
    std::array<double, 6> acc{0, 0, 0, 0, 0, 0};  // err l1,l2,inf; exact l1,l2,inf
    std::array<double, 3> x{};
    for (int p = 0; p < points.cols(); ++p) {
      for (int a = 0; a < d; ++a) x[a] = center[a] + 0.5 * mesh.width(a) * points(a, p);
      const double q = exact(std::span<const double>(x.data(), d));
      const double err = std::abs(uh[p] - q);
      acc[2] = std::max(acc[2], err);
      acc[5] = std::max(acc[5], std::abs(q));
      if (p < rule.size()) {
        const double w = rule.weights[p] * jac;
        acc[0] += w * err;
        acc[1] += w * err * err;
        acc[3] += w * std::abs(q);
        acc[4] += w * q * q;
      }
    }
    partial[e] = acc;
  });

  std::array<double, 6> total{0, 0, 0, 0, 0, 0};
  for (const auto& acc : partial) {
    for (int k : {0, 1, 3, 4}) total[k] += acc[k];
    total[2] = std::max(total[2], acc[2]);
    total[5] = std::max(total[5], acc[5]);
  }
  if (total[3] == 0.0 || total[5] == 0.0)
    throw std::domain_error("exact solution is identically zero; relative error undefined");
  return ErrorNorms{total[0] / total[3], std::sqrt(total[1]) / std::sqrt(total[4]),
                    total[2] / total[5]};
}

double total_mass(const CoeffField& field) {
  return field.coeffs.row(0).sum() * field.mesh.element_volume();
}

std::vector<std::optional<double>> estimate_order(std::span<const double> errors,
                                                  std::span<const double> h) {
  if (errors.size() != h.size() || errors.size() < 2)
    throw std::domain_error("estimate_order needs two equal-length lists of size >= 2");
  for (std::size_t k = 0; k < errors.size(); ++k)
    if (!(errors[k] > 0.0) || !(h[k] > 0.0))
      throw std::domain_error("errors and mesh sizes must be strictly positive");
  std::vector<std::optional<double>> orders(errors.size());
  for (std::size_t k = 1; k < errors.size(); ++k)
    orders[k] = std::log(errors[k - 1] / errors[k]) / std::log(h[k - 1] / h[k]);
  return orders;
}

}  // namespace ridg
