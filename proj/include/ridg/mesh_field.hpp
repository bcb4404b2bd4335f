#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ridg/basis.hpp"

namespace ridg {

using Index3 = std::array<int, 3>;

/// Uniform, fully periodic Cartesian mesh in 1-3 dimensions.
///
/// Elements are numbered with the x index fastest:
/// elem = i + nx * (j + ny * k).
struct Mesh {
  int dim = 1;
  Index3 cells{1, 1, 1};
  std::array<double, 3> lower{0.0, 0.0, 0.0};
  std::array<double, 3> upper{1.0, 1.0, 1.0};

  /// Same number of cells and bounds on every axis.
  static Mesh uniform(int dim, int cells_per_axis, double lo, double hi);

  double width(int axis) const {
    return (upper[axis] - lower[axis]) / cells[axis];
  }
  double min_width() const;
  int num_elements() const;
  double element_volume() const;
  double domain_volume() const;

  Index3 coords(int elem) const;
  /// Index of the element at integer coordinates, wrapped periodically.
  int index(Index3 c) const;
  int neighbor(int elem, Index3 offset) const;
  std::array<double, 3> center(int elem) const;

  /// Element containing physical point x (periodically wrapped) and the
  /// reference coordinates of x inside it.
  int locate(std::span<const double> x, std::span<double> xi) const;
};

/// Pointwise scalar function of physical coordinates (dim entries).
using PointFunction = std::function<double(std::span<const double>)>;

/// Per-element spatial DG coefficients. Column e holds Q_e.
struct CoeffField {
  Mesh mesh;
  BasisSpec spec;
  Eigen::MatrixXd coeffs;

  CoeffField() = default;
  CoeffField(const Mesh& m, const BasisSpec& s);

  int num_elements() const { return static_cast<int>(coeffs.cols()); }
  int num_basis() const { return static_cast<int>(coeffs.rows()); }
};

/// L2 projection onto the spatial basis using `points_per_axis` Gauss points
/// per axis (default degree + 2).
CoeffField project(const PointFunction& f, const Mesh& mesh,
                   const BasisSpec& spec, int points_per_axis = 0);

double evaluate_field(const CoeffField& field, std::span<const double> x);

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Relative L1/L2/Linf errors of `field` against `exact`, each normalized by
/// the same norm of `exact` over the domain. Integrals use `rule` per
/// element; Linf is the max over the rule nodes and element corners.
ErrorNorms error_norms(const CoeffField& field, const PointFunction& exact,
                       const QuadratureRule& rule);

/// sum_e Q_e[0] * |T_e|
double total_mass(const CoeffField& field);

/// Observed order between consecutive entries,
/// log(e_{k-1}/e_k) / log(h_{k-1}/h_k). The first entry is empty.
std::vector<std::optional<double>> estimate_order(std::span<const double> errors,
                                                  std::span<const double> h);

}  // namespace ridg
