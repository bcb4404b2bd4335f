#pragma once

#include <array>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "ridg/mesh_field.hpp"

namespace ridg::testing {

inline CoeffField random_field(const Mesh& mesh, const BasisSpec& spec, unsigned seed) {
  CoeffField q(mesh, spec);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index k = 0; k < q.coeffs.size(); ++k) q.coeffs.data()[k] = u(rng);
  return q;
}

/// Random polynomial of total degree <= degree in dim variables.
struct Polynomial {
  int dim = 1;
  std::vector<std::array<int, 3>> powers;
  std::vector<double> coeffs;

  Polynomial(int degree, int d, unsigned seed) : dim(d) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; b <= (d > 1 ? degree - a : 0); ++b)
        for (int c = 0; c <= (d > 2 ? degree - a - b : 0); ++c) {
          powers.push_back({a, b, c});
          coeffs.push_back(u(rng));
        }
  }

  double operator()(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < powers.size(); ++k) {
      double term = coeffs[k];
      for (int a = 0; a < dim; ++a) term *= std::pow(x[a], powers[k][a]);
      s += term;
    }
    return s;
  }
};

}  // namespace ridg::testing
