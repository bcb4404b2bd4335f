#include <cmath>
#include <random>
#include <span>

#include <gtest/gtest.h>

#include "ridg/basis.hpp"

using namespace ridg;

namespace {

// Mean over [-1,1]^n of the Gram matrix, via a rule with extra points.
Eigen::MatrixXd gram(const BasisSpec& spec) {
  const QuadratureRule rule = gauss_rule(spec.degree + 2, spec.num_axes());
  const Eigen::MatrixXd v = tabulate(spec, rule.nodes, false).values;
  const Eigen::VectorXd w = rule.weights / std::pow(2.0, spec.num_axes());
  return v.transpose() * w.asDiagonal() * v;
}

int binomial(int n, int k) {
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(Basis, LegendreValues) {
  EXPECT_NEAR(legendre(0, 0.3), 1.0, 1e-15);
  EXPECT_NEAR(legendre(1, 0.3), std::sqrt(3.0) * 0.3, 1e-15);
  EXPECT_NEAR(legendre(2, 0.3), std::sqrt(5.0) * 0.5 * (3 * 0.09 - 1), 1e-15);
  EXPECT_NEAR(legendre(3, 1.0), std::sqrt(7.0), 1e-14);
  EXPECT_NEAR(legendre(4, -1.0), 3.0, 1e-14);
}

TEST(Basis, LegendreDerivativeMatchesDifferences) {
  const double h = 1e-6;
  for (int n = 0; n <= 9; ++n)
    for (double x : {-0.9, -0.2, 0.41, 0.77}) {
      const double fd = (legendre(n, x + h) - legendre(n, x - h)) / (2 * h);
      EXPECT_NEAR(legendre_derivative(n, x), fd, 1e-6 * (1 + std::abs(fd))) << n << ' ' << x;
    }
}

TEST(Basis, Sizes) {
  for (int d = 1; d <= 3; ++d)
    for (int m = 0; m <= 5; ++m) {
      EXPECT_EQ(basis_size(spatial_spec(m, d)), binomial(m + d, d));
      EXPECT_EQ(basis_size(spacetime_spec(m, d, Truncation::TotalDegree)),
                binomial(m + d + 1, d + 1));
      EXPECT_EQ(basis_size(spacetime_spec(m, d, Truncation::TensorProduct)),
                static_cast<int>(std::pow(m + 1, d + 1)));
    }
  EXPECT_EQ(basis_size(spatial_spec(2, 1)), 3);
  EXPECT_EQ(basis_size(spacetime_spec(1, 1, Truncation::TensorProduct)), 4);
}

TEST(Basis, TotalDegreeOrdering) {
  const auto idx = basis_indices(spacetime_spec(2, 1, Truncation::TotalDegree));
  ASSERT_EQ(idx.size(), 6u);
  // 1, tau, xi, tau^2, tau xi, xi^2
  const int expect[6][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (int k = 0; k < 6; ++k) {
    EXPECT_EQ(idx[k][0], expect[k][0]);
    EXPECT_EQ(idx[k][1], expect[k][1]);
  }
}

TEST(Basis, Orthonormal) {
  for (int d = 1; d <= 3; ++d)
    for (int m = 0; m <= (d == 3 ? 3 : 5); ++m)
      for (const BasisSpec& s : {spatial_spec(m, d),
                                 spacetime_spec(m, d, Truncation::TotalDegree),
                                 spacetime_spec(m, d, Truncation::TensorProduct)}) {
        const Eigen::MatrixXd g = gram(s);
        EXPECT_LT((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff(),
                  1e-12)
            << "m=" << m << " d=" << d << " axes=" << s.num_axes();
      }
}

TEST(Basis, GaussRuleExactness) {
  for (int n = 1; n <= 8; ++n) {
    const QuadratureRule r = gauss_rule(n, 1);
    EXPECT_NEAR(r.weights.sum(), 2.0, 1e-14);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (int k = 0; k < r.size(); ++k) s += r.weights[k] * std::pow(r.nodes(0, k), p);
      const double exact = (p % 2) ? 0.0 : 2.0 / (p + 1);
      EXPECT_NEAR(s, exact, 1e-14) << n << ' ' << p;
    }
  }
  const QuadratureRule r3 = gauss_rule(3, 3);
  EXPECT_EQ(r3.size(), 27);
  EXPECT_NEAR(r3.weights.sum(), 8.0, 1e-13);
}

TEST(Basis, FaceRuleSitsOnFace) {
  const QuadratureRule lower = gauss_rule(3, 1);
  const QuadratureRule f = face_rule(lower, 1, -1.0);
  ASSERT_EQ(f.dim(), 2);
  for (int k = 0; k < f.size(); ++k) {
    EXPECT_EQ(f.nodes(1, k), -1.0);
    EXPECT_EQ(f.nodes(0, k), lower.nodes(0, k));
  }
}

TEST(Basis, TabulatedPartialsMatchPointEvaluation) {
  const BasisSpec s = spacetime_spec(3, 2, Truncation::TensorProduct);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd pts(3, 4);
  for (int k = 0; k < pts.size(); ++k) pts.data()[k] = u(rng);
  const BasisTable t = tabulate(s, pts);
  for (int p = 0; p < 4; ++p) {
    const Eigen::Vector3d col = pts.col(p);
    const std::span<const double> x(col.data(), 3);
    EXPECT_LT((t.values.row(p).transpose() - spacetime_basis_eval(s, x)).norm(), 1e-13);
    for (int a = 0; a < 3; ++a)
      EXPECT_LT((t.partials[a].row(p).transpose() - basis_partial_eval(s, x, a)).norm(),
                1e-12);
  }
}
