#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ridg/mesh_field.hpp"

using namespace ridg;

TEST(Mesh, NeighbourWrapsPeriodically) {
  const Mesh m = Mesh::uniform(2, 4, -1.0, 1.0);
  EXPECT_EQ(m.num_elements(), 16);
  EXPECT_EQ(m.neighbor(0, {-1, 0, 0}), 3);
  EXPECT_EQ(m.neighbor(0, {0, -1, 0}), 12);
  EXPECT_EQ(m.neighbor(5, {1, 1, 0}), 10);
  EXPECT_DOUBLE_EQ(m.width(0), 0.5);
  EXPECT_DOUBLE_EQ(m.element_volume(), 0.25);
}

TEST(Mesh, LocateReturnsReferenceCoordinates) {
  const Mesh m = Mesh::uniform(1, 4, 0.0, 2.0);
  double xi[1];
  const double x[1] = {1.25};
  EXPECT_EQ(m.locate(x, xi), 2);
  EXPECT_NEAR(xi[0], 0.0, 1e-14);
  const double wrapped[1] = {2.25};
  EXPECT_EQ(m.locate(wrapped, xi), 0);
  EXPECT_NEAR(xi[0], 0.0, 1e-14);
}

TEST(Field, ProjectionReproducesPolynomials) {
  const Mesh m = Mesh::uniform(2, 3, 0.0, 1.0);
  auto f = [](std::span<const double> x) { return 1.0 + x[0] - 2 * x[0] * x[1] + x[1] * x[1]; };
  const CoeffField q = project(f, m, spatial_spec(2, 2));
  for (double a : {0.1, 0.45, 0.93})
    for (double b : {0.05, 0.5, 0.77}) {
      const double x[2] = {a, b};
      EXPECT_NEAR(evaluate_field(q, x), f(x), 1e-13);
    }
  EXPECT_LT(error_norms(q, f, gauss_rule(5, 2)).linf, 1e-13);
}

TEST(Field, TotalMassIsTheIntegral) {
  const Mesh m = Mesh::uniform(1, 8, 0.0, 2.0);
  auto f = [](std::span<const double> x) { return x[0] * x[0]; };
  EXPECT_NEAR(total_mass(project(f, m, spatial_spec(2, 1))), 8.0 / 3.0, 1e-13);
}

TEST(Field, RelativeErrorNorms) {
  const Mesh m = Mesh::uniform(1, 5, 0.0, 1.0);
  auto f = [](std::span<const double>) { return 2.0; };
  CoeffField q = project(f, m, spatial_spec(1, 1));
  q.coeffs(0, 0) += 0.5;  // error 0.5 on one fifth of the domain
  const ErrorNorms e = error_norms(q, f, gauss_rule(3, 1));
  EXPECT_NEAR(e.l1, 0.5 * 0.2 / 2.0, 1e-14);
  EXPECT_NEAR(e.l2, std::sqrt(0.25 * 0.2) / 2.0, 1e-14);
  EXPECT_NEAR(e.linf, 0.25, 1e-14);
}

TEST(Field, ProjectionErrorConvergesAtDegreePlusOne) {
  auto f = [](std::span<const double> x) { return std::sin(2 * std::numbers::pi * x[0]); };
  std::vector<double> err, h;
  for (int n : {8, 16, 32}) {
    const Mesh m = Mesh::uniform(1, n, 0.0, 1.0);
    err.push_back(error_norms(project(f, m, spatial_spec(2, 1)), f, gauss_rule(5, 1)).l2);
    h.push_back(1.0 / n);
  }
  const auto order = estimate_order(err, h);
  EXPECT_FALSE(order[0].has_value());
  EXPECT_NEAR(*order[2], 3.0, 0.1);
}

TEST(Field, EstimateOrderFormula) {
  const std::vector<double> e{1e-2, 1e-2 / 16};
  const std::vector<double> h{0.2, 0.1};
  EXPECT_NEAR(*estimate_order(e, h)[1], 4.0, 1e-12);
}
