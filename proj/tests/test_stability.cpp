#include <complex>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "ridg/stability.hpp"

using namespace ridg;
using std::numbers::pi;

namespace {

Courant courant(int dim, double x, double y = 0.0, double z = 0.0) {
  Courant c;
  c.dim = dim;
  c.nu = {x, y, z};
  return c;
}

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& m) {
  return Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(m, false).eigenvalues();
}

}  // namespace

TEST(Stability, ZeroVelocityIsIdentity) {
  for (Scheme s : {Scheme::Lidg, Scheme::Ridg}) {
    const SchemeBases b = scheme_bases(s, 2, 2);
    const Eigen::MatrixXcd m = amplification_md(s, b, courant(2, 0.0), {0.7, 2.1, 0.0});
    EXPECT_LT((m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).norm(), 1e-14);
    EXPECT_LT(std::abs(stability_function(s, build_reference_operators(b), courant(2, 0.0), 21)),
              1e-12);
  }
}

TEST(Stability, DegreeZeroLidgSymbol) {
  const SchemeBases b = scheme_bases(Scheme::Lidg, 0, 1);
  for (double w : {0.0, 0.9, 2.5}) {
    const std::complex<double> expect = 1.0 - 0.6 + 0.6 * std::polar(1.0, -w);
    EXPECT_LT(std::abs(amplification_1d(Scheme::Lidg, b, 0.6, w)(0, 0) - expect), 1e-14);
  }
}

TEST(Stability, ConstantModeHasUnitEigenvalue) {
  for (Scheme s : {Scheme::Lidg, Scheme::Ridg})
    for (double nu : {0.3, 0.9}) {
      const Eigen::MatrixXcd m = amplification_1d(s, scheme_bases(s, 3, 1), nu, 0.0);
      // The constant mode is invariant: first column is e_0.
      EXPECT_LT(std::abs(m(0, 0) - 1.0), 1e-12);
      EXPECT_LT(m.col(0).tail(m.rows() - 1).norm(), 1e-12);
    }
}

TEST(Stability, ClosedFormMatchesStencil) {
  for (Scheme s : {Scheme::Lidg, Scheme::Ridg})
    for (int m = 0; m <= 4; ++m) {
      const SchemeBases b = scheme_bases(s, m, 1);
      const ReferenceOperators ops = build_reference_operators(b);
      for (double nu : {0.45, 1.1, -0.8}) {
        const StepStencil st = step_stencil(s, ops, courant(1, nu));
        for (double w : {0.3, 1.7, pi, 5.2})
          EXPECT_LT((amplification_1d(s, b, nu, w) - amplification_md(st, {w, 0, 0})).norm(),
                    1e-10)
              << m << ' ' << nu << ' ' << w;
      }
    }
}

TEST(Stability, TwoDimensionalEmbedsOneDimensional) {
  for (Scheme s : {Scheme::Lidg, Scheme::Ridg}) {
    const int m = 2;
    const Eigen::VectorXcd one = eigenvalues(amplification_1d(s, scheme_bases(s, m, 1), 0.6, pi));
    const Eigen::VectorXcd two =
        eigenvalues(amplification_md(s, scheme_bases(s, m, 2), courant(2, 0.6), {pi, pi, 0}));
    for (Eigen::Index k = 0; k < one.size(); ++k)
      EXPECT_LT((two.array() - one[k]).abs().minCoeff(), 1e-10) << k;
  }
}

TEST(Stability, LidgDegreeOneThreshold) {
  const ReferenceOperators ops = build_reference_operators(scheme_bases(Scheme::Lidg, 1, 1));
  EXPECT_GT(stability_function(Scheme::Lidg, ops, courant(1, 0.4), 2001), 5e-4);
  EXPECT_LE(stability_function(Scheme::Lidg, ops, courant(1, 0.3), 2001), 5e-4);
  EXPECT_TRUE(is_linearly_stable(Scheme::Lidg, ops, courant(1, 0.3), 5e-4, 2001));
  EXPECT_FALSE(is_linearly_stable(Scheme::Lidg, ops, courant(1, 0.4), 5e-4, 2001));
}

TEST(Stability, DegreeFiveSamples) {
  const ReferenceOperators lidg = build_reference_operators(scheme_bases(Scheme::Lidg, 5, 1));
  EXPECT_GT(stability_function(Scheme::Lidg, lidg, courant(1, 0.10), 2001), 5e-4);
  // RIDG m=5 has a shallow growth band below nu = 1 (peak near 2e-3) before
  // the sharp onset past 1.03; see the notes on the 1D table.
  const ReferenceOperators ridg = build_reference_operators(scheme_bases(Scheme::Ridg, 5, 1));
  EXPECT_LT(stability_function(Scheme::Ridg, ridg, courant(1, 1.0), 2001), 5e-3);
  EXPECT_LE(stability_function(Scheme::Ridg, ridg, courant(1, 0.8), 2001), 5e-4);
  EXPECT_GT(stability_function(Scheme::Ridg, ridg, courant(1, 1.1), 2001), 1e-2);
}

TEST(Stability, MaxCflLowDegrees) {
  EXPECT_NEAR(max_cfl(Scheme::Lidg, 0, 1, {1, 0, 0}).max_cfl, 1.0, 0.005);
  EXPECT_NEAR(max_cfl(Scheme::Ridg, 0, 1, {1, 0, 0}).max_cfl, 1.0, 0.005);
  EXPECT_NEAR(max_cfl(Scheme::Lidg, 1, 1, {1, 0, 0}).max_cfl, 0.333, 0.005);
  EXPECT_NEAR(max_cfl(Scheme::Ridg, 1, 1, {1, 0, 0}).max_cfl, 1.168, 0.005);
  const StabilityReport r = max_cfl(Scheme::Ridg, 3, 1, {1, 0, 0});
  EXPECT_NEAR(r.max_cfl, 1.097, 0.005);
  EXPECT_LE(r.upper - r.lower, 1e-3);
}

TEST(Stability, TwoDimensionalRidgDegreeOne) {
  const ReferenceOperators ops = build_reference_operators(scheme_bases(Scheme::Ridg, 1, 2));
  // The diagonal threshold sits near 1.07.
  EXPECT_TRUE(is_linearly_stable(Scheme::Ridg, ops, courant(2, 0.95, 0.95), 5e-4, 201));
  EXPECT_FALSE(is_linearly_stable(Scheme::Ridg, ops, courant(2, 1.10, 1.10), 5e-4, 201));
}

TEST(Stability, BracketFailureIsReported) {
  StabilityOptions opt;
  opt.bracket_upper = 0.5;
  EXPECT_THROW(max_cfl(Scheme::Lidg, 0, 1, {1, 0, 0}, opt), BracketError);
}

TEST(Stability, ScanOriginAndSymmetry) {
  const std::vector<double> grid{0.0, 0.05, 0.1, 0.2};
  const Eigen::MatrixXd v = stability_scan_2d(Scheme::Lidg, 1, grid, grid, 41);
  EXPECT_NEAR(v(0, 0), 1.0, 1e-9);
  EXPECT_LT((v - v.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Stability, CsvLayout) {
  StabilityReport r;
  r.scheme = Scheme::Ridg;
  r.degree = 3;
  r.dim = 2;
  r.direction = {1, 1, 0};
  r.max_cfl = 0.8;
  r.epsilon = 5e-4;
  r.omega_resolution = 201;
  std::ostringstream out;
  write_stability_csv(out, {r});
  EXPECT_EQ(out.str(),
            "scheme,m_deg,m_dim,direction,max_cfl,epsilon,omega_resolution\n"
            "ridg,3,2,1;1,0.8,5e-04,201\n");
}
