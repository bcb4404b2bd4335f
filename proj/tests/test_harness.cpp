#include <sstream>

#include <gtest/gtest.h>

#include "ridg/harness.hpp"

using namespace ridg;

TEST(Config, ParsesKeysCommentsAndLists) {
  std::istringstream in(
      "# run\n"
      "problem = burgers1d\n"
      "scheme = rkdg  # trailing\n"
      "mdeg = 2\n"
      "meshes = 10, 20;40\n"
      "nu = 0.1\n"
      "\n"
      "direction = 1, 0.5\n");
  const RunConfig c = parse_config(in);
  EXPECT_EQ(c.problem, Problem::Burgers1d);
  EXPECT_EQ(c.scheme, Method::Rkdg);
  EXPECT_EQ(c.degree, 2);
  EXPECT_EQ(c.meshes, (std::vector<int>{10, 20, 40}));
  EXPECT_DOUBLE_EQ(c.nu, 0.1);
  EXPECT_DOUBLE_EQ(c.direction[1], 0.5);
  EXPECT_DOUBLE_EQ(c.direction[2], 0.0);
  EXPECT_DOUBLE_EQ(c.effective_final_time(), 0.4);
}

TEST(Config, LaterSettingsOverrideBase) {
  RunConfig base;
  base.nu = 0.5;
  base.degree = 4;
  std::istringstream in("nu = 0.7\n");
  const RunConfig c = parse_config(in, base);
  EXPECT_DOUBLE_EQ(c.nu, 0.7);
  EXPECT_EQ(c.degree, 4);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  RunConfig c;
  EXPECT_THROW(apply_setting(c, "colour", "red"), ConfigError);
  EXPECT_THROW(apply_setting(c, "nu", "fast"), ConfigError);
  EXPECT_THROW(apply_setting(c, "scheme", "weno"), ConfigError);
  std::istringstream in("nu 0.3\n");
  EXPECT_THROW(parse_config(in), ConfigError);
}

TEST(Config, ValidateCatchesInconsistentSettings) {
  RunConfig c;
  EXPECT_NO_THROW(validate(c));
  c.meshes = {40, 20};
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.nu = -1.0;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.epsilon = 0.0;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Harness, ExactSolutionAtTimeZeroIsInitialData) {
  for (Problem p : {Problem::Advection1d, Problem::Advection2d, Problem::Burgers2d}) {
    const ProblemSetup s = problem_setup(p);
    const std::array<double, 3> x{0.3, -0.2, 0.1};
    const std::span<const double> xs(x.data(), s.dim);
    EXPECT_NEAR(s.exact(xs, 0.0), s.initial(xs), 1e-14);
  }
}

TEST(Harness, ConvergenceCsvOrdersAreRecomputable) {
  RunConfig c;
  c.problem = Problem::Advection1d;
  c.degree = 2;
  c.meshes = {16, 32};
  c.final_time = 0.25;
  const ConvergenceTable t = run_convergence(c, Method::Ridg, 2, 0.9);
  std::ostringstream out;
  t.write_csv(out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "mesh,n_steps,runtime_s,l1,l1_order,l2,l2_order,linf,linf_order");
  const double expected = std::log(t.rows[0].errors.l2 / t.rows[1].errors.l2) / std::log(2.0);
  ASSERT_TRUE(t.rows[1].orders[1].has_value());
  EXPECT_NEAR(*t.rows[1].orders[1], expected, 1e-12);
  EXPECT_FALSE(t.rows[0].orders[1].has_value());
}

TEST(Harness, FailedRowsBreakOrderChain) {
  ConvergenceTable t;
  t.rows.resize(3);
  for (int k = 0; k < 3; ++k) {
    t.rows[k].mesh = 10 << k;
    t.rows[k].errors = {1.0 / (k + 1), 1.0 / (k + 1), 1.0 / (k + 1)};
  }
  t.rows[1].failed = true;
  t.compute_orders(1.0);
  EXPECT_FALSE(t.rows[1].orders[0].has_value());
  EXPECT_FALSE(t.rows[2].orders[0].has_value());
  std::ostringstream out;
  t.write_csv(out);
  EXPECT_NE(out.str().find("\n20,,,nan,,nan,,nan,\n"), std::string::npos);
}

TEST(Harness, CompareSameSchemeGivesUnitRatios) {
  RunConfig c;
  c.problem = Problem::Advection1d;
  c.degree = 1;
  c.meshes = {16};
  c.final_time = 0.1;
  c.compare_scheme = Method::Ridg;
  std::ostringstream log;
  EXPECT_EQ(cmd_compare(c, log), kExitOk);
  const std::string s = log.str();
  const auto row = s.substr(s.rfind("\n16,") + 1);
  // mesh, steps_a, steps_b, step_ratio, ...
  std::vector<std::string> cols;
  std::stringstream ss(row);
  for (std::string item; std::getline(ss, item, ',');) cols.push_back(item);
  ASSERT_GE(cols.size(), 13u);
  EXPECT_EQ(cols[3], "1");
  EXPECT_EQ(cols[9], "1");
  EXPECT_EQ(cols[12], "1");
}

TEST(Harness, ExitCodes) {
  RunConfig c;
  std::ostringstream log, err;
  EXPECT_EQ(run_command("bogus", c, log, err), kExitConfig);

  c.problem = Problem::Burgers1d;
  c.scheme = Method::Lidg;
  c.meshes = {8};
  EXPECT_EQ(run_command("solve", c, log, err), kExitConfig);

  RunConfig s;
  s.scheme = Method::Lidg;
  s.degree = 1;
  s.epsilon = 1e12;  // never crossed: the bracket check fails
  EXPECT_EQ(run_command("stability", s, log, err), kExitNumerical);
  EXPECT_NE(err.str().find("numerical"), std::string::npos);
}

TEST(Harness, SolveReportsMassAndCsv) {
  RunConfig c;
  c.problem = Problem::Burgers1d;
  c.degree = 2;
  c.meshes = {12};
  c.final_time = 0.1;
  std::ostringstream log;
  EXPECT_EQ(cmd_solve(c, log), kExitOk);
  EXPECT_NE(log.str().find("# mass initial="), std::string::npos);
  EXPECT_NE(log.str().find("element,x,c0,c1,c2\n"), std::string::npos);
}
