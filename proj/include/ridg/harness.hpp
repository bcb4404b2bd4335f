#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ridg/burgers.hpp"
#include "ridg/mesh_field.hpp"

namespace ridg {

/// Invalid or inconsistent run configuration. Commands map it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Problem { Advection1d, Advection2d, Advection3d, Burgers1d, Burgers2d };
enum class Method { Lidg, Ridg, Rkdg };

std::string to_string(Problem p);
std::string to_string(Method m);
Problem parse_problem(std::string_view s);
Method parse_method(std::string_view s);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  Problem problem = Problem::Advection1d;
  Method scheme = Method::Ridg;
  int degree = 3;
  std::vector<int> meshes{40, 80, 160};
  double nu = 0.9;
  double final_time = 0.0;  // 0 selects the problem default
  int omega_resolution = 0;  // 0 selects default_omega_resolution(dim)
  double epsilon = 5e-4;
  std::string out;           // empty writes CSV to stdout
  int threads = 0;           // 0 uses every hardware thread
  unsigned long seed = 1;

  // stability
  int dim = 0;  // 0 takes the dimension of `problem`
  std::array<double, 3> direction{1.0, 1.0, 1.0};
  bool scan = false;
  double scan_max = 1.2;
  int scan_points = 41;

  // compare
  std::optional<Method> compare_scheme;
  std::optional<int> compare_degree;
  std::optional<double> compare_nu;

  double newton_tolerance = 1e-4;
  int newton_max_iterations = 3;

  int effective_dim() const;
  double effective_final_time() const;
};

/// Sets one `key = value` entry. Unknown keys and malformed values throw
/// ConfigError.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Reads `key = value` lines; `#` starts a comment. Settings are applied on
/// top of `base`.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Checks the invariants every command relies on.
void validate(const RunConfig& config);

/// Domain, initial data and exact solution of a test problem.
struct ProblemSetup {
  int dim = 1;
  double lower = 0.0, upper = 1.0;  // same on every axis
  std::array<double, 3> velocity{0.0, 0.0, 0.0};  // advection only
  bool nonlinear = false;
  double default_final_time = 1.0;
  PointFunction initial;
  std::function<double(std::span<const double>, double)> exact;
};

ProblemSetup problem_setup(Problem p);

struct RunResult {
  CoeffField field;
  int steps = 0;
  double runtime_s = 0.0;  // time stepping only
  ErrorNorms errors;
  double initial_mass = 0.0;
  double final_mass = 0.0;
  PredictionStats newton;  // nonlinear RIDG only
};

/// One run of `method` on a mesh with `cells` elements per axis.
RunResult run_problem(const RunConfig& config, Method method, int degree, double nu,
                      int cells);

struct ConvergenceRow {
  int mesh = 0;
  int steps = 0;
  double runtime_s = 0.0;
  ErrorNorms errors;
  std::array<std::optional<double>, 3> orders;  // l1, l2, linf
  bool failed = false;
  std::string message;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;

  bool failed() const;
  /// Fills the order columns from adjacent rows; rows next to a failed row
  /// get none.
  void compute_orders(double domain_length);
  /// `mesh,n_steps,runtime_s,l1,l1_order,l2,l2_order,linf,linf_order`
  void write_csv(std::ostream& out) const;
};

ConvergenceTable run_convergence(const RunConfig& config, Method method, int degree,
                                 double nu);

/// Subcommands. Each writes its CSV and a short summary to `log`, and
/// returns an exit code.
int cmd_stability(const RunConfig& config, std::ostream& log);
int cmd_converge(const RunConfig& config, std::ostream& log);
int cmd_solve(const RunConfig& config, std::ostream& log);
int cmd_compare(const RunConfig& config, std::ostream& log);

/// Dispatches by name and maps ConfigError and NumericalError to exit codes.
int run_command(std::string_view command, const RunConfig& config, std::ostream& log,
                std::ostream& err);

}  // namespace ridg
