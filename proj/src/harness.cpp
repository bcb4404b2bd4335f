#include "ridg/harness.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ridg/corrector.hpp"
#include "ridg/errors.hpp"
#include "ridg/format.hpp"
#include "ridg/parallel.hpp"
#include "ridg/rkdg.hpp"
#include "ridg/stability.hpp"

namespace ridg {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = text.find_first_of(",;");
    out.push_back(trim(text.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string v = lower(trim(text));
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(text) + "'");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int problem_dim(Problem p) {
  switch (p) {
    case Problem::Advection1d:
    case Problem::Burgers1d: return 1;
    case Problem::Advection2d:
    case Problem::Burgers2d: return 2;
    case Problem::Advection3d: return 3;
  }
  return 1;
}

bool is_burgers(Problem p) { return p == Problem::Burgers1d || p == Problem::Burgers2d; }

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open output file " + path);
  return f;
}

// "a/b.csv" -> "a/b_scan.csv"
std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

std::string optional_number(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string();
}

}  // namespace

std::string to_string(Problem p) {
  switch (p) {
    case Problem::Advection1d: return "advection1d";
    case Problem::Advection2d: return "advection2d";
    case Problem::Advection3d: return "advection3d";
    case Problem::Burgers1d: return "burgers1d";
    case Problem::Burgers2d: return "burgers2d";
  }
  return "?";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Lidg: return "lidg";
    case Method::Ridg: return "ridg";
    case Method::Rkdg: return "rkdg";
  }
  return "?";
}

Problem parse_problem(std::string_view s) {
  const std::string v = lower(trim(s));
  for (Problem p : {Problem::Advection1d, Problem::Advection2d, Problem::Advection3d,
                    Problem::Burgers1d, Problem::Burgers2d})
    if (v == to_string(p)) return p;
  throw ConfigError("unknown problem '" + std::string(s) + "'");
}

Method parse_method(std::string_view s) {
  const std::string v = lower(trim(s));
  for (Method m : {Method::Lidg, Method::Ridg, Method::Rkdg})
    if (v == to_string(m)) return m;
  throw ConfigError("unknown scheme '" + std::string(s) + "'");
}

int RunConfig::effective_dim() const { return dim > 0 ? dim : problem_dim(problem); }

double RunConfig::effective_final_time() const {
  return final_time > 0.0 ? final_time : problem_setup(problem).default_final_time;
}

void apply_setting(RunConfig& c, std::string_view key_in, std::string_view value) {
  const std::string key = lower(trim(key_in));
  value = trim(value);
  if (key == "problem") {
    c.problem = parse_problem(value);
  } else if (key == "scheme") {
    c.scheme = parse_method(value);
  } else if (key == "m_deg" || key == "mdeg") {
    c.degree = parse_number<int>(key, value);
  } else if (key == "meshes" || key == "mesh") {
    c.meshes.clear();
    for (auto item : split_list(value)) c.meshes.push_back(parse_number<int>(key, item));
  } else if (key == "nu") {
    c.nu = parse_number<double>(key, value);
  } else if (key == "final_time") {
    c.final_time = parse_number<double>(key, value);
  } else if (key == "omega_resolution") {
    c.omega_resolution = parse_number<int>(key, value);
  } else if (key == "epsilon") {
    c.epsilon = parse_number<double>(key, value);
  } else if (key == "out") {
    c.out = std::string(value);
  } else if (key == "threads") {
    c.threads = parse_number<int>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<unsigned long>(key, value);
  } else if (key == "dim") {
    c.dim = parse_number<int>(key, value);
  } else if (key == "direction") {
    const auto items = split_list(value);
    if (items.empty() || items.size() > 3) throw ConfigError("direction needs 1-3 components");
    c.direction = {0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < items.size(); ++a)
      c.direction[a] = parse_number<double>(key, items[a]);
  } else if (key == "scan") {
    c.scan = parse_bool(key, value);
  } else if (key == "scan_max") {
    c.scan_max = parse_number<double>(key, value);
  } else if (key == "scan_points") {
    c.scan_points = parse_number<int>(key, value);
  } else if (key == "compare_scheme") {
    c.compare_scheme = parse_method(value);
  } else if (key == "compare_m_deg") {
    c.compare_degree = parse_number<int>(key, value);
  } else if (key == "compare_nu") {
    c.compare_nu = parse_number<double>(key, value);
  } else if (key == "newton_tolerance") {
    c.newton_tolerance = parse_number<double>(key, value);
  } else if (key == "newton_max_iterations") {
    c.newton_max_iterations = parse_number<int>(key, value);
  } else {
    throw ConfigError("unknown key '" + std::string(key_in) + "'");
  }
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v(line);
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(base, v.substr(0, eq), v.substr(eq + 1));
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  return parse_config(f, std::move(base));
}

void validate(const RunConfig& c) {
  if (c.degree < 0) throw ConfigError("m_deg must be >= 0");
  if (c.meshes.empty()) throw ConfigError("meshes must not be empty");
  for (std::size_t k = 0; k < c.meshes.size(); ++k) {
    if (c.meshes[k] < 1) throw ConfigError("mesh sizes must be positive");
    if (k > 0 && c.meshes[k] <= c.meshes[k - 1])
      throw ConfigError("mesh sizes must be strictly increasing");
  }
  if (!(c.nu > 0.0)) throw ConfigError("nu must be positive");
  if (c.compare_nu && !(*c.compare_nu > 0.0)) throw ConfigError("compare_nu must be positive");
  if (c.compare_degree && *c.compare_degree < 0)
    throw ConfigError("compare_m_deg must be >= 0");
  if (!(c.final_time >= 0.0)) throw ConfigError("final_time must be positive");
  if (!(c.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (c.omega_resolution != 0 && c.omega_resolution < 2)
    throw ConfigError("omega_resolution must be at least 2");
  if (c.dim < 0 || c.dim > 3) throw ConfigError("dim must be 1, 2 or 3");
  if (c.scan_points < 2 || !(c.scan_max > 0.0)) throw ConfigError("invalid scan grid");
  if (!(c.newton_tolerance > 0.0) || c.newton_max_iterations < 1)
    throw ConfigError("invalid Newton settings");
}

ProblemSetup problem_setup(Problem p) {
  using std::numbers::pi;
  ProblemSetup s;
  s.dim = problem_dim(p);
  if (is_burgers(p)) {
    s.lower = 0.0;
    s.upper = 2.0 * pi;
    s.nonlinear = true;
    s.default_final_time = 0.4;
    const BurgersInitialCondition ic = s.dim == 1 ? burgers_ic_1d() : burgers_ic_2d();
    s.initial = ic.value;
    s.exact = [ic](std::span<const double> x, double t) { return burgers_exact(x, t, ic); };
    return s;
  }
  s.lower = -1.0;
  s.upper = 1.0;
  s.default_final_time = 2.0;
  for (int a = 0; a < s.dim; ++a) s.velocity[a] = 1.0;
  const double k = s.dim == 3 ? 2.0 * pi : 16.0 * pi;
  const int d = s.dim;
  s.initial = [k, d](std::span<const double> x) {
    double v = 1.0;
    for (int a = 0; a < d; ++a) v *= std::sin(k * x[a]);
    return v;
  };
  const double lo = s.lower, len = s.upper - s.lower;
  const auto u = s.velocity;
  const PointFunction q0 = s.initial;
  s.exact = [q0, u, d, lo, len](std::span<const double> x, double t) {
    std::array<double, 3> y{};
    for (int a = 0; a < d; ++a) {
      double shifted = std::fmod(x[a] - u[a] * t - lo, len);
      if (shifted < 0.0) shifted += len;
      y[a] = lo + shifted;
    }
    return q0(std::span<const double>(y.data(), d));
  };
  return s;
}

RunResult run_problem(const RunConfig& c, Method method, int degree, double nu, int cells) {
  const ProblemSetup setup = problem_setup(c.problem);
  const double t_end = c.effective_final_time();
  if (setup.nonlinear && method == Method::Lidg)
    throw ConfigError("lidg is only available for advection problems");

  const Mesh mesh = Mesh::uniform(setup.dim, cells, setup.lower, setup.upper);
  const CoeffField q0 = project(setup.initial, mesh, spatial_spec(degree, setup.dim));
  RunResult r;
  r.initial_mass = total_mass(q0);

  const ScalarFlux flux = setup.nonlinear ? ScalarFlux::burgers() : ScalarFlux::linear(setup.velocity);
  const auto t0 = std::chrono::steady_clock::now();
  if (method == Method::Rkdg) {
    RkdgRun run = advance_rkdg(q0, nu, t_end, flux);
    r.field = std::move(run.field);
    r.steps = run.steps;
  } else if (setup.nonlinear) {
    NewtonSettings ns;
    ns.tolerance = c.newton_tolerance;
    ns.max_iterations = c.newton_max_iterations;
    NonlinearRun run = advance_nonlinear(q0, nu, t_end, flux, ns);
    r.field = std::move(run.field);
    r.steps = run.steps;
    r.newton = run.stats;
  } else {
    double speed = 0.0;
    for (int a = 0; a < setup.dim; ++a) speed = std::max(speed, std::abs(setup.velocity[a]));
    AdvectionConfig ac;
    ac.velocity = setup.velocity;
    ac.dt = nu * mesh.min_width() / speed;
    AdvectionRun run = advance_advection(method == Method::Ridg ? Scheme::Ridg : Scheme::Lidg,
                                         q0, ac, t_end);
    r.field = std::move(run.field);
    r.steps = run.steps;
  }
  r.runtime_s = seconds_since(t0);
  r.final_mass = total_mass(r.field);
  const auto exact = [&](std::span<const double> x) { return setup.exact(x, t_end); };
  r.errors = error_norms(r.field, exact, gauss_rule(degree + 3, setup.dim));
  return r;
}

bool ConvergenceTable::failed() const {
  return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.failed; });
}

void ConvergenceTable::compute_orders(double length) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].orders = {};
    if (k == 0 || rows[k].failed || rows[k - 1].failed) continue;
    const std::array<double, 2> h{length / rows[k - 1].mesh, length / rows[k].mesh};
    const std::array<double, 3> now{rows[k].errors.l1, rows[k].errors.l2, rows[k].errors.linf};
    const std::array<double, 3> before{rows[k - 1].errors.l1, rows[k - 1].errors.l2,
                                       rows[k - 1].errors.linf};
    for (int n = 0; n < 3; ++n) {
      const std::array<double, 2> e{before[n], now[n]};
      rows[k].orders[n] = estimate_order(e, h)[1];
    }
  }
}

void ConvergenceTable::write_csv(std::ostream& out) const {
  out << "mesh,n_steps,runtime_s,l1,l1_order,l2,l2_order,linf,linf_order\n";
  for (const auto& r : rows) {
    if (r.failed) {
      out << r.mesh << ",,,nan,,nan,,nan,\n";
      continue;
    }
    out << r.mesh << ',' << r.steps << ',' << format_number(r.runtime_s) << ','
        << format_number(r.errors.l1) << ',' << optional_number(r.orders[0]) << ','
        << format_number(r.errors.l2) << ',' << optional_number(r.orders[1]) << ','
        << format_number(r.errors.linf) << ',' << optional_number(r.orders[2]) << '\n';
  }
}

ConvergenceTable run_convergence(const RunConfig& c, Method method, int degree, double nu) {
  ConvergenceTable table;
  for (int cells : c.meshes) {
    ConvergenceRow row;
    row.mesh = cells;
    try {
      const RunResult r = run_problem(c, method, degree, nu, cells);
      row.steps = r.steps;
      row.runtime_s = r.runtime_s;
      row.errors = r.errors;
    } catch (const NumericalError& e) {
      row.failed = true;
      row.message = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  const ProblemSetup setup = problem_setup(c.problem);
  table.compute_orders(setup.upper - setup.lower);
  return table;
}

int cmd_stability(const RunConfig& c, std::ostream& log) {
  validate(c);
  if (c.scheme == Method::Rkdg) throw ConfigError("stability supports lidg and ridg only");
  const Scheme scheme = c.scheme == Method::Ridg ? Scheme::Ridg : Scheme::Lidg;
  const int dim = c.effective_dim();
  StabilityOptions opt;
  opt.epsilon = c.epsilon;
  opt.omega_resolution = c.omega_resolution;

  const auto t0 = std::chrono::steady_clock::now();
  const StabilityReport rep = max_cfl(scheme, c.degree, dim, c.direction, opt);
  log << "# " << scheme_name(scheme) << " m_deg=" << c.degree << " dim=" << dim
      << " max_cfl=" << format_number(rep.max_cfl) << " bracket=[" << format_number(rep.lower)
      << ", " << format_number(rep.upper) << "] " << format_number(seconds_since(t0))
      << " s\n";
  if (c.out.empty()) {
    write_stability_csv(log, {rep});
  } else {
    auto f = open_output(c.out);
    write_stability_csv(f, {rep});
  }

  if (c.scan) {
    if (dim != 2) throw ConfigError("--scan needs dim = 2");
    std::vector<double> grid(c.scan_points);
    for (int k = 0; k < c.scan_points; ++k) grid[k] = c.scan_max * k / (c.scan_points - 1);
    const Eigen::MatrixXd values =
        stability_scan_2d(scheme, c.degree, grid, grid, c.omega_resolution);
    double onset = -1.0;
    for (int k = 0; k < c.scan_points && onset < 0.0; ++k)
      if (values(k, k) - 1.0 > c.epsilon) onset = grid[k];
    log << "# diagonal onset near " << (onset < 0.0 ? std::string("none") : format_number(onset))
        << '\n';
    if (c.out.empty()) {
      write_scan_csv(log, grid, grid, values);
    } else {
      auto f = open_output(with_suffix(c.out, "_scan"));
      write_scan_csv(f, grid, grid, values);
    }
  }
  return kExitOk;
}

int cmd_converge(const RunConfig& c, std::ostream& log) {
  validate(c);
  const ConvergenceTable table = run_convergence(c, c.scheme, c.degree, c.nu);
  log << "# " << to_string(c.problem) << ' ' << to_string(c.scheme) << " m_deg=" << c.degree
      << " nu=" << format_number(c.nu) << " T=" << format_number(c.effective_final_time())
      << '\n';
  for (const auto& r : table.rows)
    if (r.failed) log << "# mesh " << r.mesh << " failed: " << r.message << '\n';
  if (c.out.empty()) {
    table.write_csv(log);
  } else {
    auto f = open_output(c.out);
    table.write_csv(f);
  }
  return table.failed() ? kExitNumerical : kExitOk;
}

int cmd_solve(const RunConfig& c, std::ostream& log) {
  validate(c);
  const int cells = c.meshes.front();
  const RunResult r = run_problem(c, c.scheme, c.degree, c.nu, cells);

  const Eigen::MatrixXd values = [&] {
    const QuadratureRule rule = gauss_rule(default_points(c.degree), r.field.mesh.dim);
    return Eigen::MatrixXd(tabulate(r.field.spec, rule.nodes, false).values * r.field.coeffs);
  }();
  log << "# " << to_string(c.problem) << ' ' << to_string(c.scheme) << " m_deg=" << c.degree
      << " mesh=" << cells << " nu=" << format_number(c.nu)
      << " T=" << format_number(c.effective_final_time()) << '\n'
      << "# steps=" << r.steps << " runtime_s=" << format_number(r.runtime_s) << '\n'
      << "# mass initial=" << format_number(r.initial_mass)
      << " final=" << format_number(r.final_mass) << '\n'
      << "# sampled min=" << format_number(values.minCoeff())
      << " max=" << format_number(values.maxCoeff()) << '\n'
      << "# error l1=" << format_number(r.errors.l1) << " l2=" << format_number(r.errors.l2)
      << " linf=" << format_number(r.errors.linf) << '\n';
  if (r.newton.regions > 0)
    log << "# newton max_iterations=" << r.newton.max_iterations
        << " unconverged=" << r.newton.unconverged << '\n';

  auto write = [&](std::ostream& out) {
    const Mesh& mesh = r.field.mesh;
    static const char* axis_names[3] = {"x", "y", "z"};
    out << "element";
    for (int a = 0; a < mesh.dim; ++a) out << ',' << axis_names[a];
    for (int k = 0; k < r.field.num_basis(); ++k) out << ",c" << k;
    out << '\n';
    for (int e = 0; e < mesh.num_elements(); ++e) {
      out << e;
      const auto x = mesh.center(e);
      for (int a = 0; a < mesh.dim; ++a) out << ',' << format_number(x[a]);
      for (int k = 0; k < r.field.num_basis(); ++k)
        out << ',' << format_number(r.field.coeffs(k, e));
      out << '\n';
    }
  };
  if (c.out.empty()) {
    write(log);
  } else {
    auto f = open_output(c.out);
    write(f);
  }
  return kExitOk;
}

int cmd_compare(const RunConfig& c, std::ostream& log) {
  validate(c);
  if (!c.compare_scheme) throw ConfigError("compare needs compare_scheme");
  const Method ma = c.scheme, mb = *c.compare_scheme;
  const int da = c.degree, db = c.compare_degree.value_or(c.degree);
  const double na = c.nu, nb = c.compare_nu.value_or(c.nu);
  const ConvergenceTable a = run_convergence(c, ma, da, na);
  const ConvergenceTable b = run_convergence(c, mb, db, nb);

  log << "# " << to_string(c.problem) << " a=" << to_string(ma) << "(m_deg=" << da
      << ", nu=" << format_number(na) << ") b=" << to_string(mb) << "(m_deg=" << db
      << ", nu=" << format_number(nb) << "); ratios are a/b\n";
  auto write = [&](std::ostream& out) {
    out << "mesh,n_steps_a,n_steps_b,step_ratio,runtime_s_a,runtime_s_b,runtime_ratio,"
           "l1_a,l1_b,l1_ratio,l2_a,l2_b,l2_ratio,linf_a,linf_b,linf_ratio\n";
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
      const auto& ra = a.rows[k];
      const auto& rb = b.rows[k];
      out << ra.mesh;
      if (ra.failed || rb.failed) {
        out << ",,,,,,,nan,nan,,nan,nan,,nan,nan,\n";
        continue;
      }
      auto triple = [&](double x, double y) {
        out << ',' << format_number(x) << ',' << format_number(y) << ','
            << format_number(x / y);
      };
      out << ',' << ra.steps << ',' << rb.steps << ','
          << format_number(static_cast<double>(ra.steps) / rb.steps);
      triple(ra.runtime_s, rb.runtime_s);
      triple(ra.errors.l1, rb.errors.l1);
      triple(ra.errors.l2, rb.errors.l2);
      triple(ra.errors.linf, rb.errors.linf);
      out << '\n';
    }
  };
  for (const auto* t : {&a, &b})
    for (const auto& r : t->rows)
      if (r.failed) log << "# mesh " << r.mesh << " failed: " << r.message << '\n';
  if (c.out.empty()) {
    write(log);
  } else {
    auto f = open_output(c.out);
    write(f);
  }
  return a.failed() || b.failed() ? kExitNumerical : kExitOk;
}

int run_command(std::string_view command, const RunConfig& c, std::ostream& log,
                std::ostream& err) {
  try {
    set_thread_count(c.threads);
    if (command == "stability") return cmd_stability(c, log);
    if (command == "converge") return cmd_converge(c, log);
    if (command == "solve") return cmd_solve(c, log);
    if (command == "compare") return cmd_compare(c, log);
    throw ConfigError("unknown command '" + std::string(command) + "'");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace ridg
