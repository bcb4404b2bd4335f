#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ridg/harness.hpp"

namespace {

// Flag name -> config key. Every config key is also a flag.
const std::vector<std::pair<std::string, std::string>> kFlags = {
    {"--problem", "problem"},
    {"--scheme", "scheme"},
    {"--m_deg,--mdeg", "m_deg"},
    {"--meshes,--mesh", "meshes"},
    {"--nu", "nu"},
    {"--final_time,-T", "final_time"},
    {"--omega_resolution", "omega_resolution"},
    {"--epsilon", "epsilon"},
    {"--out,-o", "out"},
    {"--threads", "threads"},
    {"--seed", "seed"},
    {"--dim", "dim"},
    {"--direction", "direction"},
    {"--scan_max", "scan_max"},
    {"--scan_points", "scan_points"},
    {"--compare_scheme,--against", "compare_scheme"},
    {"--compare_m_deg", "compare_m_deg"},
    {"--compare_nu", "compare_nu"},
    {"--newton_tolerance", "newton_tolerance"},
    {"--newton_max_iterations", "newton_max_iterations"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regionally- and locally-implicit DG experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> values;
  bool scan = false;

  for (const char* name : {"stability", "converge", "solve", "compare"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config,-c", config_path, "key = value config file");
    for (const auto& [flag, key] : kFlags) sub->add_option(flag, values[key]);
    if (std::string(name) == "stability")
      sub->add_flag("--scan", scan, "also write an f+1 grid over (nu_x, nu_y)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ridg::kExitConfig;
  }

  ridg::RunConfig config;
  try {
    if (!config_path.empty()) config = ridg::load_config_file(config_path);
    for (const auto& [key, value] : values)
      if (!value.empty()) ridg::apply_setting(config, key, value);
    if (scan) config.scan = true;
  } catch (const ridg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ridg::kExitConfig;
  }
  return ridg::run_command(app.get_subcommands().front()->get_name(), config, std::cout,
                           std::cerr);
}
