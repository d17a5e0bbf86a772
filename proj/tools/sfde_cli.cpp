// sfde: command line front end.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sfde/cli.hpp"
#include "sfde/errors.hpp"

namespace {

std::string hyphenated(std::string key) {
  for (char& c : key)
    if (c == '_') c = '-';
  return key;
}

std::optional<int> workers_from_env() {
  const char* raw = std::getenv(sfde::kWorkersEnv);
  if (!raw || !*raw) return std::nullopt;
  try {
    const int v = std::stoi(raw);
    if (v >= 1) return v;
  } catch (const std::exception&) {
  }
  std::cerr << "warning: ignoring " << sfde::kWorkersEnv << "='" << raw << "'\n";
  return std::nullopt;
}

std::string describe(sfde::Subcommand cmd) {
  switch (cmd) {
    case sfde::Subcommand::Weights: return "print Grunwald-Letnikov weights";
    case sfde::Subcommand::Solve: return "solve one trajectory, CSV of nodal values";
    case sfde::Subcommand::Verify: return "run the oracle and invariant checks";
    case sfde::Subcommand::ConvergeTime: return "temporal Monte Carlo convergence study";
    case sfde::Subcommand::ConvergeSpace: return "spatial Monte Carlo convergence study";
    case sfde::Subcommand::Holder: return "temporal Hoelder regularity probe";
    case sfde::Subcommand::Rates: return "theoretical convergence exponents";
  }
  return {};
}

struct SubcommandState {
  CLI::App* app{nullptr};
  std::map<std::string, std::string> values;  // keyed by schema key
  std::string config_path;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic time-fractional diffusion solver and convergence lab"};
  app.require_subcommand(1);

  std::map<sfde::Subcommand, SubcommandState> states;
  for (sfde::Subcommand cmd : sfde::all_subcommands()) {
    SubcommandState& st = states[cmd];
    st.app = app.add_subcommand(std::string(sfde::subcommand_name(cmd)), describe(cmd));
    st.app->add_option("--config", st.config_path, "flat key = value configuration file");
    for (const auto& spec : sfde::schema(cmd)) {
      std::string names = "--" + spec.key;
      if (hyphenated(spec.key) != spec.key) names += ",--" + hyphenated(spec.key);
      std::string help = spec.help;
      if (spec.default_value) help += " [" + *spec.default_value + "]";
      // store raw text; validation happens in parse_config
      auto* opt = st.app->add_option_function<std::string>(
          names, [&st, key = spec.key](const std::string& v) { st.values[key] = v; }, help);
      opt->allow_extra_args(false);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto& [cmd, st] : states) {
    if (!st.app->parsed()) continue;
    try {
      std::string text;
      if (!st.config_path.empty()) {
        std::ifstream in(st.config_path);
        if (!in) throw sfde::ConfigError("cannot read config file '" + st.config_path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
      }
      const sfde::RunConfig config = sfde::parse_config(cmd, text, st.values, workers_from_env());
      return sfde::run(config, std::cout, std::cerr);
    } catch (const sfde::ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 2;
}
