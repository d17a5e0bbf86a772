#include "sfde/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "sfde/errors.hpp"
#include "sfde/fem1d.hpp"
#include "sfde/fracquad.hpp"
#include "sfde/lab.hpp"
#include "sfde/noise.hpp"
#include "sfde/stepper.hpp"
#include "sfde/verify.hpp"

namespace sfde {

namespace {

constexpr std::pair<Subcommand, std::string_view> kNames[] = {
    {Subcommand::Weights, "weights"},
    {Subcommand::Solve, "solve"},
    {Subcommand::Verify, "verify"},
    {Subcommand::ConvergeTime, "converge-time"},
    {Subcommand::ConvergeSpace, "converge-space"},
    {Subcommand::Holder, "holder"},
    {Subcommand::Rates, "rates"},
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string normalize_key(std::string_view key) {
  std::string out(key);
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

bool parse_double(std::string_view text, double& value) {
  // from_chars for double is available in libstdc++ 11
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end && std::isfinite(value);
}

bool parse_ll(std::string_view text, long long& value) {
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end;
}

bool parse_u64(std::string_view text, std::uint64_t& value) {
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end;
}

bool parse_bool(std::string_view text, bool& value) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") {
    value = true;
    return true;
  }
  if (text == "false" || text == "0" || text == "no" || text == "off") {
    value = false;
    return true;
  }
  return false;
}

bool parse_int_list(std::string_view text, std::vector<int>& out) {
  out.clear();
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    long long v = 0;
    if (!parse_ll(item, v) || v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) return false;
    out.push_back(static_cast<int>(v));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) return false;
  }
  return !out.empty();
}

bool valid_value(ValueKind kind, std::string_view text) {
  switch (kind) {
    case ValueKind::Real: {
      double v;
      return parse_double(text, v);
    }
    case ValueKind::Integer: {
      long long v;
      return parse_ll(text, v);
    }
    case ValueKind::Unsigned: {
      std::uint64_t v;
      return parse_u64(text, v);
    }
    case ValueKind::IntList: {
      std::vector<int> v;
      return parse_int_list(text, v);
    }
    case ValueKind::Boolean: {
      bool v;
      return parse_bool(text, v);
    }
    case ValueKind::Text:
      return true;
  }
  return false;
}

std::string_view kind_name(ValueKind kind) {
  switch (kind) {
    case ValueKind::Real: return "a real number";
    case ValueKind::Integer: return "an integer";
    case ValueKind::Unsigned: return "a non-negative integer";
    case ValueKind::IntList: return "a comma-separated integer list";
    case ValueKind::Boolean: return "a boolean";
    case ValueKind::Text: return "text";
  }
  return "a value";
}

std::vector<KeySpec> with_common(std::vector<KeySpec> keys) {
  keys.push_back({"seed", ValueKind::Unsigned, "42", "64-bit master seed"});
  keys.push_back({"workers", ValueKind::Integer, std::nullopt, "worker threads (default: all available)"});
  keys.push_back({"output", ValueKind::Text, std::nullopt, "output path (default: stdout)"});
  return keys;
}

std::vector<KeySpec> model_keys() {
  return {
      {"alpha", ValueKind::Real, "0.5", "fractional derivative order"},
      {"gamma", ValueKind::Real, "0.5", "fractional integral order on the noise"},
      {"m", ValueKind::Real, "2", "noise eigenvalue decay, gamma_l = l^-m"},
  };
}

std::vector<KeySpec> study_keys(StudyMode mode) {
  auto keys = model_keys();
  const bool temporal = mode == StudyMode::Temporal;
  keys.push_back({"s", ValueKind::Real, std::nullopt, "regularity index for predicted rates"});
  keys.push_back({"levels", ValueKind::IntList, temporal ? "40,80,160,320,640" : "10,20,40,80,160",
                  temporal ? "time step counts" : "mesh interval counts"});
  keys.push_back({"reference", ValueKind::Integer, temporal ? "3200" : "320", "reference resolution"});
  keys.push_back({"trajectories", ValueKind::Integer, "100", "Monte Carlo sample size"});
  keys.push_back({"t_star", ValueKind::Real, temporal ? "0.01" : "1", "final time"});
  if (temporal)
    keys.push_back({"mesh", ValueKind::Integer, "100", "spatial intervals"});
  else
    keys.push_back({"time_steps", ValueKind::Integer, "200", "time steps"});
  keys.push_back({"truncation", ValueKind::Integer, std::nullopt, "noise modes (default: mesh dimension)"});
  keys.push_back({"zero_noise", ValueKind::Boolean, "false", "deterministic run"});
  keys.push_back({"u0", ValueKind::Text, "zero", "initial data: zero | sin | sin<k>"});
  return with_common(std::move(keys));
}

std::vector<KeySpec> build_schema(Subcommand cmd) {
  switch (cmd) {
    case Subcommand::Weights:
      return with_common({
          {"beta", ValueKind::Real, "0.5", "order, |beta| < 1"},
          {"count", ValueKind::Integer, "10", "largest weight index"},
          {"tau", ValueKind::Real, "1", "step size"},
      });
    case Subcommand::Solve: {
      auto keys = model_keys();
      keys.push_back({"T", ValueKind::Real, "1", "final time"});
      keys.push_back({"N", ValueKind::Integer, "100", "time steps"});
      keys.push_back({"M", ValueKind::Integer, "32", "mesh intervals"});
      keys.push_back({"u0", ValueKind::Text, "zero", "initial data: zero | sin | sin<k>"});
      keys.push_back({"trajectory", ValueKind::Unsigned, "0", "trajectory index in the random stream"});
      keys.push_back({"truncation", ValueKind::Integer, std::nullopt, "noise modes (default: M - 1)"});
      keys.push_back({"zero_noise", ValueKind::Boolean, "false", "deterministic run"});
      keys.push_back({"increments", ValueKind::Text, std::nullopt, "dump the Brownian increments to this path"});
      return with_common(std::move(keys));
    }
    case Subcommand::Verify:
      return with_common({});
    case Subcommand::ConvergeTime:
      return study_keys(StudyMode::Temporal);
    case Subcommand::ConvergeSpace:
      return study_keys(StudyMode::Spatial);
    case Subcommand::Holder: {
      auto keys = model_keys();
      keys.push_back({"mesh", ValueKind::Integer, "32", "mesh intervals"});
      keys.push_back({"t1", ValueKind::Real, "0.1", "base time"});
      keys.push_back({"tau", ValueKind::Real, "0.0001", "step size"});
      keys.push_back({"lags", ValueKind::IntList, "8,16,32,64,128,256", "time lags in steps"});
      keys.push_back({"trajectories", ValueKind::Integer, "100", "Monte Carlo sample size"});
      return with_common(std::move(keys));
    }
    case Subcommand::Rates: {
      auto keys = model_keys();
      keys.push_back({"s", ValueKind::Real, std::nullopt, "regularity index (default: clamp(1 - m, 0, 1))"});
      keys.push_back({"u0_zero", ValueKind::Boolean, "true", "zero initial data"});
      return with_common(std::move(keys));
    }
  }
  throw ConfigError("unknown subcommand");
}

const KeySpec* find_key(const std::vector<KeySpec>& keys, const std::string& key) {
  for (const auto& spec : keys)
    if (spec.key == key) return &spec;
  return nullptr;
}

const std::string& lookup(const RunConfig& cfg, const std::string& key) {
  const auto it = cfg.params.find(key);
  if (it == cfg.params.end()) throw ConfigError("missing configuration key '" + key + "'");
  return it->second;
}

int hardware_workers() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

StudyPlan study_from(const RunConfig& cfg, StudyMode mode) {
  StudyPlan plan = mode == StudyMode::Temporal
                       ? temporal_plan(cfg.real("alpha"), cfg.real("gamma"), cfg.real("m"))
                       : spatial_plan(cfg.real("alpha"), cfg.real("gamma"), cfg.real("m"));
  if (cfg.has("s")) plan.s = cfg.real("s");
  plan.levels = cfg.int_list("levels");
  plan.reference = static_cast<int>(cfg.integer("reference"));
  plan.trajectories = static_cast<int>(cfg.integer("trajectories"));
  plan.t_star = cfg.real("t_star");
  if (mode == StudyMode::Temporal)
    plan.mesh = static_cast<int>(cfg.integer("mesh"));
  else
    plan.time_steps = static_cast<int>(cfg.integer("time_steps"));
  if (cfg.has("truncation")) plan.truncation = static_cast<int>(cfg.integer("truncation"));
  plan.zero_noise = cfg.boolean("zero_noise");
  plan.u0 = cfg.text("u0");
  plan.seed = cfg.seed;
  plan.workers = cfg.workers;
  return plan;
}

void run_weights(const RunConfig& cfg, std::ostream& out) {
  const auto table = gl_weights(cfg.real("beta"), cfg.integer("count"), cfg.real("tau"));
  for (Index j = 0; j < table.size(); ++j) out << format_real(table[j]) << '\n';
}

void run_solve(const RunConfig& cfg, std::ostream& out) {
  const long long mesh = cfg.integer("M");
  const long long steps = cfg.integer("N");
  if (mesh < 2 || mesh > kMaxEigenDim) throw ConfigError("solve: M must lie in [2, 4096]");
  if (steps < 1) throw ConfigError("solve: N must be >= 1");
  const FemSpace space = build_space(static_cast<int>(mesh));
  const ModelConfig config = make_config(cfg.real("alpha"), cfg.real("gamma"), cfg.real("T"), static_cast<int>(steps),
                                         InitialData::named(cfg.text("u0")));
  config.validate();
  if (config.alpha >= 1.0) throw ConfigError("solve: alpha must lie in (0, 1)");
  const FractionalStepper stepper(config, space);

  SolveResult result;
  if (cfg.boolean("zero_noise")) {
    result = stepper.solve_deterministic();
  } else {
    NoiseModel model = noise_model_for(space, cfg.real("m"));
    if (cfg.has("truncation")) model.L = static_cast<int>(cfg.integer("truncation"));
    model.validate();
    const IncrementMatrix incs =
        sample_increments(model, config.N, config.tau(), StreamKey{cfg.seed, cfg.unsigned_integer("trajectory")});
    if (cfg.has("increments")) {
      std::ofstream dump(cfg.text("increments"), std::ios::binary);
      if (!dump) throw ConfigError("cannot open increments file '" + cfg.text("increments") + "'");
      write_increments(dump, incs);
    }
    result = stepper.solve(model, incs);
  }

  out << 't';
  for (Index i = 1; i <= space.dim(); ++i) out << ",x_" << i;
  out << '\n';
  for (Index n = 0; n < result.states.rows(); ++n) {
    out << format_real(static_cast<double>(n) * config.tau());
    for (Index i = 0; i < result.states.cols(); ++i) out << ',' << format_real(result.states(n, i));
    out << '\n';
  }
}

int run_verify(std::ostream& out) {
  bool ok = true;
  for (const auto& check : run_verification_suite()) {
    print_check(out, check);
    ok = ok && check.pass;
  }
  return ok ? 0 : 1;
}

void run_holder(const RunConfig& cfg, std::ostream& out) {
  HolderPlan plan;
  plan.alpha = cfg.real("alpha");
  plan.gamma = cfg.real("gamma");
  plan.m = cfg.real("m");
  plan.mesh = static_cast<int>(cfg.integer("mesh"));
  plan.t1 = cfg.real("t1");
  plan.tau = cfg.real("tau");
  plan.lags = cfg.int_list("lags");
  plan.trajectories = static_cast<int>(cfg.integer("trajectories"));
  plan.seed = cfg.seed;
  plan.workers = cfg.workers;
  write_holder_csv(out, holder_probe(plan));
}

void run_rates(const RunConfig& cfg, std::ostream& out) {
  const double s = cfg.has("s") ? cfg.real("s") : std::clamp(1.0 - cfg.real("m"), 0.0, 1.0);
  const PredictedRates r = predicted_rates(cfg.real("alpha"), cfg.real("gamma"), s, cfg.boolean("u0_zero"));
  out << "s " << format_real(s) << '\n';
  out << "strong_time " << r.strong_time.str() << '\n';
  out << "strong_space " << r.strong_space.str() << '\n';
  out << "weak_time " << r.weak_time.str() << '\n';
  out << "weak_space " << r.weak_space.str() << '\n';
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.subcommand) {
    case Subcommand::Weights: run_weights(cfg, out); return 0;
    case Subcommand::Solve: run_solve(cfg, out); return 0;
    case Subcommand::Verify: return run_verify(out);
    case Subcommand::ConvergeTime:
      write_report_csv(out, run_study(study_from(cfg, StudyMode::Temporal)));
      return 0;
    case Subcommand::ConvergeSpace:
      write_report_csv(out, run_study(study_from(cfg, StudyMode::Spatial)));
      return 0;
    case Subcommand::Holder: run_holder(cfg, out); return 0;
    case Subcommand::Rates: run_rates(cfg, out); return 0;
  }
  return 2;
}

}  // namespace

Subcommand parse_subcommand(std::string_view name) {
  for (const auto& [cmd, n] : kNames)
    if (n == name) return cmd;
  throw ConfigError("unknown subcommand '" + std::string(name) + "'");
}

std::string_view subcommand_name(Subcommand cmd) {
  for (const auto& [c, n] : kNames)
    if (c == cmd) return n;
  return "?";
}

std::vector<Subcommand> all_subcommands() {
  std::vector<Subcommand> out;
  for (const auto& entry : kNames) out.push_back(entry.first);
  return out;
}

const std::vector<KeySpec>& schema(Subcommand cmd) {
  static const std::map<Subcommand, std::vector<KeySpec>> table = [] {
    std::map<Subcommand, std::vector<KeySpec>> t;
    for (const auto& entry : kNames) t.emplace(entry.first, build_schema(entry.first));
    return t;
  }();
  return table.at(cmd);
}

double RunConfig::real(const std::string& key) const {
  double v = 0.0;
  if (!parse_double(lookup(*this, key), v)) throw ConfigError("key '" + key + "' is not a real number");
  return v;
}

long long RunConfig::integer(const std::string& key) const {
  long long v = 0;
  if (!parse_ll(lookup(*this, key), v)) throw ConfigError("key '" + key + "' is not an integer");
  return v;
}

std::uint64_t RunConfig::unsigned_integer(const std::string& key) const {
  std::uint64_t v = 0;
  if (!parse_u64(lookup(*this, key), v)) throw ConfigError("key '" + key + "' is not a non-negative integer");
  return v;
}

bool RunConfig::boolean(const std::string& key) const {
  bool v = false;
  if (!parse_bool(lookup(*this, key), v)) throw ConfigError("key '" + key + "' is not a boolean");
  return v;
}

std::vector<int> RunConfig::int_list(const std::string& key) const {
  std::vector<int> v;
  if (!parse_int_list(lookup(*this, key), v)) throw ConfigError("key '" + key + "' is not an integer list");
  return v;
}

const std::string& RunConfig::text(const std::string& key) const { return lookup(*this, key); }

RunConfig parse_config(Subcommand cmd, std::string_view file_text, const std::map<std::string, std::string>& flags,
                       std::optional<int> env_workers) {
  const auto& keys = schema(cmd);
  std::map<std::string, std::string> values;

  int line_no = 0;
  while (!file_text.empty() || line_no == 0) {
    ++line_no;
    const auto nl = file_text.find('\n');
    std::string_view line = file_text.substr(0, nl);
    file_text = nl == std::string_view::npos ? std::string_view{} : file_text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const KeySpec* spec = find_key(keys, key);
    if (key.empty()) throw ConfigError(where + "missing key");
    if (!spec) throw ConfigError(where + "unknown key '" + key + "' for " + std::string(subcommand_name(cmd)));
    if (!valid_value(spec->kind, value))
      throw ConfigError(where + "value '" + std::string(value) + "' for '" + key + "' is not " +
                        std::string(kind_name(spec->kind)));
    values[key] = std::string(value);
  }

  for (const auto& [raw_key, value] : flags) {
    const std::string key = normalize_key(raw_key);
    const KeySpec* spec = find_key(keys, key);
    if (!spec) throw ConfigError("unknown option '--" + raw_key + "' for " + std::string(subcommand_name(cmd)));
    if (!valid_value(spec->kind, value))
      throw ConfigError("value '" + value + "' for '--" + raw_key + "' is not " + std::string(kind_name(spec->kind)));
    values[key] = value;
  }

  for (const auto& spec : keys)
    if (!values.count(spec.key) && spec.default_value) values[spec.key] = *spec.default_value;

  RunConfig cfg;
  cfg.subcommand = cmd;
  cfg.params = std::move(values);
  if (cfg.has("seed")) cfg.seed = cfg.unsigned_integer("seed");
  if (cfg.has("output")) cfg.output = cfg.text("output");
  if (cfg.has("workers"))
    cfg.workers = static_cast<int>(cfg.integer("workers"));
  else
    cfg.workers = env_workers.value_or(hardware_workers());
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");

  if (cfg.has("alpha") && cfg.has("gamma")) {
    const double alpha = cfg.real("alpha");
    const double gamma = cfg.real("gamma");
    if (!(alpha + gamma > 0.5))
      throw ConfigError("condition alpha + gamma > 1/2 violated (alpha = " + format_real(alpha) +
                        ", gamma = " + format_real(gamma) + ")");
  }
  return cfg;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.output.empty()) return dispatch(config, out);
    std::ostringstream buffer;
    const int status = dispatch(config, buffer);
    std::ofstream file(config.output, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file '" + config.output + "'");
    file << buffer.str();
    return status;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const LengthError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace sfde
