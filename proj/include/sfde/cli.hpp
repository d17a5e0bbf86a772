#pragma once

// Flat key = value configuration and subcommand dispatch.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sfde {

enum class Subcommand { Weights, Solve, Verify, ConvergeTime, ConvergeSpace, Holder, Rates };

Subcommand parse_subcommand(std::string_view name);
std::string_view subcommand_name(Subcommand cmd);
std::vector<Subcommand> all_subcommands();

enum class ValueKind { Real, Integer, Unsigned, IntList, Boolean, Text };

struct KeySpec {
  std::string key;
  ValueKind kind;
  std::optional<std::string> default_value;
  std::string help;
};

/// Keys accepted by a subcommand, with their defaults.
const std::vector<KeySpec>& schema(Subcommand cmd);

struct RunConfig {
  Subcommand subcommand{Subcommand::Verify};
  std::map<std::string, std::string> params;  // validated, defaults filled in
  std::uint64_t seed{42};
  std::string output;  // empty: stdout
  int workers{1};

  bool has(const std::string& key) const { return params.count(key) != 0; }
  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::vector<int> int_list(const std::string& key) const;
  const std::string& text(const std::string& key) const;
};

/// Merges a flat `key = value` file (may be empty) with flag overrides.
/// Flags win over file values; unknown keys, malformed values (reported with
/// their line number) and alpha + gamma <= 1/2 throw ConfigError.
/// env_workers is the worker count from the environment, if any.
RunConfig parse_config(Subcommand cmd, std::string_view file_text, const std::map<std::string, std::string>& flags,
                       std::optional<int> env_workers = std::nullopt);

/// Runs a validated config, writing results to `out` and diagnostics to `err`.
/// Returns 0 on success, 1 when a verification check fails, 2 on configuration errors.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Environment variable consulted for the worker count.
inline constexpr const char* kWorkersEnv = "SFDE_WORKERS";

}  // namespace sfde
