#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace zeno::cli {

// Bad user input. Maps to exit status 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command {
  Portrait,
  CriticalPoints,
  Action,
  TransitionTime,
  ZenoFrequencies,
  Density,
  Trajectory,
  Mlp,
  Ensemble,
};

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);
const std::vector<Command>& all_commands();

enum class Kind { Real, Count, Seed, Choice, RealList, Text };

struct KeySpec {
  std::string key;  // config-file key; the flag is "--" + key with '_' -> '-'
  Kind kind;
  std::string help;
  std::vector<std::string> choices;  // Kind::Choice only
};

// Every key understood by some command.
const std::vector<KeySpec>& key_specs();
const KeySpec& key_spec(std::string_view key);
std::string flag_name(std::string_view key);

// Keys a command accepts, each with its default (nullopt: unset unless given).
struct CommandKey {
  std::string key;
  std::optional<std::string> fallback;
};
const std::vector<CommandKey>& command_keys(Command c);

// Short description and CSV column documentation for --help.
std::string command_description(Command c);
std::string command_columns_help(Command c);

using Value = std::variant<double, std::uint64_t, std::string, std::vector<double>>;

enum class Source { Default, File, Flag };

// Fully resolved settings of one run.
class RunConfig {
 public:
  Command command = Command::CriticalPoints;

  bool has(std::string_view key) const;
  Source source(std::string_view key) const;
  double real(std::string_view key) const;
  std::uint64_t count(std::string_view key) const;
  const std::string& text(std::string_view key) const;
  const std::vector<double>& reals(std::string_view key) const;

  void set(const std::string& key, Value value, Source source);
  void erase(const std::string& key);

  // Ordered key -> value view, used for the sidecar.
  const std::map<std::string, Value, std::less<>>& values() const { return values_; }

 private:
  const Value& at(std::string_view key) const;

  std::map<std::string, Value, std::less<>> values_;
  std::map<std::string, Source, std::less<>> sources_;
};

// Raw string inputs gathered from the command line or a config file.
using RawInputs = std::map<std::string, std::string, std::less<>>;

struct FileConfig {
  std::optional<Command> command;
  RawInputs inputs;
};

// JSON object (first non-blank character '{') or key = value lines. Lists are
// comma separated or TOML arrays. Throws ValidationError.
FileConfig load_config_file(const std::string& path);
FileConfig parse_config_text(const std::string& text);

// Flags override file values, which override defaults.
RunConfig resolve(Command command, const RawInputs& flags, const RawInputs& file);

// Number parser used for every real-valued input. Accepts decimal literals and
// multiples of pi such as "pi", "-pi", "pi/2", "-0.5*pi".
double parse_real(std::string_view text, std::string_view key);

}  // namespace zeno::cli
