#include "zeno_cli/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace zeno::cli {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<Command, std::string_view>, 9> kCommandNames{{
    {Command::Portrait, "portrait"},
    {Command::CriticalPoints, "critical-points"},
    {Command::Action, "action"},
    {Command::TransitionTime, "transition-time"},
    {Command::ZenoFrequencies, "zeno-frequencies"},
    {Command::Density, "density"},
    {Command::Trajectory, "trajectory"},
    {Command::Mlp, "mlp"},
    {Command::Ensemble, "ensemble"},
}};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_plain(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> parts;
  std::string s = trim(text);
  if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

Value convert(const KeySpec& spec, const std::string& raw) {
  switch (spec.kind) {
    case Kind::Real:
      return parse_real(raw, spec.key);
    case Kind::Count:
    case Kind::Seed: {
      std::uint64_t value = 0;
      const std::string s = trim(raw);
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
      if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ValidationError("--" + flag_name(spec.key) + ": expected a non-negative integer, got '" +
                              raw + "'");
      }
      return value;
    }
    case Kind::Choice: {
      const std::string s = trim(raw);
      if (std::find(spec.choices.begin(), spec.choices.end(), s) == spec.choices.end()) {
        std::string allowed;
        for (const auto& c : spec.choices) allowed += (allowed.empty() ? "" : ", ") + c;
        throw ValidationError("--" + flag_name(spec.key) + ": '" + raw + "' is not one of {" +
                              allowed + "}");
      }
      return s;
    }
    case Kind::RealList: {
      std::vector<double> values;
      for (const auto& part : split_list(raw)) values.push_back(parse_real(part, spec.key));
      if (values.empty()) {
        throw ValidationError("--" + flag_name(spec.key) + ": expected at least one number");
      }
      return values;
    }
    case Kind::Text:
      return trim(raw);
  }
  throw ValidationError("unhandled option kind");
}

std::string json_to_raw(const json& value, const std::string& key) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number()) return value.dump();
  if (value.is_array()) {
    std::string out;
    for (const auto& item : value) {
      if (!item.is_number() && !item.is_string()) {
        throw ValidationError("config key '" + key + "': list items must be numbers");
      }
      out += (out.empty() ? "" : ",") + json_to_raw(item, key);
    }
    return out;
  }
  if (value.is_boolean()) return value.get<bool>() ? "1" : "0";
  throw ValidationError("config key '" + key + "': unsupported value type");
}

int rank(Source s) { return static_cast<int>(s); }

void check_known(const RawInputs& inputs, Command command, const char* origin) {
  const auto& keys = command_keys(command);
  for (const auto& [key, value] : inputs) {
    (void)value;
    const bool known = std::any_of(keys.begin(), keys.end(),
                                   [&](const CommandKey& k) { return k.key == key; });
    if (!known) {
      throw ValidationError(std::string(origin) + " key '" + key + "' is not used by '" +
                            std::string(command_name(command)) + "'");
    }
  }
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kCommandNames) {
    if (cmd == c) return name;
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommandNames) {
    if (n == name) return cmd;
  }
  return std::nullopt;
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> commands = [] {
    std::vector<Command> out;
    for (const auto& entry : kCommandNames) out.push_back(entry.first);
    return out;
  }();
  return commands;
}

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs{
      {"omega_s", Kind::Real, "drive frequency Omega_s [GHz]", {}},
      {"lambda", Kind::Real, "measurement strength lambda = alpha / (4 Omega_s)", {}},
      {"alpha", Kind::Real, "measurement rate alpha [GHz]; overrides --lambda", {}},
      {"tau", Kind::Real, "detector characteristic time [ns]", {}},
      {"dt", Kind::Real, "time step [ns]", {}},
      {"t_end", Kind::Real, "final time [ns]", {}},
      {"seed", Kind::Seed, "base RNG seed", {}},
      {"noise", Kind::Choice, "Wiener increments", {"binary", "gaussian"}},
      {"model", Kind::Choice, "trajectory model", {"diffusive", "postselected"}},
      {"x0", Kind::Real, "initial x", {}},
      {"y0", Kind::Real, "initial y", {}},
      {"z0", Kind::Real, "initial z", {}},
      {"px0", Kind::Real, "initial p_x", {}},
      {"py0", Kind::Real, "initial p_y", {}},
      {"pz0", Kind::Real, "initial p_z", {}},
      {"theta_i", Kind::Real, "initial angle [rad]", {}},
      {"theta_f", Kind::Real, "final angle [rad]", {}},
      {"epsilon", Kind::Real, "angular cutoff around the critical angles [rad]", {}},
      {"energies", Kind::RealList, "comma-separated energy levels E = -H / (2 Omega_s)", {}},
      {"start", Kind::Real, "grid start", {}},
      {"stop", Kind::Real, "grid stop (inclusive)", {}},
      {"count", Kind::Count, "grid points (>= 2)", {}},
      {"n", Kind::Count, "number of trajectories", {}},
      {"threads", Kind::Count, "worker threads (0: hardware concurrency)", {}},
      {"stride", Kind::Count, "write every stride-th time point", {}},
      {"format", Kind::Choice, "output format", {"csv", "json"}},
      {"out", Kind::Text, "output file ('-' for stdout)", {}},
  };
  return specs;
}

const KeySpec& key_spec(std::string_view key) {
  for (const auto& spec : key_specs()) {
    if (spec.key == key) return spec;
  }
  throw ValidationError("unknown key '" + std::string(key) + "'");
}

std::string flag_name(std::string_view key) {
  std::string flag(key);
  std::replace(flag.begin(), flag.end(), '_', '-');
  return flag;
}

const std::vector<CommandKey>& command_keys(Command c) {
  using K = std::vector<CommandKey>;
  static const K common{{"omega_s", "0.5"}, {"format", "csv"}, {"out", std::nullopt}};
  const auto with_common = [](K extra) {
    K out = common;
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
  };
  static const K portrait = with_common({{"lambda", "1.5"},
                                         {"energies", "-1,-0.5,0,0.5,1,1.5,2,2.5"},
                                         {"start", "-pi"},
                                         {"stop", "pi"},
                                         {"count", "401"}});
  static const K critical = with_common({{"lambda", "1.5"}});
  static const K action = with_common({{"lambda", "0.5"}, {"theta_i", "0"}, {"theta_f", "-pi"}});
  static const K transition = with_common(
      {{"lambda", std::nullopt}, {"start", "0"}, {"stop", "0.99"}, {"count", "100"}});
  static const K frequencies = with_common({{"lambda", std::nullopt},
                                            {"epsilon", "1e-3"},
                                            {"start", "1.05"},
                                            {"stop", "5"},
                                            {"count", "80"}});
  static const K density = with_common(
      {{"lambda", "1.5"}, {"theta_i", "0"}, {"start", "-0.999"}, {"stop", "0.999"}, {"count", "401"}});
  static const K trajectory = with_common({{"model", "diffusive"},
                                           {"lambda", "1.5"},
                                           {"alpha", std::nullopt},
                                           {"tau", "100"},
                                           {"dt", "1e-3"},
                                           {"t_end", "10"},
                                           {"seed", "0"},
                                           {"noise", "binary"},
                                           {"x0", "0"},
                                           {"y0", "0"},
                                           {"z0", "1"},
                                           {"stride", "1"}});
  static const K mlp = with_common({{"lambda", "1.5"},
                                    {"alpha", std::nullopt},
                                    {"tau", "100"},
                                    {"dt", "1e-4"},
                                    {"t_end", "8"},
                                    {"x0", "0"},
                                    {"y0", "0.4"},
                                    {"z0", "0.916"},
                                    {"px0", "0.5"},
                                    {"py0", "0.3"},
                                    {"pz0", "0.2"},
                                    {"stride", "10"}});
  static const K ensemble = with_common({{"lambda", "1.5"},
                                         {"alpha", std::nullopt},
                                         {"tau", "100"},
                                         {"dt", "1e-3"},
                                         {"t_end", "10"},
                                         {"seed", "0"},
                                         {"noise", "binary"},
                                         {"x0", "0"},
                                         {"y0", "0"},
                                         {"z0", "1"},
                                         {"n", "500"},
                                         {"threads", "1"},
                                         {"stride", "10"}});
  switch (c) {
    case Command::Portrait: return portrait;
    case Command::CriticalPoints: return critical;
    case Command::Action: return action;
    case Command::TransitionTime: return transition;
    case Command::ZenoFrequencies: return frequencies;
    case Command::Density: return density;
    case Command::Trajectory: return trajectory;
    case Command::Mlp: return mlp;
    case Command::Ensemble: return ensemble;
  }
  return common;
}

std::string command_description(Command c) {
  switch (c) {
    case Command::Portrait:
      return "Constant-energy curves p_theta(theta) of the reduced phase space";
    case Command::CriticalPoints:
      return "Saddle points, axis exponents and separatrix energies (lambda > 1)";
    case Command::Action:
      return "Action between two angles, closed form and quadrature";
    case Command::TransitionTime:
      return "Time from theta = 0 to -pi below the Zeno threshold (single --lambda or a grid)";
    case Command::ZenoFrequencies:
      return "Segment times and frequencies above the Zeno threshold (single --lambda or a grid)";
    case Command::Density:
      return "Normalized most-likely final-state density over z_f";
    case Command::Trajectory:
      return "One stochastic diffusive trajectory or the post-selected repeated-measurement path";
    case Command::Mlp:
      return "Most-likely path of the diffusive model (Bloch coordinates and momenta)";
    case Command::Ensemble:
      return "Mean and variance of Bloch coordinates over seeded diffusive trajectories";
  }
  return {};
}

std::string command_columns_help(Command c) {
  switch (c) {
    case Command::Portrait:
      return "Columns: energy[1], theta[rad], p_theta[1]. Points where 1 + lambda sin(theta) "
             "vanishes are skipped.";
    case Command::CriticalPoints:
      return "Columns: point[1] (1 or 2), theta[rad], p_theta[1], exponent_theta[GHz], "
             "exponent_p_theta[GHz], energy[1].";
    case Command::Action:
      return "Columns: lambda[1], theta_i[rad], theta_f[rad], action_closed_form[hbar], "
             "action_quadrature[hbar] (nan when a nullcline lies between the endpoints).";
    case Command::TransitionTime:
      return "Columns: lambda[1], t[ns], frequency[GHz].";
    case Command::ZenoFrequencies:
      return "Columns: lambda[1], epsilon[rad], t1[ns], t12[ns], t2[ns], omega1[GHz], "
             "omega12[GHz], omega2[GHz].";
    case Command::Density:
      return "Columns: z_f[1], density[1].";
    case Command::Trajectory:
      return "Columns (diffusive): t[ns], x[1], y[1], z[1], r[1]. Columns (postselected): "
             "t[ns], x[1], y[1], z[1].";
    case Command::Mlp:
      return "Columns: t[ns], x[1], y[1], z[1], p_x[1], p_y[1], p_z[1], r[1], hamiltonian[GHz].";
    case Command::Ensemble:
      return "Columns: t[ns], mean_x[1], mean_y[1], mean_z[1], var_x[1], var_y[1], var_z[1].";
  }
  return {};
}

bool RunConfig::has(std::string_view key) const { return values_.find(key) != values_.end(); }

Source RunConfig::source(std::string_view key) const {
  const auto it = sources_.find(key);
  return it == sources_.end() ? Source::Default : it->second;
}

const Value& RunConfig::at(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("missing value for '" + std::string(key) + "'");
  return it->second;
}

double RunConfig::real(std::string_view key) const { return std::get<double>(at(key)); }
std::uint64_t RunConfig::count(std::string_view key) const {
  return std::get<std::uint64_t>(at(key));
}
const std::string& RunConfig::text(std::string_view key) const {
  return std::get<std::string>(at(key));
}
const std::vector<double>& RunConfig::reals(std::string_view key) const {
  return std::get<std::vector<double>>(at(key));
}

void RunConfig::set(const std::string& key, Value value, Source source) {
  values_[key] = std::move(value);
  sources_[key] = source;
}

void RunConfig::erase(const std::string& key) {
  values_.erase(key);
  sources_.erase(key);
}

double parse_real(std::string_view text, std::string_view key) {
  const std::string s = trim(text);
  const auto fail = [&]() -> double {
    throw ValidationError("--" + flag_name(key) + ": expected a number, got '" + std::string(text) +
                          "'");
  };
  if (auto plain = parse_plain(s)) {
    if (!std::isfinite(*plain)) fail();
    return *plain;
  }
  // [sign][factor*]pi[/divisor]
  std::string_view rest(s);
  double sign = 1.0;
  if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
    sign = rest.front() == '-' ? -1.0 : 1.0;
    rest.remove_prefix(1);
  }
  double factor = 1.0;
  if (const auto star = rest.find('*'); star != std::string_view::npos) {
    const auto f = parse_plain(rest.substr(0, star));
    if (!f) fail();
    factor = *f;
    rest.remove_prefix(star + 1);
  }
  if (rest.substr(0, 2) != "pi") fail();
  rest.remove_prefix(2);
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') fail();
    const auto d = parse_plain(rest.substr(1));
    if (!d || *d == 0.0) fail();
    divisor = *d;
  }
  return sign * factor * std::numbers::pi / divisor;
}

FileConfig parse_config_text(const std::string& text) {
  FileConfig config;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config file must hold a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (key == "command") {
        config.command = parse_command(value.get<std::string>());
        if (!config.command) throw ValidationError("config: unknown command '" + value.dump() + "'");
        continue;
      }
      if (key == "diagnostics") continue;  // written by previous runs
      key_spec(key);
      config.inputs[key] = json_to_raw(value, key);
    }
    return config;
  }

  std::istringstream in(text);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw ValidationError(std::string("config file: ") + e.what());
  }
  for (const auto& item : items) {
    if (!item.parents.empty() || item.name == "++" || item.name == "--") continue;
    std::string key = item.name;
    std::replace(key.begin(), key.end(), '-', '_');
    std::string joined;
    for (const auto& input : item.inputs) joined += (joined.empty() ? "" : ",") + input;
    if (key == "command") {
      config.command = parse_command(joined);
      if (!config.command) throw ValidationError("config: unknown command '" + joined + "'");
      continue;
    }
    key_spec(key);
    config.inputs[key] = joined;
  }
  return config;
}

FileConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

RunConfig resolve(Command command, const RawInputs& flags, const RawInputs& file) {
  check_known(flags, command, "flag");
  check_known(file, command, "config");

  RunConfig config;
  config.command = command;
  for (const auto& [key, fallback] : command_keys(command)) {
    const KeySpec& spec = key_spec(key);
    if (const auto it = flags.find(key); it != flags.end()) {
      config.set(key, convert(spec, it->second), Source::Flag);
    } else if (const auto jt = file.find(key); jt != file.end()) {
      config.set(key, convert(spec, jt->second), Source::File);
    } else if (fallback) {
      config.set(key, convert(spec, *fallback), Source::Default);
    }
  }

  const double omega_s = config.real("omega_s");
  if (!(omega_s > 0.0)) throw ValidationError("--omega-s must be > 0");

  // lambda and alpha describe the same quantity; the more explicit source wins
  // and alpha wins a tie.
  const bool uses_alpha = std::any_of(command_keys(command).begin(), command_keys(command).end(),
                                      [](const CommandKey& k) { return k.key == "alpha"; });
  if (uses_alpha) {
    const Source alpha_src = config.has("alpha") ? config.source("alpha") : Source::Default;
    const Source lambda_src = config.source("lambda");
    double alpha = 0.0;
    Source chosen = Source::Default;
    if (config.has("alpha") && rank(alpha_src) >= rank(lambda_src)) {
      alpha = config.real("alpha");
      chosen = alpha_src;
    } else {
      alpha = 4.0 * omega_s * config.real("lambda");
      chosen = lambda_src;
    }
    if (!(alpha >= 0.0)) throw ValidationError("--alpha / --lambda must be >= 0");
    config.set("alpha", alpha, chosen);
    config.set("lambda", alpha / (4.0 * omega_s), chosen);
  }

  if (config.has("lambda") && !(config.real("lambda") >= 0.0)) {
    throw ValidationError("--lambda must be >= 0");
  }
  if (config.has("count") && config.count("count") < 2) {
    throw ValidationError("--count must be >= 2");
  }
  if (config.has("start") && config.has("stop") && !(config.real("start") < config.real("stop"))) {
    throw ValidationError("--start must be smaller than --stop");
  }
  for (const char* key : {"dt", "tau"}) {
    if (config.has(key) && !(config.real(key) > 0.0)) {
      throw ValidationError("--" + flag_name(key) + " must be > 0");
    }
  }
  if (config.has("t_end") && !(config.real("t_end") >= 0.0)) {
    throw ValidationError("--t-end must be >= 0");
  }
  for (const char* key : {"stride", "n"}) {
    if (config.has(key) && config.count(key) < 1) {
      throw ValidationError("--" + flag_name(key) + " must be >= 1");
    }
  }
  if (config.has("epsilon") && !(config.real("epsilon") > 0.0)) {
    throw ValidationError("--epsilon must be > 0");
  }
  if (config.has("out") && config.text("out").empty()) config.erase("out");
  return config;
}

}  // namespace zeno::cli
