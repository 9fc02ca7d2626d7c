#include "zeno_cli/app.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zeno/error.hpp"
#include "zeno_cli/commands.hpp"
#include "zeno_cli/config.hpp"
#include "zeno_cli/output.hpp"

namespace zeno::cli {
namespace {

namespace fs = std::filesystem;

struct Subcommand {
  Command command;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> storage;
  std::map<std::string, CLI::Option*> options;
};

std::string default_note(const CommandKey& key) {
  return key.fallback ? " (default: " + *key.fallback + ")" : "";
}

fs::path output_path(const RunConfig& config) {
  if (config.has("out")) return fs::path(config.text("out"));
  const char* dir = std::getenv(kOutputDirEnv);
  const fs::path base = (dir && *dir) ? fs::path(dir) : fs::path(".");
  return base / (std::string(command_name(config.command)) + "." + config.text("format"));
}

void write_outputs(RunConfig& config, const Table& table, std::ostream& out) {
  const auto emit = [&](std::ostream& stream) {
    if (config.text("format") == "json") {
      write_json(stream, table);
    } else {
      write_csv(stream, table);
    }
  };
  if (config.has("out") && config.text("out") == "-") {
    emit(out);
    return;
  }
  const fs::path path = output_path(config);
  config.set("out", path.string(), config.has("out") ? config.source("out") : Source::Default);
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw ValidationError("cannot create directory '" + path.parent_path().string() + "'");
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot open '" + path.string() + "' for writing");
  emit(file);
  std::ofstream sidecar(path.string() + ".config.json", std::ios::binary);
  if (!sidecar) throw ValidationError("cannot write sidecar next to '" + path.string() + "'");
  sidecar << sidecar_json(config, table);
  if (!file || !sidecar) throw ValidationError("write to '" + path.string() + "' failed");
  out << path.string() << '\n';
}

// A config file that names its command stands in for a missing subcommand, so
// the remaining flags still parse against that command's options. Load errors
// are left for the main pass to report.
std::vector<std::string> with_config_command(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (parse_command(args[i])) return args;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty()) return args;
  try {
    if (const auto command = load_config_file(path).command) {
      args.insert(args.begin() + 1, std::string(command_name(*command)));
    }
  } catch (const ValidationError&) {
  }
  return args;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Qubit Zeno-effect phase-space and measurement simulator", "zeno"};
  app.require_subcommand(0, 1);
  app.footer("Output goes to --out, or to $" + std::string(kOutputDirEnv) +
             "/<command>.<format> (current directory when unset). A <out>.config.json sidecar "
             "records the resolved settings and can be passed back with --config.");
  std::string config_path;
  app.add_option("--config", config_path,
                 "settings file: JSON object or key = value lines; flags override it");

  std::vector<Subcommand> subs;
  subs.reserve(all_commands().size());
  for (Command command : all_commands()) {
    Subcommand& sub = subs.emplace_back();
    sub.command = command;
    sub.app = app.add_subcommand(std::string(command_name(command)), command_description(command));
    sub.app->fallthrough();
    sub.app->footer(command_columns_help(command));
    for (const CommandKey& key : command_keys(command)) {
      const KeySpec& spec = key_spec(key.key);
      sub.options[key.key] = sub.app->add_option("--" + flag_name(key.key), sub.storage[key.key],
                                                 spec.help + default_note(key));
    }
  }

  const std::vector<std::string> args = with_config_command(argc, argv);
  std::vector<const char*> arg_ptrs;
  for (const auto& a : args) arg_ptrs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(arg_ptrs.size()), arg_ptrs.data());
  } catch (const CLI::ParseError& e) {
    // --help lands here too and exits 0.
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    FileConfig file;
    if (!config_path.empty()) file = load_config_file(config_path);

    const Subcommand* chosen = nullptr;
    for (const auto& sub : subs) {
      if (sub.app->parsed()) chosen = &sub;
    }
    Command command{};
    if (chosen) {
      command = chosen->command;
      if (file.command && *file.command != command) {
        throw ValidationError("config file is for '" + std::string(command_name(*file.command)) +
                              "', not '" + std::string(command_name(command)) + "'");
      }
    } else if (file.command) {
      command = *file.command;
    } else {
      throw ValidationError("a subcommand is required (see --help)");
    }

    RawInputs flags;
    if (chosen) {
      for (const auto& [key, option] : chosen->options) {
        if (option->count() > 0) flags[key] = chosen->storage.at(key);
      }
    }
    RunConfig config = resolve(command, flags, file.inputs);
    const Table table = run_command(config);
    write_outputs(config, table, out);
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidParameter ? kExitValidation : kExitNumerical;
  }
}

}  // namespace zeno::cli
