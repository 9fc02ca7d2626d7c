#include "zeno_cli/output.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

namespace zeno::cli {
namespace {

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", value);
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  out << "{\n  \"columns\": [";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? ", " : "") << json_string(table.columns[i]);
  }
  out << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << (r ? ",\n    [" : "\n    [");
    const auto& row = table.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? ", " : "") << (std::isfinite(row[i]) ? format_number(row[i]) : "null");
    }
    out << ']';
  }
  out << (table.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

std::string sidecar_json(const RunConfig& config, const Table& table) {
  nlohmann::ordered_json doc;
  doc["command"] = std::string(command_name(config.command));
  for (const auto& [key, value] : config.values()) {
    std::visit([&, k = key](const auto& v) { doc[k] = v; }, value);
  }
  if (!table.diagnostics.empty()) {
    nlohmann::ordered_json diag;
    for (const auto& [name, flag] : table.diagnostics) diag[name] = flag;
    doc["diagnostics"] = diag;
  }
  return doc.dump(2) + "\n";
}

}  // namespace zeno::cli
