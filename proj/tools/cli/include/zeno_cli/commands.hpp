#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zeno_cli/config.hpp"

namespace zeno::cli {

// One output table. Column names carry their unit in brackets.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // Informational flags raised by the integrators (stalled, diverged, ...).
  std::vector<std::pair<std::string, bool>> diagnostics;
};

// Evaluates one resolved run. Throws zeno::Error on numerical failure and
// ValidationError on inconsistent settings.
Table run_command(const RunConfig& config);

}  // namespace zeno::cli
