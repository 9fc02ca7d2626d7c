#pragma once

#include <iosfwd>
#include <string>

#include "zeno_cli/commands.hpp"
#include "zeno_cli/config.hpp"

namespace zeno::cli {

// 17 significant digits; non-finite values print as nan / inf / -inf.
std::string format_number(double value);

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);

// Full resolved configuration plus diagnostics, as pretty-printed JSON.
std::string sidecar_json(const RunConfig& config, const Table& table);

}  // namespace zeno::cli
