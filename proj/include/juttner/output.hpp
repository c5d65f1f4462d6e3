#pragma once

// Tabular output shared by every CLI command. Reals are printed with 17
// significant digits; CSV and JSON carry the same cells.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace juttner::output {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
  std::string command;
  std::vector<std::pair<std::string, Cell>> params;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // Extra top-level JSON members (CSV omits them).
  std::vector<std::pair<std::string, Cell>> summary;
};

std::string format_real(double x);

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);

}  // namespace juttner::output
