#include "juttner/output.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace juttner::output {

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

struct CsvCell {
  std::string operator()(double x) const { return format_real(x); }
  std::string operator()(std::int64_t x) const { return std::to_string(x); }
  std::string operator()(bool x) const { return x ? "true" : "false"; }
  std::string operator()(const std::string& s) const { return s; }
};

struct JsonCell {
  std::string operator()(double x) const { return std::isfinite(x) ? format_real(x) : "null"; }
  std::string operator()(std::int64_t x) const { return std::to_string(x); }
  std::string operator()(bool x) const { return x ? "true" : "false"; }
  std::string operator()(const std::string& s) const { return "\"" + json_escape(s) + "\""; }
};

void write_members(const std::vector<std::pair<std::string, Cell>>& members, std::ostream& out) {
  out << '{';
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) out << ", ";
    out << '"' << json_escape(members[i].first) << "\": " << std::visit(JsonCell{}, members[i].second);
  }
  out << '}';
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << std::visit(CsvCell{}, row[i]);
    }
    out << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  out << "{\n  \"command\": \"" << json_escape(table.command) << "\",\n  \"params\": ";
  write_members(table.params, out);
  for (const auto& [key, cell] : table.summary) {
    out << ",\n  \"" << json_escape(key) << "\": " << std::visit(JsonCell{}, cell);
  }
  out << ",\n  \"rows\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << (r ? ",\n    " : "\n    ");
    std::vector<std::pair<std::string, Cell>> members;
    members.reserve(table.columns.size());
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      members.emplace_back(table.columns[i], table.rows[r][i]);
    }
    write_members(members, out);
  }
  out << (table.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

}  // namespace juttner::output
