#include "astra/cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace astra::cli {

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("table row width differs from the header");
  rows.push_back(std::move(row));
}

namespace {

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += field(cells[i]);
  }
  out += '\n';
}

}  // namespace

std::string Table::to_csv() const {
  std::string out = "# schema=astra-sim/" + schema + " version=" + std::to_string(kSchemaVersion) + "\n";
  append_line(out, columns);
  for (const auto& r : rows) append_line(out, r);
  return out;
}

std::string fmt(double v) {
  if (v == 0.0) return "0";  // folds -0
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

}  // namespace astra::cli
