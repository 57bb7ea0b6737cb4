#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace astra::cli {

inline constexpr int kSchemaVersion = 1;

/// CSV output. The first line names the schema and its version, the
/// second holds the column names.
struct Table {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string to_csv() const;
};

/// Shortest round-trippable form is not stable across libraries; a fixed
/// 12 significant digits is.
std::string fmt(double v);
std::string fmt(std::uint64_t v);

}  // namespace astra::cli
