#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "starlens/inequalities.hpp"

namespace starlens::cli {

using Value = std::variant<double, std::int64_t, bool, std::string, std::vector<double>>;

// Flat record with ordered fields.
struct Record {
  std::vector<std::pair<std::string, Value>> fields;
  Record& add(std::string key, Value value) {
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }
};

enum class Format { json, csv };

Format parse_format(const std::string& name);

// name, n, p_or_k, body, level, M_max, lhs, rhs, ratio, deficit, quad_error
Record to_record(const InequalityReport& report);
Record to_record(const SweepResult& sweep);

// Shortest round-trip for JSON is left to the JSON library; CSV uses 17
// significant digits. Both are independent of the locale.
std::string format_number(double value);

// JSON: one object per line. CSV: header from the first record's keys, then
// one row per record; lists are joined with ';'. An empty list gives the
// canonical report header only.
std::string emit(const std::vector<Record>& records, Format format);

// Writes to `path`, or to `out` when path is empty or "-". Throws IoError.
void write_output(const std::string& bytes, const std::string& path, std::ostream& out);

}  // namespace starlens::cli
