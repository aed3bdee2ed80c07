#include "starlens/cli/emit.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "starlens/errors.hpp"

namespace starlens::cli {
namespace {

const char* const kReportKeys[] = {"name", "n",   "p_or_k", "body",    "level",     "M_max",
                                   "lhs",  "rhs", "ratio",  "deficit", "quad_error"};

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_value(const Value& value) {
  struct Visitor {
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return csv_field(v); }
    std::string operator()(const std::vector<double>& v) const {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + format_number(v[i]);
      return out;
    }
  };
  return std::visit(Visitor{}, value);
}

nlohmann::ordered_json json_value(const Value& value) {
  struct Visitor {
    nlohmann::ordered_json operator()(double v) const {
      return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
    }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    nlohmann::ordered_json operator()(const std::vector<double>& v) const {
      auto arr = nlohmann::ordered_json::array();
      for (double x : v) arr.push_back((*this)(x));
      return arr;
    }
  };
  return std::visit(Visitor{}, value);
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  throw ConfigError("output.format: expected 'json' or 'csv', got '" + name + "'");
}

Record to_record(const InequalityReport& r) {
  Record rec;
  rec.add("name", r.name)
      .add("n", std::int64_t{r.n})
      .add("p_or_k", r.param)
      .add("body", r.body)
      .add("level", std::int64_t{r.level})
      .add("M_max", std::int64_t{r.max_degree})
      .add("lhs", r.lhs)
      .add("rhs", r.rhs)
      .add("ratio", r.ratio)
      .add("deficit", r.deficit)
      .add("quad_error", r.quad_error);
  return rec;
}

Record to_record(const SweepResult& s) {
  Record rec;
  rec.add("name", std::string("local-sweep"))
      .add("n", std::int64_t{s.n})
      .add("p_or_k", s.p)
      .add("m", std::int64_t{s.m})
      .add("eps", s.eps_values)
      .add("deficits", s.deficits)
      .add("quad_errors", s.quad_errors)
      .add("fitted_quadratic_coeff", s.fitted_quadratic_coeff)
      .add("predicted_coeff", s.predicted_coeff)
      .add("fit_residual", s.fit_residual)
      .add("harmonic_norm2", s.harmonic_norm2);
  return rec;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string emit(const std::vector<Record>& records, Format format) {
  std::string out;
  if (format == Format::json) {
    for (const Record& rec : records) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (const auto& [key, value] : rec.fields) obj[key] = json_value(value);
      out += obj.dump() + "\n";
    }
    return out;
  }
  if (records.empty()) {
    for (std::size_t i = 0; i < std::size(kReportKeys); ++i) out += (i ? "," : "") + std::string(kReportKeys[i]);
    return out + "\n";
  }
  const Record& head = records.front();
  for (std::size_t i = 0; i < head.fields.size(); ++i) out += (i ? "," : "") + csv_field(head.fields[i].first);
  out += "\n";
  for (const Record& rec : records) {
    if (rec.fields.size() != head.fields.size()) throw IoError("csv: records with different fields");
    for (std::size_t i = 0; i < rec.fields.size(); ++i) {
      if (rec.fields[i].first != head.fields[i].first) throw IoError("csv: records with different fields");
      out += (i ? "," : "") + csv_value(rec.fields[i].second);
    }
    out += "\n";
  }
  return out;
}

void write_output(const std::string& bytes, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << bytes;
    out.flush();
    if (!out) throw IoError("failed to write output");
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open output file '" + path + "'");
  file << bytes;
  file.close();
  if (!file) throw IoError("failed to write output file '" + path + "'");
}

}  // namespace starlens::cli
