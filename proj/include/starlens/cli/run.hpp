#pragma once

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "starlens/cli/emit.hpp"

namespace starlens::cli {

struct Params {
  std::optional<double> p;
  std::optional<int> k;
  std::optional<double> q;
  std::optional<int> max_degree;  // "M_max"
  std::optional<int> level;
  std::vector<double> eps_list;
  std::optional<std::uint64_t> seed;
  std::optional<int> m;
  std::optional<int> n;
  std::optional<int> trials;
  std::optional<bool> quick;
  std::optional<std::string> expect;  // "equality" or "strict"
  std::optional<double> tolerance;    // relative, for expect = "equality"
};

struct ExperimentConfig {
  std::optional<nlohmann::json> body;
  std::string check;
  Params params;
  std::string output_path;
  Format format = Format::json;
};

// Parameter keys may sit under "params" or at the top level.
ExperimentConfig parse_config(const nlohmann::json& doc);
// Reads a JSON document from `path`, or from stdin for "-".
ExperimentConfig load_config(const std::string& path);

struct RunOutcome {
  int exit_code = 0;
  std::vector<Record> records;
  std::vector<std::string> failures;  // one line per failed invariant
  std::vector<std::string> notes;
};

// 0: success; 1: configuration error; 2: an asserted invariant failed.
RunOutcome execute(const ExperimentConfig& config);
// execute + emission; configuration errors are reported on `err`.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace starlens::cli
