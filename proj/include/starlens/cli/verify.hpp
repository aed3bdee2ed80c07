#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "starlens/inequalities.hpp"

namespace starlens::cli {

struct VerifyOptions {
  int level = 0;  // 0: per-check defaults; otherwise the base level for n = 3
  bool quick = false;
  std::uint64_t seed = 20260101;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  std::vector<InequalityReport> reports;
  std::vector<std::string> notes;  // tables and other non-asserted output
};

inline constexpr int kCriterionCount = 15;

CriterionResult run_criterion(int id, const VerifyOptions& options);
std::vector<CriterionResult> run_all(const VerifyOptions& options);

}  // namespace starlens::cli
