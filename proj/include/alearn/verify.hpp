#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace alearn {

struct VerifyOptions {
  std::uint64_t seed = 1;
  int jobs = 1;
  double K1 = 1.5;
  double band_D = 0.03;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// "all" (1-10), "quick" (the fast deterministic ones), a number "3" or "c3", or a criterion name.
std::vector<int> suite_criteria(std::string_view suite);
std::string criterion_name(int id);
CriterionResult run_criterion(int id, const VerifyOptions& opts);
/// One line: "PASS  3 rate_separation (12.3 s): detail".
std::string format_result(const CriterionResult& r);

}  // namespace alearn
