#pragma once

#include <functional>
#include <string>
#include <vector>

namespace halflap {
namespace verify {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriteriaCount = 12;

/// Run criterion k (1-based). Throws InvalidArgumentError for unknown k;
/// internal numerical errors are caught and reported as failures.
CriterionResult run_criterion(int k);

/// Run the whole suite in order, invoking the callback after each criterion.
std::vector<CriterionResult> run_all(
    const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace verify
}  // namespace halflap
