#pragma once

#include <functional>
#include <string>
#include <vector>

namespace tate::cli {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::vector<std::string> failures;  // empty when passed
  std::size_t checks = 0;
  double milliseconds = 0;
};

// Runs acceptance criteria 1..10 in order; `on_done` sees each result as it
// finishes. `only` restricts to the listed ids.
std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& on_done = {},
                                            const std::vector<int>& only = {});

}  // namespace tate::cli
