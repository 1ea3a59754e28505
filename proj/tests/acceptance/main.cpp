#include "tate_cli/acceptance.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  bool all = true;
  tate::cli::run_acceptance(
      [&](const tate::cli::CriterionResult& r) {
        std::printf("criterion %d: %s (%s; %zu checks, %.0f ms)\n", r.id, r.passed ? "PASS" : "FAIL", r.title.c_str(),
                    r.checks, r.milliseconds);
        for (const auto& f : r.failures) std::printf("  - %s\n", f.c_str());
        std::fflush(stdout);
        all = all && r.passed;
      },
      only);
  return all ? 0 : 1;
}
