#include "tate_cli/acceptance.hpp"
#include "tate_cli/runner.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

namespace {

int run_file(const std::string& path, const std::optional<std::string>& job, const std::string& format,
             const std::string& cache_dir, std::size_t budget) {
  using namespace tate::cli;
  std::ifstream in(path);
  if (!in) {
    std::cerr << "tate-encode: cannot read " << path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  WorkspaceSpec spec;
  try {
    spec = parse_workspace(buf.str());
  } catch (const ParseError& e) {
    std::cerr << path << ":" << e.pos.line << ":" << e.pos.column << ": error: "
              << std::string(e.what()).substr(std::string(e.what()).find(": ") + 2) << "\n";
    return 2;
  }
  RunOptions opts;
  opts.budget = budget;
  if (!cache_dir.empty()) opts.cache_dir = cache_dir;
  std::vector<Report> reports;
  try {
    reports = run_workspace(spec, job, opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "tate-encode: " << e.what() << "\n";
    return 2;
  }
  std::cout << serialize_report(reports, format == "structured" ? Format::structured : Format::human);
  for (const auto& r : reports)
    if (!r.ok) {
      std::cerr << r.error << "\n";
      return 1;
    }
  return 0;
}

int selftest() {
  bool all = true;
  tate::cli::run_acceptance([&](const tate::cli::CriterionResult& r) {
    std::cout << "criterion " << r.id << ": " << (r.passed ? "PASS" : "FAIL") << "  " << r.title << "\n";
    for (const auto& f : r.failures) std::cout << "    " << f << "\n";
    std::cout.flush();
    all = all && r.passed;
  });
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tate cohomology and encoding-pair verification"};
  app.require_subcommand(1);

  std::string file, format = "human", cache_dir;
  std::optional<std::string> job;
  std::size_t budget = 10000;
  auto* run = app.add_subcommand("run", "Run the jobs of a workspace file");
  run->add_option("workspace-file", file, "Workspace file")->required();
  run->add_option("--job", job, "Run only this job");
  run->add_option("--format", format, "human or structured")->check(CLI::IsMember({"human", "structured"}));
  run->add_option("--cache-dir", cache_dir, "Directory for cached reports");
  run->add_option("--budget", budget, "Search budget (class pairs)")->check(CLI::PositiveNumber);
  auto* st = app.add_subcommand("selftest", "Run the acceptance criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*st) return selftest();
  return run_file(file, job, format, cache_dir, budget);
}
