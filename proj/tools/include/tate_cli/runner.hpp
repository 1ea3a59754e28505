#pragma once

#include "tate_cli/workspace.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace tate::cli {

std::string engine_version();

struct RunOptions {
  std::size_t budget = 10000;
  std::optional<std::filesystem::path> cache_dir;
};

struct Timing {
  double milliseconds = 0;
  bool cache_hit = false;
};

struct Report {
  std::string job;      // job name
  std::string command;  // job command
  std::string call;     // canonical text of the job expression
  std::string engine;
  std::string input_digest;
  bool ok = true;
  std::string error;      // set when !ok
  nlohmann::json result;  // payload; may be partial when !ok
  Timing timing;

  // Everything except timing.
  nlohmann::json content() const;
  nlohmann::json to_json() const;
  static Report from_json(const nlohmann::json& j);
  bool same_content(const Report& o) const { return content() == o.content(); }
};

// Content digest (SHA-256 hex) of engine version, group tables, module
// presentations and job parameters.
std::string input_digest(const JobSpec& job, const RunOptions& opts);

Report run_command(const WorkspaceSpec& spec, const JobSpec& job, const RunOptions& opts = {});
std::vector<Report> run_workspace(const WorkspaceSpec& spec, const std::optional<std::string>& only,
                                  const RunOptions& opts = {});

enum class Format { human, structured };
std::string serialize_report(const std::vector<Report>& reports, Format f);
std::vector<Report> parse_structured(const std::string& text);

// "0", "Z", "Z/4", "Z^2 + Z/2 + Z/6"
std::string render_group(const AbelianGroupData& a);

}  // namespace tate::cli
