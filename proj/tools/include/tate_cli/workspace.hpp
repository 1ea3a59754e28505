#pragma once

#include "tate/module.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tate::cli {

struct Position {
  std::size_t line = 1, column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(Position pos, const std::string& msg)
      : std::runtime_error("line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column) + ": " + msg),
        pos(pos) {}
  Position pos;
};

struct Value;
struct Call;

struct Range {
  long long lo = 0, hi = 0;
  bool operator==(const Range&) const = default;
};

struct Arg;

struct Call {
  std::string head;
  std::vector<Arg> args;
  Position pos;
  bool operator==(const Call& o) const;
};

struct Ident {
  std::string name;
  bool operator==(const Ident&) const = default;
};

struct Value {
  std::variant<long long, Range, Ident, Call, std::vector<Value>> v;
  Position pos;
  bool operator==(const Value& o) const { return v == o.v; }
};

struct Arg {
  std::string key;  // empty for positional
  Value value;
  bool operator==(const Arg& o) const { return key == o.key && value == o.value; }
};

inline bool Call::operator==(const Call& o) const { return head == o.head && args == o.args; }

enum class DefKind { group, module, job };

struct Definition {
  DefKind kind;
  std::string name;
  Call expr;
  Position pos;
  bool operator==(const Definition& o) const { return kind == o.kind && name == o.name && expr == o.expr; }
};

struct GroupRecord {
  GroupPtr group;
  std::optional<SubgroupEmbedding> embedding;  // for subgroup(...) / sylow(...)
};

struct JobSpec {
  std::string name;
  std::string command;
  Call call;
  std::map<std::string, ModulePtr> modules;  // resolved M / X / X' arguments
  GroupPtr group;                            // G=, or the modules' group
};

// Parsed and resolved workspace. Definitions keep source order.
struct WorkspaceSpec {
  std::vector<Definition> definitions;
  std::map<std::string, GroupRecord> groups;
  std::map<std::string, ModulePtr> modules;
  std::vector<JobSpec> jobs;

  const Definition* find(DefKind kind, const std::string& name) const;
};

inline const std::vector<std::string>& job_commands() {
  static const std::vector<std::string> c = {"cohomology",  "verify-encoding", "find-encoding", "equivalence", "duality",
                                             "resolution", "endo-ring",       "criterion",     "selftest"};
  return c;
}

// Syntax only.
std::vector<Definition> parse_definitions(const std::string& text);
// Syntax plus name resolution and construction of groups and modules.
WorkspaceSpec parse_workspace(const std::string& text);
// Canonical text; parse_workspace(serialize_workspace(s)) has the same definitions.
std::string serialize_workspace(const WorkspaceSpec& spec);
std::string serialize_call(const Call& c);
std::string serialize_value(const Value& v);

}  // namespace tate::cli
