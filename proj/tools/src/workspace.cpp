#include "tate_cli/workspace.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace tate::cli {

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { ident, integer, sym, end };

struct Token {
  Tok kind;
  std::string text;
  long long number = 0;
  Position pos;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  Position p;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++p.line;
        p.column = 1;
      } else {
        ++p.column;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::sym, {}, 0, p};
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Tok::integer;
      t.text = s.substr(i, j - i);
      try {
        t.number = std::stoll(t.text);
      } catch (const std::out_of_range&) {
        throw ParseError(p, "integer literal out of range: " + t.text);
      }
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i + 1;
      while (j < s.size()) {
        const char d = s[j];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') ++j;
        else if (d == '-' && j + 1 < s.size() && std::isalpha(static_cast<unsigned char>(s[j + 1]))) ++j;
        else break;
      }
      t.kind = Tok::ident;
      t.text = s.substr(i, j - i);
      advance(j - i);
    } else if (c == '.' && i + 1 < s.size() && s[i + 1] == '.') {
      t.text = "..";
      advance(2);
    } else if (std::string("()[],=;/^").find(c) != std::string::npos) {
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(p, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  out.push_back({Tok::end, "", 0, p});
  return out;
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  std::vector<Definition> definitions() {
    std::vector<Definition> out;
    while (peek().kind != Tok::end) out.push_back(definition());
    return out;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
  const Token& next() { return t_[std::min(i_++, t_.size() - 1)]; }
  bool is_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::sym && peek(k).text == s; }
  void expect_sym(const char* s) {
    if (!is_sym(s)) throw ParseError(peek().pos, std::string("expected '") + s + "', found " + describe(peek()));
    next();
  }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::end) return "end of input";
    return "'" + t.text + "'";
  }

  Definition definition() {
    const Token& kw = next();
    Definition d;
    d.pos = kw.pos;
    if (kw.kind != Tok::ident || (kw.text != "group" && kw.text != "module" && kw.text != "job"))
      throw ParseError(kw.pos, "expected 'group', 'module' or 'job', found " + describe(kw));
    d.kind = kw.text == "group" ? DefKind::group : (kw.text == "module" ? DefKind::module : DefKind::job);
    const Token& name = next();
    if (name.kind != Tok::ident) throw ParseError(name.pos, "expected a name, found " + describe(name));
    d.name = name.text;
    expect_sym("=");
    d.expr = call();
    expect_sym(";");
    return d;
  }

  Call call() {
    const Token& h = next();
    if (h.kind != Tok::ident) throw ParseError(h.pos, "expected an expression, found " + describe(h));
    Call c;
    c.pos = h.pos;
    c.head = h.text;
    if ((is_sym("/") || is_sym("^")) && peek(1).kind == Tok::integer) {
      c.head += next().text;
      c.head += next().text;
    }
    expect_sym("(");
    if (!is_sym(")")) {
      for (;;) {
        c.args.push_back(arg());
        if (is_sym(",")) {
          next();
          continue;
        }
        break;
      }
    }
    expect_sym(")");
    return c;
  }

  Arg arg() {
    Arg a;
    if (peek().kind == Tok::ident && is_sym("=", 1)) {
      a.key = next().text;
      next();
    }
    a.value = value();
    return a;
  }

  Value value() {
    const Token& t = peek();
    Value v;
    v.pos = t.pos;
    if (t.kind == Tok::integer) {
      next();
      if (is_sym("..")) {
        next();
        const Token& hi = next();
        if (hi.kind != Tok::integer) throw ParseError(hi.pos, "expected the end of a range, found " + describe(hi));
        v.v = Range{t.number, hi.number};
      } else {
        v.v = t.number;
      }
      return v;
    }
    if (t.kind == Tok::ident) {
      const bool is_call = is_sym("(", 1) || ((is_sym("/", 1) || is_sym("^", 1)) && peek(2).kind == Tok::integer);
      if (is_call) {
        v.v = call();
      } else {
        next();
        v.v = Ident{t.text};
      }
      return v;
    }
    if (is_sym("[")) {
      next();
      std::vector<Value> items;
      if (!is_sym("]")) {
        for (;;) {
          items.push_back(value());
          if (is_sym(",")) {
            next();
            continue;
          }
          break;
        }
      }
      if (!is_sym("]")) throw ParseError(peek().pos, "malformed matrix block: expected ',' or ']', found " + describe(peek()));
      next();
      v.v = std::move(items);
      return v;
    }
    throw ParseError(t.pos, "expected a value, found " + describe(t));
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------- resolution

struct Shape {
  std::size_t positional;
  std::set<std::string> keys;
};

void check_shape(const Call& c, const Shape& s) {
  std::size_t pos = 0;
  std::set<std::string> seen;
  for (const auto& a : c.args) {
    if (a.key.empty()) {
      if (!seen.empty()) throw ParseError(a.value.pos, "positional argument after keyword arguments in " + c.head);
      ++pos;
    } else {
      if (!s.keys.count(a.key)) throw ParseError(a.value.pos, c.head + " has no parameter '" + a.key + "'");
      if (!seen.insert(a.key).second) throw ParseError(a.value.pos, "repeated parameter '" + a.key + "'");
    }
  }
  if (pos != s.positional)
    throw ParseError(c.pos, "arity error: " + c.head + " takes " + std::to_string(s.positional) +
                                " positional argument(s), got " + std::to_string(pos));
}

const Value& positional(const Call& c, std::size_t k) {
  std::size_t i = 0;
  for (const auto& a : c.args)
    if (a.key.empty() && i++ == k) return a.value;
  throw ParseError(c.pos, "missing argument");
}

const Value* keyword(const Call& c, const std::string& key) {
  for (const auto& a : c.args)
    if (a.key == key) return &a.value;
  return nullptr;
}

long long as_int(const Value& v, const std::string& what) {
  if (auto p = std::get_if<long long>(&v.v)) return *p;
  throw ParseError(v.pos, what + " must be an integer");
}

std::size_t as_count(const Value& v, const std::string& what, long long lo = 0) {
  long long x = as_int(v, what);
  if (x < lo) throw ParseError(v.pos, what + " must be at least " + std::to_string(lo));
  return static_cast<std::size_t>(x);
}

const std::vector<Value>& as_list(const Value& v, const std::string& what) {
  if (auto p = std::get_if<std::vector<Value>>(&v.v)) return *p;
  throw ParseError(v.pos, "malformed matrix block: " + what + " must be a list");
}

std::vector<long long> int_list(const Value& v, const std::string& what) {
  std::vector<long long> out;
  for (const auto& x : as_list(v, what)) out.push_back(as_int(x, what + " entry"));
  return out;
}

std::vector<std::vector<long long>> int_matrix(const Value& v, const std::string& what, std::size_t rows,
                                               std::size_t cols) {
  const auto& rs = as_list(v, what);
  if (rows != static_cast<std::size_t>(-1) && rs.size() != rows)
    throw ParseError(v.pos, "malformed matrix block: " + what + " needs " + std::to_string(rows) + " rows, got " +
                                std::to_string(rs.size()));
  std::vector<std::vector<long long>> out;
  for (const auto& r : rs) {
    auto row = int_list(r, what + " row");
    if (cols != static_cast<std::size_t>(-1) && row.size() != cols)
      throw ParseError(r.pos, "malformed matrix block: " + what + " rows need " + std::to_string(cols) +
                                  " entries, got " + std::to_string(row.size()));
    out.push_back(std::move(row));
  }
  return out;
}

IntMatrix to_matrix(const std::vector<std::vector<long long>>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = Integer(rows[r][c]);
  return m;
}

class Resolver {
 public:
  explicit Resolver(WorkspaceSpec& s) : s_(s) {
    for (const auto& d : s.definitions) {
      auto& table = d.kind == DefKind::group ? groups_ : (d.kind == DefKind::module ? modules_ : jobs_);
      if (table.count(d.name) || (d.kind != DefKind::job && (groups_.count(d.name) + modules_.count(d.name))))
        throw ParseError(d.pos, "duplicate name '" + d.name + "'");
      table[d.name] = &d;
    }
  }

  void run() {
    for (const auto& d : s_.definitions) {
      if (d.kind == DefKind::group) group_by_name(d.name, d.pos);
      else if (d.kind == DefKind::module) module_by_name(d.name, d.pos);
    }
    for (const auto& d : s_.definitions)
      if (d.kind == DefKind::job) job(d);
  }

 private:
  const GroupRecord& group_by_name(const std::string& name, Position at) {
    if (auto it = s_.groups.find(name); it != s_.groups.end()) return it->second;
    auto d = groups_.find(name);
    if (d == groups_.end()) throw ParseError(at, "unknown identifier '" + name + "' (expected a group)");
    if (!visiting_.insert(name).second) throw ParseError(at, "cyclic definition involving '" + name + "'");
    GroupRecord rec = build_group(d->second->expr);
    visiting_.erase(name);
    return s_.groups[name] = rec;
  }

  ModulePtr module_by_name(const std::string& name, Position at) {
    if (auto it = s_.modules.find(name); it != s_.modules.end()) return it->second;
    auto d = modules_.find(name);
    if (d == modules_.end()) throw ParseError(at, "unknown identifier '" + name + "' (expected a module)");
    if (!visiting_.insert(name).second) throw ParseError(at, "cyclic definition involving '" + name + "'");
    ModulePtr m = build_module(d->second->expr);
    visiting_.erase(name);
    auto named = std::make_shared<GModule>(*m);
    named->name = name;
    return s_.modules[name] = named;
  }

  GroupRecord group_value(const Value& v) {
    if (auto id = std::get_if<Ident>(&v.v)) return group_by_name(id->name, v.pos);
    if (auto c = std::get_if<Call>(&v.v)) return build_group(*c);
    throw ParseError(v.pos, "expected a group");
  }

  ModulePtr module_value(const Value& v) {
    if (auto id = std::get_if<Ident>(&v.v)) return module_by_name(id->name, v.pos);
    if (auto c = std::get_if<Call>(&v.v)) return build_module(*c);
    throw ParseError(v.pos, "expected a module");
  }

  template <class F>
  auto guarded(const Call& c, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(c.pos, c.head + ": " + e.what());
    }
  }

  GroupRecord build_group(const Call& c) {
    const std::string& h = c.head;
    if (h == "cyclic") {
      check_shape(c, {1, {}});
      auto n = as_count(positional(c, 0), "order", 1);
      return guarded(c, [&] { return GroupRecord{make_group(FiniteGroup::cyclic(n)), std::nullopt}; });
    }
    if (h == "perms") {
      check_shape(c, {1, {}});
      auto rows = int_matrix(positional(c, 0), "permutation list", static_cast<std::size_t>(-1), static_cast<std::size_t>(-1));
      std::vector<std::vector<std::size_t>> gens;
      for (const auto& r : rows) {
        std::vector<std::size_t> img;
        for (auto x : r) {
          if (x < 1) throw ParseError(c.pos, "permutation images are 1-based");
          img.push_back(static_cast<std::size_t>(x - 1));
        }
        gens.push_back(std::move(img));
      }
      return guarded(c, [&] { return GroupRecord{make_group(FiniteGroup::from_permutations(gens)), std::nullopt}; });
    }
    if (h == "table") {
      check_shape(c, {1, {}});
      auto rows = int_matrix(positional(c, 0), "multiplication table", static_cast<std::size_t>(-1), static_cast<std::size_t>(-1));
      std::vector<std::vector<std::size_t>> t;
      for (const auto& r : rows) {
        std::vector<std::size_t> row;
        for (auto x : r) {
          if (x < 0) throw ParseError(c.pos, "table entries are element indices");
          row.push_back(static_cast<std::size_t>(x));
        }
        t.push_back(std::move(row));
      }
      return guarded(c, [&] { return GroupRecord{make_group(FiniteGroup::from_table(t)), std::nullopt}; });
    }
    if (h == "product") {
      check_shape(c, {2, {}});
      auto a = group_value(positional(c, 0)).group, b = group_value(positional(c, 1)).group;
      return guarded(c, [&] { return GroupRecord{make_group(FiniteGroup::direct_product(*a, *b)), std::nullopt}; });
    }
    if (h == "subgroup") {
      check_shape(c, {2, {}});
      auto g = group_value(positional(c, 0)).group;
      std::vector<FiniteGroup::Index> els;
      for (auto x : int_list(positional(c, 1), "element list")) {
        if (x < 0 || static_cast<std::size_t>(x) >= g->order()) throw ParseError(c.pos, "element index out of range");
        els.push_back(static_cast<FiniteGroup::Index>(x));
      }
      return guarded(c, [&] {
        auto emb = subgroup_closure(g, els);
        return GroupRecord{emb.subgroup, emb};
      });
    }
    if (h == "sylow") {
      check_shape(c, {2, {}});
      auto g = group_value(positional(c, 0)).group;
      auto p = as_count(positional(c, 1), "prime", 2);
      return guarded(c, [&] {
        auto emb = sylow_subgroup(g, p);
        return GroupRecord{emb.subgroup, emb};
      });
    }
    throw ParseError(c.pos, "unknown identifier '" + h + "' (expected a group constructor)");
  }

  ModulePtr build_module(const Call& c) {
    const std::string& h = c.head;
    if (h == "Z" || h.rfind("Z/", 0) == 0 || h.rfind("Z^", 0) == 0) {
      check_shape(c, {1, {}});
      auto g = group_value(positional(c, 0)).group;
      if (h == "Z") return trivial_module(g, 1);
      long long k = std::stoll(h.substr(2));
      if (h[1] == '/') {
        if (k < 1) throw ParseError(c.pos, "modulus must be positive");
        return trivial_module(g, 0, {Integer(k)});
      }
      if (k < 0) throw ParseError(c.pos, "rank must be nonnegative");
      return trivial_module(g, static_cast<std::size_t>(k));
    }
    if (h == "trivial") {
      check_shape(c, {1, {"rank", "torsion"}});
      auto g = group_value(positional(c, 0)).group;
      std::vector<Integer> tors;
      if (auto t = keyword(c, "torsion"))
        for (auto x : int_list(*t, "torsion")) {
          if (x < 1) throw ParseError(t->pos, "torsion orders must be positive");
          tors.emplace_back(x);
        }
      std::size_t rank = tors.empty() ? 1 : 0;
      if (auto r = keyword(c, "rank")) rank = as_count(*r, "rank");
      return trivial_module(g, rank, tors);
    }
    if (h == "ZG" || h == "IG") {
      check_shape(c, {1, {}});
      auto g = group_value(positional(c, 0)).group;
      return h == "ZG" ? regular_module(g) : augmentation_ideal(g);
    }
    if (h == "hom" || h == "tensor" || h == "sum") {
      check_shape(c, {2, {}});
      auto a = module_value(positional(c, 0)), b = module_value(positional(c, 1));
      return guarded(c, [&] {
        if (h == "hom") return hom_module(a, b);
        if (h == "tensor") return tensor_module(a, b);
        return direct_sum(a, b);
      });
    }
    if (h == "tpow") {
      check_shape(c, {2, {}});
      auto a = module_value(positional(c, 0));
      auto k = as_count(positional(c, 1), "power");
      return guarded(c, [&] { return tensor_power(a, k); });
    }
    if (h == "dual") {
      check_shape(c, {1, {}});
      auto a = module_value(positional(c, 0));
      return guarded(c, [&] { return dual_module(a); });
    }
    if (h == "res") {
      check_shape(c, {2, {}});
      auto sub = group_value(positional(c, 0));
      if (!sub.embedding) throw ParseError(positional(c, 0).pos, "res needs a group defined by subgroup(...) or sylow(...)");
      auto a = module_value(positional(c, 1));
      if (a->group != sub.embedding->parent && a->group->digest() != sub.embedding->parent->digest())
        throw ParseError(positional(c, 1).pos, "res: module is not over the parent group");
      return guarded(c, [&] { return restrict_module(a, *sub.embedding); });
    }
    if (h == "explicit") {
      check_shape(c, {1, {"rank", "action", "relations"}});
      auto g = group_value(positional(c, 0)).group;
      const Value* rv = keyword(c, "rank");
      const Value* av = keyword(c, "action");
      if (!rv || !av) throw ParseError(c.pos, "explicit needs rank= and action=");
      const std::size_t n = as_count(*rv, "rank");
      const auto& mats = as_list(*av, "action");
      if (mats.size() != g->generators().size())
        throw ParseError(av->pos, "malformed matrix block: action needs one matrix per generator (" +
                                      std::to_string(g->generators().size()) + "), got " + std::to_string(mats.size()));
      std::vector<IntMatrix> gens;
      for (const auto& m : mats) gens.push_back(to_matrix(int_matrix(m, "action matrix", n, n), n));
      IntMatrix rel(n, 0);
      if (auto relv = keyword(c, "relations")) {
        auto rows = int_matrix(*relv, "relations", static_cast<std::size_t>(-1), n);
        rel = to_matrix(rows, n).transpose();
      }
      return guarded(c, [&] {
        auto m = make_module(g, n, rel, gens, "explicit");
        check_invariants(*m);
        return m;
      });
    }
    throw ParseError(c.pos, "unknown identifier '" + h + "' (expected a module constructor)");
  }

  // Module-valued job arguments may also be the bare names Z, ZG, IG, taken
  // over the job's G=, the other module's group, or the only group defined.
  ModulePtr job_module(const Value& v, const GroupPtr& hint) {
    if (auto id = std::get_if<Ident>(&v.v); id && !s_.modules.count(id->name) && !modules_.count(id->name) &&
                                             (id->name == "Z" || id->name == "ZG" || id->name == "IG")) {
      GroupPtr g = hint;
      if (!g && s_.groups.size() == 1) g = s_.groups.begin()->second.group;
      if (!g) throw ParseError(v.pos, "cannot tell which group '" + id->name + "' is over; add G=");
      if (id->name == "Z") return trivial_module(g, 1);
      return id->name == "ZG" ? regular_module(g) : augmentation_ideal(g);
    }
    return module_value(v);
  }

  void job(const Definition& d) {
    const Call& c = d.expr;
    const auto& cmds = job_commands();
    if (std::find(cmds.begin(), cmds.end(), c.head) == cmds.end())
      throw ParseError(c.pos, "unknown identifier '" + c.head + "' (expected a job command)");
    static const std::map<std::string, std::set<std::string>> keys = {
        {"cohomology", {"G", "M", "degree", "degrees", "cross_check"}},
        {"verify-encoding", {"G", "X", "X'", "r", "elements", "g0"}},
        {"find-encoding", {"G", "X", "X'", "r", "budget"}},
        {"equivalence", {"G", "X", "X'", "budget"}},
        {"duality", {"G", "X", "degree", "degrees"}},
        {"resolution", {"G", "r"}},
        {"endo-ring", {"G", "X", "budget"}},
        {"criterion", {"G", "X", "r"}},
        {"selftest", {}},
    };
    check_shape(c, {0, keys.at(c.head)});
    JobSpec js{d.name, c.head, c, {}, nullptr};
    if (auto gv = keyword(c, "G")) js.group = group_value(*gv).group;
    // Named or inline modules first so bare names can borrow their group.
    GroupPtr hint = js.group;
    for (const auto& a : c.args)
      if ((a.key == "M" || a.key == "X" || a.key == "X'") && !std::holds_alternative<Ident>(a.value.v)) {
        js.modules[a.key] = module_value(a.value);
        if (!hint) hint = js.modules[a.key]->group;
      }
    for (const auto& a : c.args)
      if ((a.key == "M" || a.key == "X" || a.key == "X'") && std::holds_alternative<Ident>(a.value.v)) {
        const auto& nm = std::get<Ident>(a.value.v).name;
        if (s_.modules.count(nm) || modules_.count(nm)) {
          js.modules[a.key] = module_value(a.value);
          if (!hint) hint = js.modules[a.key]->group;
        }
      }
    for (const auto& a : c.args)
      if ((a.key == "M" || a.key == "X" || a.key == "X'") && !js.modules.count(a.key))
        js.modules[a.key] = job_module(a.value, hint);
    for (const auto& [k, m] : js.modules)
      if (js.group && m->group->digest() != js.group->digest())
        throw ParseError(c.pos, "module " + k + " is not over G");
    if (!js.group && !js.modules.empty()) js.group = js.modules.begin()->second->group;
    s_.jobs.push_back(std::move(js));
  }

  WorkspaceSpec& s_;
  std::map<std::string, const Definition*> groups_, modules_, jobs_;
  std::set<std::string> visiting_;
};

const char* kind_word(DefKind k) {
  switch (k) {
    case DefKind::group: return "group";
    case DefKind::module: return "module";
    case DefKind::job: return "job";
  }
  return "";
}

}  // namespace

const Definition* WorkspaceSpec::find(DefKind kind, const std::string& name) const {
  for (const auto& d : definitions)
    if (d.kind == kind && d.name == name) return &d;
  return nullptr;
}

std::vector<Definition> parse_definitions(const std::string& text) { return Parser(lex(text)).definitions(); }

WorkspaceSpec parse_workspace(const std::string& text) {
  WorkspaceSpec spec;
  spec.definitions = parse_definitions(text);
  Resolver(spec).run();
  return spec;
}

std::string serialize_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, long long>) return std::to_string(x);
        else if constexpr (std::is_same_v<T, Range>) return std::to_string(x.lo) + ".." + std::to_string(x.hi);
        else if constexpr (std::is_same_v<T, Ident>) return x.name;
        else if constexpr (std::is_same_v<T, Call>) return serialize_call(x);
        else {
          std::string s = "[";
          for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + serialize_value(x[i]);
          return s + "]";
        }
      },
      v.v);
}

std::string serialize_call(const Call& c) {
  std::string s = c.head + "(";
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    if (i) s += ", ";
    if (!c.args[i].key.empty()) s += c.args[i].key + "=";
    s += serialize_value(c.args[i].value);
  }
  return s + ")";
}

std::string serialize_workspace(const WorkspaceSpec& spec) {
  std::ostringstream os;
  for (const auto& d : spec.definitions) os << kind_word(d.kind) << " " << d.name << " = " << serialize_call(d.expr) << ";\n";
  return os.str();
}

}  // namespace tate::cli
