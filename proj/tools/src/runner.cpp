#include "tate_cli/runner.hpp"

#include "tate/encoding.hpp"
#include "tate_cli/acceptance.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#ifndef TATE_ENGINE_VERSION
#define TATE_ENGINE_VERSION "0.0.0"
#endif

namespace tate::cli {

using nlohmann::json;

std::string engine_version() { return TATE_ENGINE_VERSION; }

namespace {

// ---------------------------------------------------------------- json helpers

json jint(const Integer& x) {
  if (x.fits_int64()) return x.to_int64();
  return x.to_string();
}

json jvec(const Vector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(jint(x));
  return a;
}

json jmat(const IntMatrix& m) {
  json a = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(jint(m(r, c)));
    a.push_back(std::move(row));
  }
  return a;
}

json jgroup(const AbelianGroupData& a) {
  json t = json::array();
  for (const auto& d : a.torsion) t.push_back(jint(d));
  return {{"free_rank", a.free_rank}, {"torsion", t}, {"notation", render_group(a)}};
}

const char* pipeline_name(Pipeline p) {
  switch (p) {
    case Pipeline::norm_fixed: return "norm-fixed";
    case Pipeline::norm_kernel: return "norm-kernel";
    case Pipeline::bar: return "bar";
    case Pipeline::shifted: return "shifted";
  }
  return "";
}

json jclass(TateContext& ctx, const CohomClass& x) { return {{"degree", x.degree}, {"coordinates", jvec(coordinates(ctx, x))}}; }

json jcertificate(TateContext& ctx, const EncodingCertificate& c) {
  json checks = json::array();
  for (const auto& k : c.checks)
    checks.push_back({{"identity", k.identity},
                      {"passed", k.passed},
                      {"product", jvec(k.product)},
                      {"expected", jvec(k.expected)},
                      {"residual", jvec(k.residual)}});
  return {{"valid", c.valid()},
          {"failure", c.failure()},
          {"r", c.r},
          {"x", jclass(ctx, c.x)},
          {"x'", jclass(ctx, c.x_prime)},
          {"checks", checks}};
}

// ---------------------------------------------------------------- job parameters

const Value* param(const JobSpec& j, const std::string& key) {
  for (const auto& a : j.call.args)
    if (a.key == key) return &a.value;
  return nullptr;
}

long long int_param(const JobSpec& j, const std::string& key, std::optional<long long> fallback = std::nullopt) {
  const Value* v = param(j, key);
  if (!v) {
    if (fallback) return *fallback;
    throw std::invalid_argument("missing parameter " + key + "=");
  }
  if (auto p = std::get_if<long long>(&v->v)) return *p;
  throw std::invalid_argument("parameter " + key + "= must be an integer");
}

std::string word_param(const JobSpec& j, const std::string& key, const std::string& fallback) {
  const Value* v = param(j, key);
  if (!v) return fallback;
  if (auto p = std::get_if<Ident>(&v->v)) return p->name;
  throw std::invalid_argument("parameter " + key + "= must be a word");
}

std::vector<int> degree_list(const JobSpec& j, int lo, int hi) {
  if (const Value* v = param(j, "degrees")) {
    if (auto r = std::get_if<Range>(&v->v)) {
      if (r->lo > r->hi) throw std::invalid_argument("empty degree range");
      lo = static_cast<int>(r->lo);
      hi = static_cast<int>(r->hi);
    } else if (auto l = std::get_if<std::vector<Value>>(&v->v)) {
      std::vector<int> out;
      for (const auto& x : *l) {
        auto p = std::get_if<long long>(&x.v);
        if (!p) throw std::invalid_argument("degrees= entries must be integers");
        out.push_back(static_cast<int>(*p));
      }
      return out;
    } else {
      throw std::invalid_argument("degrees= must be a range a..b or a list");
    }
  } else if (param(j, "degree")) {
    lo = hi = static_cast<int>(int_param(j, "degree"));
  }
  std::vector<int> out;
  for (int i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

const ModulePtr& module_param(const JobSpec& j, const std::string& key) {
  auto it = j.modules.find(key);
  if (it == j.modules.end()) throw std::invalid_argument("missing parameter " + key + "=");
  return it->second;
}

const GroupPtr& group_param(const JobSpec& j) {
  if (!j.group) throw std::invalid_argument("missing parameter G=");
  return j.group;
}

std::size_t budget_of(const JobSpec& j, const RunOptions& o) {
  long long b = int_param(j, "budget", static_cast<long long>(o.budget));
  if (b < 1) throw std::invalid_argument("budget must be positive");
  return static_cast<std::size_t>(b);
}

int degree_r(const JobSpec& j) { return static_cast<int>(int_param(j, "r", 1)); }

std::string module_label(const ModulePtr& m) { return m->name.empty() ? "(anonymous)" : m->name; }

// ---------------------------------------------------------------- jobs

// Marks a payload that ran to completion with a negative outcome.
struct JobFailure : std::runtime_error {
  JobFailure(const std::string& what, json partial) : std::runtime_error(what), partial(std::move(partial)) {}
  json partial;
};

json job_cohomology(const JobSpec& j) {
  const auto& m = module_param(j, "M");
  TateContext ctx;
  if (const Value* cc = param(j, "cross_check")) {
    auto p = std::get_if<Ident>(&cc->v);
    ctx.set_cross_check(p && p->name == "true");
  }
  json rows = json::array();
  for (int i : degree_list(j, -2, 2)) {
    auto h = ctx.cohomology(m, i);
    rows.push_back({{"degree", i}, {"group", jgroup(h->invariants)}, {"pipeline", pipeline_name(h->pipeline)}});
  }
  return {{"module", module_label(m)}, {"group_order", m->group->order()}, {"rows", rows}};
}

json job_verify(const JobSpec& j, const RunOptions& o) {
  const auto& x = module_param(j, "X");
  const auto& xp = module_param(j, "X'");
  const int r = degree_r(j);
  const std::string how = word_param(j, "elements", "canonical");
  TateContext ctx;
  json out{{"X", module_label(x)}, {"X'", module_label(xp)}, {"elements", how}};
  if (how == "search") {
    auto s = find_encoding_element(ctx, x, xp, r, budget_of(j, o));
    if (!s.certificate) throw JobFailure("no encoding element found (exhaustive search)", out);
    out["certificate"] = jcertificate(ctx, *s.certificate);
    return out;
  }
  if (how != "canonical" && how != "positive")
    throw std::invalid_argument("elements= must be canonical, positive or search");
  const auto& g = x->group;
  if (r != 1 || x->key() != ctx.augmentation(g)->key() || xp->key() != ctx.trivial_z(g)->key())
    throw std::invalid_argument("elements=" + how + " is defined for X = IG, X' = Z, r = 1");
  const long long g0 = int_param(j, "g0", 1);
  if (g0 < 1 || static_cast<std::size_t>(g0) >= g->order()) throw std::invalid_argument("g0 must index a non-identity element");
  auto [ex, exp] = canonical_augmentation_elements(ctx, g, static_cast<std::size_t>(g0));
  if (how == "positive") exp = scale(exp, Integer(-1));
  auto cert = verify_encoding_elements(ctx, ctx.augmentation(g), ctx.trivial_z(g), 1, ex, exp);
  out["certificate"] = jcertificate(ctx, cert);
  return out;
}

json job_find(const JobSpec& j, const RunOptions& o) {
  const auto& x = module_param(j, "X");
  const auto& xp = module_param(j, "X'");
  const int r = degree_r(j);
  const std::size_t budget = budget_of(j, o);
  TateContext ctx;
  json out{{"X", module_label(x)}, {"X'", module_label(xp)}, {"r", r}, {"budget", budget}};
  try {
    auto s = find_encoding_element(ctx, x, xp, r, budget);
    out["searched"] = s.searched;
    out["space"] = s.space;
    out["exhausted"] = s.exhausted;
    out["found"] = s.certificate.has_value();
    if (s.certificate) {
      out["certificate"] = jcertificate(ctx, *s.certificate);
      out["orbit_size"] = s.orbit_size;
      out["orbit_verifies"] = s.orbit_verifies;
    }
  } catch (const BudgetError& e) {
    out["searched"] = e.searched;
    out["exhausted"] = false;
    throw JobFailure(e.what(), out);
  }
  return out;
}

json job_equivalence(const JobSpec& j, const RunOptions& o) {
  const auto& x = module_param(j, "X");
  const auto& xp = module_param(j, "X'");
  const std::size_t budget = budget_of(j, o);
  TateContext ctx;
  json out{{"X", module_label(x)}, {"X'", module_label(xp)}, {"budget", budget}};
  try {
    auto e = cohomologically_equivalent(ctx, x, xp, budget);
    out["searched"] = e.searched;
    out["space"] = e.space;
    out["exhausted"] = e.exhausted;
    out["equivalent"] = e.witnesses.has_value();
    if (e.witnesses) out["witnesses"] = {{"phi", jclass(ctx, e.witnesses->first)}, {"phi'", jclass(ctx, e.witnesses->second)}};
  } catch (const BudgetError& e) {
    out["searched"] = e.searched;
    out["exhausted"] = false;
    throw JobFailure(e.what(), out);
  }
  return out;
}

json job_duality(const JobSpec& j) {
  const auto& x = module_param(j, "X");
  TateContext ctx;
  json rows = json::array();
  for (int i : degree_list(j, -1, 1)) {
    auto d = duality_pairing_matrix(ctx, x, i);
    rows.push_back({{"degree", i},
                    {"left", jgroup(d.left)},
                    {"right", jgroup(d.right)},
                    {"values", jmat(d.values)},
                    {"nondegenerate", d.nondegenerate}});
  }
  return {{"X", module_label(x)}, {"group_order", x->group->order()}, {"rows", rows}};
}

json job_resolution(const JobSpec& j) {
  const auto& g = group_param(j);
  const long long r = int_param(j, "r", 1);
  if (r < 1) throw std::invalid_argument("r must be at least 1");
  TateContext ctx;
  auto rep = encoding_resolution(ctx, g, static_cast<std::size_t>(r));
  json mods = json::array(), nodes = json::array(), proj = json::array();
  for (const auto& m : rep.modules) mods.push_back({{"name", m->name}, {"rank", m->rank}});
  for (const auto& n : rep.nodes)
    nodes.push_back({{"node", n.node}, {"exact", n.exact}, {"kernel_mod_image", jgroup(n.kernel_mod_image)}});
  for (const auto& p : rep.projective) proj.push_back({{"zero", p.zero}, {"route", p.route}});
  json out{{"group_order", g->order()}, {"r", r}, {"modules", mods}, {"nodes", nodes}, {"projective", proj},
           {"valid", rep.valid()}};
  if (!rep.valid()) throw JobFailure("resolution certificates failed", out);
  return out;
}

json job_endo(const JobSpec& j, const RunOptions& o) {
  const auto& x = module_param(j, "X");
  TateContext ctx;
  auto t = endo_ring_table(ctx, x, budget_of(j, o));
  json els = json::array();
  for (const auto& e : t.elements) els.push_back(jvec(e));
  return {{"X", module_label(x)},
          {"additive", jgroup(t.additive)},
          {"elements", els},
          {"add", t.add},
          {"mul", t.mul},
          {"one", t.one},
          {"units", t.units},
          {"generated_by_identity", t.generated_by_identity}};
}

json job_criterion(const JobSpec& j) {
  const auto& x = module_param(j, "X");
  const int r = degree_r(j);
  TateContext ctx;
  json out{{"X", module_label(x)}, {"r", r}};
  try {
    auto v = is_encoding_module(ctx, x, r);
    out["encoding"] = v.encoding;
    out["degree_r"] = jgroup(v.degree_r);
    out["endo"] = jgroup(v.endo);
    out["reason"] = v.reason;
  } catch (const EncodingError& e) {
    out["encoding"] = false;
    out["reason"] = e.what();
  }
  return out;
}

json job_selftest() {
  json rows = json::array();
  bool all = true;
  std::string failed;
  for (const auto& c : run_acceptance()) {
    rows.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"checks", c.checks}, {"failures", c.failures}});
    if (!c.passed) {
      all = false;
      failed += (failed.empty() ? "" : ", ") + std::to_string(c.id);
    }
  }
  json out{{"criteria", rows}, {"passed", all}};
  if (!all) throw JobFailure("acceptance criteria failed: " + failed, out);
  return out;
}

json dispatch(const JobSpec& j, const RunOptions& o) {
  const std::string& c = j.command;
  if (c == "cohomology") return job_cohomology(j);
  if (c == "verify-encoding") return job_verify(j, o);
  if (c == "find-encoding") return job_find(j, o);
  if (c == "equivalence") return job_equivalence(j, o);
  if (c == "duality") return job_duality(j);
  if (c == "resolution") return job_resolution(j);
  if (c == "endo-ring") return job_endo(j, o);
  if (c == "criterion") return job_criterion(j);
  if (c == "selftest") return job_selftest();
  throw std::invalid_argument("unknown job command " + c);
}

// ---------------------------------------------------------------- cache

std::string sha256_hex(const std::string& s) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(s.data(), s.size(), md, &len, EVP_sha256(), nullptr)) throw std::runtime_error("digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::optional<Report> cache_load(const std::filesystem::path& file, const std::string& digest) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  try {
    auto r = Report::from_json(json::parse(in));
    if (r.input_digest != digest || r.engine != engine_version()) return std::nullopt;
    r.timing.cache_hit = true;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable entry; recompute and overwrite
  }
}

void cache_store(const std::filesystem::path& dir, const std::filesystem::path& file, const Report& r) {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ostringstream tmpname;
  tmpname << file.filename().string() << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "."
          << counter++;
  const auto tmp = dir / tmpname.str();
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << r.content().dump(2) << "\n";
    if (!out) return;
  }
  std::filesystem::rename(tmp, file, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace

// ---------------------------------------------------------------- reports

json Report::content() const {
  return {{"job", {{"name", job}, {"command", command}, {"call", call}}},
          {"engine_version", engine},
          {"input_digest", input_digest},
          {"status", ok ? "ok" : "error"},
          {"error", error},
          {"result", result}};
}

json Report::to_json() const {
  json j = content();
  j["timing"] = {{"milliseconds", timing.milliseconds}, {"cache", timing.cache_hit ? "hit" : "miss"}};
  return j;
}

Report Report::from_json(const json& j) {
  Report r;
  r.job = j.at("job").at("name").get<std::string>();
  r.command = j.at("job").at("command").get<std::string>();
  r.call = j.at("job").at("call").get<std::string>();
  r.engine = j.at("engine_version").get<std::string>();
  r.input_digest = j.at("input_digest").get<std::string>();
  r.ok = j.at("status").get<std::string>() == "ok";
  r.error = j.at("error").get<std::string>();
  r.result = j.at("result");
  if (j.contains("timing")) {
    r.timing.milliseconds = j["timing"].at("milliseconds").get<double>();
    r.timing.cache_hit = j["timing"].at("cache").get<std::string>() == "hit";
  }
  return r;
}

std::string input_digest(const JobSpec& job, const RunOptions& opts) {
  std::ostringstream key;
  // The echo is part of the key: payloads carry argument labels.
  key << "engine " << engine_version() << "\ncall " << serialize_call(job.call) << "\nbudget " << opts.budget << "\n";
  if (job.group) key << "G " << job.group->digest() << "\n";
  std::map<std::string, std::string> args;
  for (const auto& a : job.call.args) {
    if (job.modules.count(a.key)) args[a.key] = job.modules.at(a.key)->key();
    else if (a.key == "G") args[a.key] = job.group->digest();
    else args[a.key] = serialize_value(a.value);
  }
  for (const auto& [k, v] : args) key << k << "=" << v << "\n";
  return sha256_hex(key.str());
}

Report run_command(const WorkspaceSpec&, const JobSpec& job, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.job = job.name;
  r.command = job.command;
  r.call = serialize_call(job.call);
  r.engine = engine_version();
  r.input_digest = input_digest(job, opts);

  const bool cacheable = opts.cache_dir && job.command != "selftest";
  std::filesystem::path file;
  if (cacheable) {
    file = *opts.cache_dir / (r.input_digest + ".json");
    if (auto hit = cache_load(file, r.input_digest)) {
      hit->job = r.job;  // job names are not part of the key
      hit->timing.milliseconds =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      return *hit;
    }
  }
  try {
    r.result = dispatch(job, opts);
  } catch (const JobFailure& e) {
    r.ok = false;
    r.error = "job " + job.name + " (" + job.command + "): " + e.what();
    r.result = e.partial;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = "job " + job.name + " (" + job.command + "): " + e.what();
    r.result = json::object();
  }
  r.timing.milliseconds = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (cacheable && r.ok) cache_store(*opts.cache_dir, file, r);
  return r;
}

std::vector<Report> run_workspace(const WorkspaceSpec& spec, const std::optional<std::string>& only,
                                  const RunOptions& opts) {
  std::vector<const JobSpec*> todo;
  for (const auto& j : spec.jobs)
    if (!only || j.name == *only) todo.push_back(&j);
  if (only && todo.empty()) throw std::invalid_argument("no job named " + *only);
  // Module keys are cached lazily; fill them before threads share the modules.
  for (const auto* j : todo)
    for (const auto& [k, m] : j->modules) (void)m->key();
  for (const auto& [k, m] : spec.modules) (void)m->key();

  std::vector<Report> out(todo.size());
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < todo.size(); start += width) {
    std::vector<std::future<Report>> batch;
    for (std::size_t k = start; k < std::min(todo.size(), start + width); ++k)
      batch.push_back(std::async(std::launch::async, [&, k] { return run_command(spec, *todo[k], opts); }));
    for (std::size_t k = 0; k < batch.size(); ++k) out[start + k] = batch[k].get();
  }
  return out;
}

// ---------------------------------------------------------------- rendering

std::string render_group(const AbelianGroupData& a) {
  std::vector<std::string> parts;
  if (a.free_rank == 1) parts.push_back("Z");
  else if (a.free_rank > 1) parts.push_back("Z^" + std::to_string(a.free_rank));
  for (const auto& d : a.torsion) parts.push_back("Z/" + d.to_string());
  if (parts.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " + " : "") + parts[i];
  return s;
}

namespace {

std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++w;
  return w;
}

std::string table(const std::vector<std::string>& head, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) w[c] = display_width(head[c]);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) w[c] = std::max(w[c], display_width(r[c]));
  auto line = [&](const std::vector<std::string>& r) {
    std::string s = "  ";
    for (std::size_t c = 0; c < r.size(); ++c) {
      s += r[c];
      if (c + 1 < r.size()) s += std::string(w[c] - display_width(r[c]) + 2, ' ');
    }
    return s + "\n";
  };
  std::string s = line(head);
  std::vector<std::string> rule;
  for (auto x : w) rule.push_back(std::string(x, '-'));
  s += line(rule);
  for (const auto& r : rows) s += line(r);
  return s;
}

std::string str(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string yes(const json& v) { return v.is_boolean() && v.get<bool>() ? "yes" : "no"; }

std::string render_certificate(const json& c) {
  std::ostringstream os;
  os << "  certificate: " << (c.at("valid").get<bool>() ? "PASS" : "FAIL") << "\n";
  os << "  x  = " << str(c.at("x").at("coordinates")) << " in Ĥ^" << c.at("x").at("degree") << "\n";
  os << "  x' = " << str(c.at("x'").at("coordinates")) << " in Ĥ^" << c.at("x'").at("degree") << "\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& k : c.at("checks"))
    rows.push_back({str(k.at("identity")), k.at("passed").get<bool>() ? "PASS" : "FAIL", str(k.at("product")),
                    str(k.at("expected")), str(k.at("residual"))});
  os << table({"identity", "result", "product", "expected", "residual"}, rows);
  return os.str();
}

std::string render_result(const Report& r) {
  const json& p = r.result;
  if (p.is_null() || p.empty()) return "";
  std::ostringstream os;
  const std::string& c = r.command;
  if (c == "cohomology" && p.contains("rows")) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& x : p["rows"])
      rows.push_back({std::to_string(x["degree"].get<int>()), str(x["group"]["notation"]), str(x["pipeline"])});
    os << table({"i", "Ĥ^i(G, " + str(p["module"]) + ")", "pipeline"}, rows);
  } else if (c == "duality" && p.contains("rows")) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& x : p["rows"]) {
      int i = x["degree"].get<int>();
      rows.push_back({std::to_string(i), str(x["left"]["notation"]), str(x["right"]["notation"]), str(x["values"]),
                      yes(x["nondegenerate"])});
    }
    os << table({"i", "Ĥ^i(G, Hom(X,Z))", "Ĥ^-i(G, X)", "pairing mod |G|", "nondegenerate"}, rows);
  } else if (c == "resolution") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& m : p.value("modules", json::array())) rows.push_back({str(m["name"]), str(m["rank"])});
    os << table({"term", "rank"}, rows);
    rows.clear();
    for (const auto& n : p.value("nodes", json::array()))
      rows.push_back({str(n["node"]), yes(n["exact"]), str(n["kernel_mod_image"]["notation"])});
    os << table({"node", "exact", "ker/im"}, rows);
    rows.clear();
    std::size_t k = p.value("modules", json::array()).size();
    std::size_t idx = k >= 2 ? k - 2 : 0;
    for (const auto& z : p.value("projective", json::array()))
      rows.push_back({"P_" + std::to_string(idx--), yes(z["zero"]), str(z["route"])});
    os << table({"interior", "cohomologically zero", "route"}, rows);
  } else if (c == "verify-encoding" || c == "find-encoding") {
    for (const char* k : {"searched", "space", "exhausted", "orbit_size", "orbit_verifies"})
      if (p.contains(k)) os << "  " << k << ": " << str(p[k]) << "\n";
    if (p.contains("certificate")) os << render_certificate(p["certificate"]);
  } else if (c == "equivalence") {
    for (const char* k : {"equivalent", "searched", "space", "exhausted"})
      if (p.contains(k)) os << "  " << k << ": " << str(p[k]) << "\n";
    if (p.contains("witnesses")) {
      os << "  phi  = " << str(p["witnesses"]["phi"]["coordinates"]) << "\n";
      os << "  phi' = " << str(p["witnesses"]["phi'"]["coordinates"]) << "\n";
    }
  } else if (c == "endo-ring") {
    os << "  Ĥ^0(G, Hom(X,X)) = " << str(p["additive"]["notation"]) << "\n";
    os << "  elements: " << p["elements"].size() << ", units: " << p["units"].size()
       << ", generated by [id]: " << yes(p["generated_by_identity"]) << "\n";
    std::vector<std::string> head{"*"};
    for (std::size_t k = 0; k < p["elements"].size(); ++k) head.push_back(str(p["elements"][k]));
    std::vector<std::vector<std::string>> rows;
    for (std::size_t a = 0; a < p["mul"].size(); ++a) {
      std::vector<std::string> row{str(p["elements"][a])};
      for (const auto& b : p["mul"][a]) row.push_back(str(p["elements"][b.get<std::size_t>()]));
      rows.push_back(row);
    }
    if (rows.size() <= 16) os << table(head, rows);
  } else if (c == "criterion") {
    os << "  encoding module: " << yes(p["encoding"]) << "\n";
    if (p.contains("degree_r")) {
      os << "  Ĥ^" << str(p["r"]) << "(G, X) = " << str(p["degree_r"]["notation"]) << "\n";
      os << "  Ĥ^0(G, Hom(X,X)) = " << str(p["endo"]["notation"]) << "\n";
    }
    if (p.contains("reason") && !p["reason"].get<std::string>().empty()) os << "  reason: " << str(p["reason"]) << "\n";
  } else if (c == "selftest") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& x : p.value("criteria", json::array()))
      rows.push_back({str(x["id"]), x["passed"].get<bool>() ? "PASS" : "FAIL", str(x["title"])});
    os << table({"#", "result", "criterion"}, rows);
    for (const auto& x : p.value("criteria", json::array()))
      for (const auto& f : x["failures"]) os << "  criterion " << str(x["id"]) << ": " << str(f) << "\n";
  } else {
    os << p.dump(2) << "\n";
  }
  return os.str();
}

}  // namespace

std::string serialize_report(const std::vector<Report>& reports, Format f) {
  if (f == Format::structured) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    return json{{"reports", arr}}.dump(2) + "\n";
  }
  std::ostringstream os;
  for (const auto& r : reports) {
    os << "== " << r.job << " [" << r.command << "] ==\n";
    os << "  call:   " << r.call << "\n";
    os << "  engine: " << r.engine << "  digest: " << r.input_digest.substr(0, 16) << "\n";
    os << "  status: " << (r.ok ? "ok" : "FAILED: " + r.error) << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f ms (cache %s)", r.timing.milliseconds, r.timing.cache_hit ? "hit" : "miss");
    os << "  timing: " << buf << "\n";
    os << render_result(r) << "\n";
  }
  return os.str();
}

std::vector<Report> parse_structured(const std::string& text) {
  std::vector<Report> out;
  const json doc = json::parse(text);
  for (const auto& j : doc.at("reports")) out.push_back(Report::from_json(j));
  return out;
}

}  // namespace tate::cli
