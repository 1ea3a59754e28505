#include "doctest.h"
#include "tate_cli/runner.hpp"

#include <filesystem>

#include <unistd.h>

using namespace tate;
using namespace tate::cli;

namespace {

ParseError parse_error(const std::string& text) {
  try {
    parse_workspace(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no parse error for: " << text);
  return ParseError({}, "");
}

std::size_t depth(const Call& c) {
  std::size_t d = 0;
  for (const auto& a : c.args)
    if (auto inner = std::get_if<Call>(&a.value.v)) d = std::max(d, depth(*inner));
  return d + 1;
}

Report only(const std::vector<Report>& rs) {
  REQUIRE(rs.size() == 1);
  return rs.front();
}

}  // namespace

TEST_CASE("workspace: groups, modules and nested expressions") {
  auto s = parse_workspace("group G = cyclic(4); module X = IG(G);");
  CHECK(s.groups.size() == 1);
  CHECK(s.modules.size() == 1);
  CHECK(s.groups.at("G").group->order() == 4);
  CHECK(s.modules.at("X")->rank == 3);

  auto t = parse_workspace("group G = cyclic(3);\nmodule Y = hom(tpow(IG(G),2), Z(G));");
  const auto* y = t.find(DefKind::module, "Y");
  REQUIRE(y);
  CHECK(depth(y->expr) == 3);
  CHECK(t.modules.at("Y")->rank == 4);

  auto u = parse_workspace("group G = cyclic(2);\nmodule Z2 = trivial(G, torsion=[2]);");
  const auto& z2 = *u.modules.at("Z2");
  CHECK(z2.rank == 1);
  CHECK_FALSE(z2.zfree());
  CHECK(z2.underlying_group().torsion == std::vector<Integer>{Integer(2)});
}

TEST_CASE("workspace: group constructors") {
  auto s = parse_workspace(R"(
    group S3 = perms([[2, 1, 3], [2, 3, 1]]);   # 1-based images
    group V = product(cyclic(2), cyclic(2));
    group T = table([[0, 1], [1, 0]]);
    group P3 = sylow(S3, 3);
    group H = subgroup(cyclic(6), [2]);
    module R = res(P3, IG(S3));
    module E = explicit(T, rank=1, action=[[[-1]]]);
    module Q = explicit(T, rank=2, action=[[[0, 1], [1, 0]]], relations=[[1, -1]]);
  )");
  CHECK(s.groups.at("S3").group->order() == 6);
  CHECK_FALSE(s.groups.at("S3").group->is_abelian());
  CHECK(s.groups.at("V").group->exponent() == 2);
  CHECK(s.groups.at("T").group->order() == 2);
  CHECK(s.groups.at("P3").group->order() == 3);
  CHECK(s.groups.at("H").group->order() == 3);
  CHECK(s.modules.at("R")->rank == 5);
  CHECK(s.modules.at("R")->group->order() == 3);
  CHECK(s.modules.at("Q")->underlying_group().free_rank == 1);
}

TEST_CASE("workspace: diagnostics carry positions") {
  auto e = parse_error("group G = cyclic(4);\nmodule X = IG(H);");
  CHECK(e.pos.line == 2);
  CHECK(e.pos.column == 15);
  CHECK(std::string(e.what()).find("unknown identifier 'H'") != std::string::npos);

  e = parse_error("group G = cyclic(4, 2);");
  CHECK(e.pos.line == 1);
  CHECK(std::string(e.what()).find("arity") != std::string::npos);

  e = parse_error("group G = cyclic(2);\nmodule X = explicit(G, rank=2, action=[[[0,1],[1]]]);");
  CHECK(e.pos.line == 2);
  CHECK(std::string(e.what()).find("malformed matrix block") != std::string::npos);

  e = parse_error("group G = cyclic(2);\nmodule X = explicit(G, rank=1, action=[[[1]], [[1]]]);");
  CHECK(std::string(e.what()).find("one matrix per generator") != std::string::npos);

  e = parse_error("group G = cyclic(2);\nmodule A = sum(B, Z(G));\nmodule B = dual(A);");
  CHECK(std::string(e.what()).find("cyclic definition") != std::string::npos);

  e = parse_error("group G = cyclic(2);\nmodule G = Z(G);");
  CHECK(std::string(e.what()).find("duplicate") != std::string::npos);

  e = parse_error("group G = cyclic(2)\nmodule X = Z(G);");
  CHECK(e.pos.line == 2);

  e = parse_error("group G = cyclic(2);\njob j = frobnicate(X=Z);");
  CHECK(std::string(e.what()).find("unknown identifier 'frobnicate'") != std::string::npos);

  e = parse_error("group G = cyclic(2);\nmodule X = explicit(G, rank=1, action=[[[2]]]);");
  CHECK(e.pos.line == 2);
}

TEST_CASE("workspace: serialization round trip") {
  const std::string text = R"(# comment
group G = cyclic(4);
group S3 = perms([[2,1,3],[2,3,1]]);
module X = IG(G);
module Y = hom(tpow(X, 2), Z(G));
module Z2 = trivial(G, torsion=[2]);
module E = explicit(G, rank=1, action=[[[-1]]]);
job coh = cohomology(M=Y, degrees=-2..2);
job v = verify-encoding(G=G, X=IG, X'=Z, r=1, elements=canonical);
job r = resolution(G=S3, r=2);
)";
  auto a = parse_workspace(text);
  auto b = parse_workspace(serialize_workspace(a));
  CHECK(a.definitions == b.definitions);
  CHECK(serialize_workspace(a) == serialize_workspace(b));
  REQUIRE(a.modules.size() == b.modules.size());
  for (const auto& [name, m] : a.modules) CHECK(m->key() == b.modules.at(name)->key());
  REQUIRE(a.jobs.size() == b.jobs.size());
  for (std::size_t k = 0; k < a.jobs.size(); ++k) CHECK(input_digest(a.jobs[k], {}) == input_digest(b.jobs[k], {}));
}

TEST_CASE("run: cyclic cohomology table") {
  auto s = parse_workspace("job c = cohomology(G=cyclic(4), M=Z, degrees=-2..2);");
  const auto& r = only(run_workspace(s, std::nullopt));
  REQUIRE(r.ok);
  std::vector<std::string> table;
  for (const auto& row : r.result["rows"]) table.push_back(row["group"]["notation"]);
  CHECK(table == std::vector<std::string>{"Z/4", "0", "Z/4", "0", "Z/4"});
}

TEST_CASE("run: certificates, verdicts and errors") {
  auto s = parse_workspace(R"(
    group G = cyclic(2);
    group C3 = cyclic(3);
    job v = verify-encoding(G=G, X=IG, X'=Z, r=1, elements=canonical);
    job f = find-encoding(G=C3, X=IG, X'=Z, r=1, budget=1);
    job e = equivalence(G=G, X=Z, X'=explicit(G, rank=1, action=[[[-1]]]));
    job t = criterion(X=trivial(G, torsion=[2]), r=0);
  )");
  auto rs = run_workspace(s, std::nullopt);
  REQUIRE(rs.size() == 4);
  const auto& cert = rs[0].result["certificate"];
  CHECK(rs[0].ok);
  CHECK(cert["valid"] == true);
  REQUIRE(cert["checks"].size() == 2);
  for (const auto& c : cert["checks"]) CHECK(c["residual"] == nlohmann::json::array({0}));

  CHECK_FALSE(rs[1].ok);
  CHECK(rs[1].error.find("job f (find-encoding)") == 0);
  CHECK(rs[1].result["searched"] == 1);

  CHECK(rs[2].ok);
  CHECK(rs[2].result["equivalent"] == false);
  CHECK(rs[2].result["exhausted"] == true);

  CHECK(rs[3].ok);
  CHECK(rs[3].result["encoding"] == false);
  CHECK(rs[3].result["reason"].get<std::string>().find("The Z-free condition is necessary.") != std::string::npos);
}

TEST_CASE("reports: rendering and structured round trip") {
  CHECK(serialize_report({}, Format::structured) == "{\n  \"reports\": []\n}\n");
  CHECK(parse_structured(serialize_report({}, Format::structured)).empty());

  AbelianGroupData a;
  a.torsion = {Integer(4)};
  CHECK(render_group(a) == "Z/4");
  a.free_rank = 2;
  CHECK(render_group(a) == "Z^2 + Z/4");
  CHECK(render_group(AbelianGroupData{}) == "0");

  auto s = parse_workspace("group G = cyclic(3);\njob d = duality(X=IG(G));\njob r = endo-ring(X=IG(G));");
  auto rs = run_workspace(s, std::nullopt);
  auto back = parse_structured(serialize_report(rs, Format::structured));
  REQUIRE(back.size() == rs.size());
  for (std::size_t k = 0; k < rs.size(); ++k) {
    CHECK(back[k].to_json() == rs[k].to_json());
    CHECK(back[k].same_content(rs[k]));
  }
  const auto human = serialize_report(rs, Format::human);
  CHECK(human.find("Ĥ^-i(G, X)") != std::string::npos);
  CHECK(human.find("Z/3") != std::string::npos);
}

TEST_CASE("cache: hits equal recomputation") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("tate-cache-test-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  RunOptions o;
  o.cache_dir = dir;
  auto s = parse_workspace(
      "group G = cyclic(4);\njob a = cohomology(M=IG(G), degrees=-1..2);\njob b = resolution(G=G, r=2);");
  auto first = run_workspace(s, std::nullopt, o);
  auto second = run_workspace(s, std::nullopt, o);
  auto fresh = run_workspace(s, std::nullopt);
  REQUIRE(first.size() == 2);
  for (std::size_t k = 0; k < first.size(); ++k) {
    CHECK_FALSE(first[k].timing.cache_hit);
    CHECK(second[k].timing.cache_hit);
    CHECK(second[k].same_content(fresh[k]));
    CHECK(first[k].same_content(fresh[k]));
  }
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    CHECK(e.path().extension() == ".json");
    ++files;
  }
  CHECK(files == 2);
  // A renamed job with the same parameters hits; a relabelled module does not.
  auto renamed = parse_workspace("group G = cyclic(4);\njob other = cohomology(M=IG(G), degrees=-1..2);");
  const auto& hit = only(run_workspace(renamed, std::nullopt, o));
  CHECK(hit.timing.cache_hit);
  CHECK(hit.job == "other");
  auto relabelled = parse_workspace("group G = cyclic(4);\nmodule I = IG(G);\njob a = cohomology(M=I, degrees=-1..2);");
  CHECK_FALSE(only(run_workspace(relabelled, std::nullopt, o)).timing.cache_hit);
  fs::remove_all(dir);
}
