#include "doctest.h"
#include "tate/group.hpp"

using namespace tate;

namespace {

FiniteGroup s3() { return FiniteGroup::from_permutations({{1, 0, 2}, {1, 2, 0}}); }

void check_group_axioms(const FiniteGroup& g) {
  const std::size_t n = g.order();
  for (std::size_t a = 0; a < n; ++a) {
    CHECK(g.mul(a, g.inverse(a)) == 0);
    CHECK(g.mul(g.inverse(a), a) == 0);
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) REQUIRE(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
  }
}

}  // namespace

TEST_CASE("constructed groups satisfy the axioms") {
  check_group_axioms(FiniteGroup::cyclic(4));
  check_group_axioms(s3());
  check_group_axioms(FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)));
  check_group_axioms(FiniteGroup::from_permutations({{1, 2, 3, 0}, {3, 2, 1, 0}}));  // D4
  check_group_axioms(FiniteGroup::from_permutations({{1, 2, 0, 3}, {1, 0, 3, 2}}));  // A4 order 12
  CHECK(FiniteGroup::from_permutations({{1, 2, 0, 3}, {1, 0, 3, 2}}).order() == 12);
}

TEST_CASE("cyclic and symmetric groups") {
  auto c4 = FiniteGroup::cyclic(4);
  CHECK(c4.order() == 4);
  CHECK(c4.mul(3, 2) == 1);
  CHECK(c4.is_cyclic());
  auto g = s3();
  CHECK(g.order() == 6);
  CHECK_FALSE(g.is_abelian());
  CHECK(g.exponent() == 6);
  CHECK(g.label(0) == "e");
}

TEST_CASE("Klein four-group from a direct product") {
  auto v = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
  CHECK(v.order() == 4);
  CHECK(v.exponent() == 2);
  CHECK(v.is_abelian());
  CHECK_FALSE(v.is_cyclic());
  // brute-force closure of the generators is the whole group
  CHECK(subgroup_closure(make_group(v), v.generators()).subgroup->order() == 4);
}

TEST_CASE("table construction canonicalizes the identity and rejects bad tables") {
  // Z/3 with the identity stored at index 2
  FiniteGroup::Table t{{1, 2, 0}, {2, 0, 1}, {0, 1, 2}};
  auto g = FiniteGroup::from_table(t);
  CHECK(g.order() == 3);
  CHECK(g.mul(0, 1) == 1);
  CHECK_THROWS_AS(FiniteGroup::from_table({{0, 1}, {1, 1}}), GroupError);
  // Latin with identity but not associative (order 5 loop)
  FiniteGroup::Table loop{{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  CHECK_THROWS_WITH_AS(FiniteGroup::from_table(loop), doctest::Contains("associativity"), GroupError);
}

TEST_CASE("subgroup closure") {
  auto g = make_group(s3());
  std::size_t three_cycle = 0;
  for (std::size_t a = 0; a < g->order(); ++a)
    if (g->element_order(a) == 3) three_cycle = a;
  auto h = subgroup_closure(g, {three_cycle});
  CHECK(h.subgroup->order() == 3);
  CHECK(subgroup_closure(g, {0}).subgroup->order() == 1);
  auto c6 = make_group(FiniteGroup::cyclic(6));
  CHECK(subgroup_closure(c6, {2}).subgroup->order() == 3);
  // idempotent
  auto again = subgroup_closure(g, h.inclusion);
  CHECK(again.inclusion == h.inclusion);
  // inclusion is a homomorphism
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      CHECK(h.inclusion[h.subgroup->mul(a, b)] == g->mul(h.inclusion[a], h.inclusion[b]));
}

TEST_CASE("abelianization invariants") {
  CHECK(abelianization_invariants(s3()).torsion == std::vector<Integer>{2});
  CHECK(abelianization_invariants(FiniteGroup::cyclic(6)).torsion == std::vector<Integer>{6});
  auto v = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
  CHECK(abelianization_invariants(v).torsion == std::vector<Integer>{2, 2});
  CHECK(abelianization_invariants(FiniteGroup::cyclic(1)).is_trivial());
  CHECK(abelianization_invariants(FiniteGroup::from_permutations({{1, 2, 0, 3}, {1, 0, 3, 2}})).torsion ==
        std::vector<Integer>{3});
}

TEST_CASE("sylow subgroups") {
  auto g = make_group(s3());
  CHECK(sylow_subgroup(g, 2).subgroup->order() == 2);
  CHECK(sylow_subgroup(g, 3).subgroup->order() == 3);
  auto a4 = make_group(FiniteGroup::from_permutations({{1, 2, 0, 3}, {1, 0, 3, 2}}));
  CHECK(sylow_subgroup(a4, 2).subgroup->order() == 4);
  CHECK(prime_divisors(12) == std::vector<std::size_t>{2, 3});
}
