#include "doctest.h"
#include "tate/module.hpp"

using namespace tate;

namespace {

GroupPtr c(std::size_t n) { return make_group(FiniteGroup::cyclic(n)); }
GroupPtr s3() { return make_group(FiniteGroup::from_permutations({{1, 0, 2}, {1, 2, 0}})); }

// The I_G basis inside Z[G]: b_h = e_h - e_e.
IntMatrix ig_inclusion(const FiniteGroup& g) {
  IntMatrix m(g.order(), g.order() - 1);
  for (std::size_t h = 1; h < g.order(); ++h) {
    m(h, h - 1) = 1;
    m(0, h - 1) = -1;
  }
  return m;
}

}  // namespace

TEST_CASE("regular module is a faithful permutation representation") {
  auto g = s3();
  auto zg = regular_module(g);
  CHECK(zg->rank == 6);
  CHECK(zg->zfree());
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) CHECK(zg->action[a] * zg->action[b] == zg->action[g->mul(a, b)]);
  for (std::size_t a = 1; a < 6; ++a) CHECK_FALSE(zg->action[a].is_identity());
  auto c2 = regular_module(c(2));
  CHECK(c2->action[1] == IntMatrix{{0, 1}, {1, 0}});
}

TEST_CASE("augmentation ideal agrees with the regular representation") {
  CHECK(augmentation_ideal(c(2))->action[1] == IntMatrix{{-1}});
  for (auto g : {c(2), c(3), c(4), s3()}) {
    auto ig = augmentation_ideal(g);
    auto zg = regular_module(g);
    IntMatrix inc = ig_inclusion(*g);
    CHECK(ig->rank == g->order() - 1);
    for (std::size_t a = 0; a < g->order(); ++a) CHECK(inc * ig->action[a] == zg->action[a] * inc);
    check_invariants(*ig);
  }
}

TEST_CASE("trivial and torsion modules") {
  auto g = c(2);
  auto z2 = trivial_module(g, 0, {Integer(2)});
  CHECK(z2->rank == 1);
  CHECK_FALSE(z2->zfree());
  CHECK(z2->underlying_group().to_string() == "Z/2");
  CHECK(trivial_module(g, 0)->rank == 0);
  CHECK_THROWS_AS(trivial_module(g, 0, {Integer(1)}), ModuleError);
}

TEST_CASE("hom modules") {
  auto g = c(2);
  auto z = trivial_module(g, 1);
  auto z2 = trivial_module(g, 0, {Integer(2)});
  auto h = hom_module(z2, z);
  CHECK(h->rank == 0);
  // Hom(Z/2, Z/2) = Z/2
  CHECK(hom_module(z2, z2)->underlying_group().to_string() == "Z/2");
  // Hom(Z/2, Z/4) = Z/2, Hom(Z/4, Z/2) = Z/2, Hom(Z/4, Z/6) = Z/2
  auto z4 = trivial_module(g, 0, {Integer(4)});
  auto z6 = trivial_module(g, 0, {Integer(6)});
  CHECK(hom_module(z2, z4)->underlying_group().to_string() == "Z/2");
  CHECK(hom_module(z4, z2)->underlying_group().to_string() == "Z/2");
  CHECK(hom_module(z4, z6)->underlying_group().to_string() == "Z/2");
  auto ig = augmentation_ideal(g);
  auto hi = hom_module(ig, z);
  CHECK(hi->rank == 1);
  CHECK(hi->action[1] == IntMatrix{{-1}});
  // Hom(Z, M) = M
  auto g3 = c(3);
  auto m = augmentation_ideal(g3);
  auto hz = hom_module(trivial_module(g3, 1), m);
  CHECK(hz->action == m->action);
  for (auto mod : {h, hi, hz, hom_module(z2, z2), hom_module(z4, z6)}) check_invariants(*mod);
}

TEST_CASE("hom fixed points are exactly the equivariant maps (brute force)") {
  for (auto g : {c(2), c(3), c(4)}) {
    auto ig = augmentation_ideal(g);
    auto z = trivial_module(g, 1);
    std::vector<std::pair<ModulePtr, ModulePtr>> pairs{{ig, z}, {z, ig}, {ig, ig}};
    if (g->order() <= 3) pairs.push_back({regular_module(g), z});
    for (auto [x, n] : pairs) {
      auto h = hom_module(x, n);
      const std::size_t dim = h->rank;
      if (dim > 9) continue;
      std::vector<long long> e(dim, -1);
      for (;;) {
        Vector v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = e[i];
        IntMatrix f = hom_matrix(*h, v);
        bool equiv = true, fixed = true;
        for (std::size_t a = 0; a < g->order(); ++a) {
          if (!(n->action[a] * f == f * x->action[a])) equiv = false;
          if (!(h->action[a] * v == v)) fixed = false;
        }
        REQUIRE(equiv == fixed);
        std::size_t i = 0;
        while (i < dim && e[i] == 1) e[i++] = -1;
        if (i == dim) break;
        ++e[i];
      }
    }
  }
}

TEST_CASE("tensor products and powers") {
  auto g = c(3);
  auto ig = augmentation_ideal(g);
  auto t2 = tensor_power(ig, 2);
  CHECK(t2->rank == 4);
  CHECK(t2->zfree());
  check_invariants(*t2);
  CHECK(tensor_power(ig, 0)->rank == 1);
  auto z = trivial_module(g, 1);
  CHECK(tensor_module(ig, z)->action == ig->action);
  auto z2 = trivial_module(g, 0, {Integer(2)});
  auto z3 = trivial_module(g, 0, {Integer(3)});
  auto t = tensor_module(z2, z3);
  CHECK(t->underlying_group().is_trivial());
  CHECK(normalize_module(t).module->rank == 0);
}

TEST_CASE("normalization") {
  auto g = c(2);
  std::vector<IntMatrix> act(2, IntMatrix::identity(2));
  auto m = make_module_full(g, 2, IntMatrix{{2, 0}, {0, 3}}, act, "M");
  auto nm = normalize_module(m);
  CHECK(nm.module->rank == 1);
  CHECK(nm.module->relations == IntMatrix{{6}});
  CHECK(nm.to.is_equivariant());
  CHECK(nm.from.is_equivariant());
  CHECK(nm.to.is_well_defined());
  CHECK(nm.from.is_well_defined());
  // round trips are identities modulo relations
  for (std::size_t k = 0; k < 2; ++k) {
    Vector e = unit_vector(2, k);
    CHECK(m->equivalent(nm.from(nm.to(e)), e));
  }
  auto z = trivial_module(g, 1);
  CHECK(normalize_module(z).module == z);
}

TEST_CASE("duals and direct sums") {
  auto g = c(2);
  auto z = trivial_module(g, 1);
  CHECK(dual_module(z)->rank == 1);
  CHECK(dual_module(trivial_module(g, 0, {Integer(2)}))->rank == 0);
  auto m = trivial_module(g, 1, {Integer(2)});  // Z/2 + Z
  auto dd = dual_module(dual_module(m));
  CHECK(dd->underlying_group().to_string() == "Z");
  auto s = direct_sum(augmentation_ideal(c(4)), regular_module(c(4)));
  CHECK(s->rank == 7);
  check_invariants(*s);
}

TEST_CASE("restriction") {
  auto g = s3();
  auto ig = augmentation_ideal(g);
  std::size_t invol = 0;
  for (std::size_t a = 0; a < 6; ++a)
    if (g->element_order(a) == 2) invol = a;
  auto h = subgroup_closure(g, {invol});
  auto r = restrict_module(ig, h);
  CHECK(r->rank == 5);
  CHECK(r->group->order() == 2);
  check_invariants(*r);
  auto full = subgroup_closure(g, g->generators());
  CHECK(restrict_module(ig, full)->action.size() == 6);
  auto triv = restrict_module(ig, subgroup_closure(g, {0}));
  CHECK(triv->action.size() == 1);
  CHECK(triv->action[0].is_identity());
}

TEST_CASE("pairings are equivariant") {
  for (auto g : {c(3), s3()}) {
    auto ig = augmentation_ideal(g);
    auto z = trivial_module(g, 1);
    auto hxz = hom_module(ig, z);
    auto hzx = hom_module(z, ig);
    auto comp = composition_pairing(hxz, hzx);
    CHECK(comp.is_equivariant());
    CHECK(comp.out->rank == 1);
    auto comp2 = composition_pairing(hzx, hxz);
    CHECK(comp2.is_equivariant());
    CHECK(tensor_pairing(ig, ig).is_equivariant());
    CHECK(evaluation_to_scalars(hxz, ig).is_equivariant());
    auto ev = evaluation_pairing(hom_module(ig, ig), tensor_module(ig, z), z);
    CHECK(ev.is_equivariant());
  }
  // torsion source
  auto g = c(2);
  auto z2 = trivial_module(g, 0, {Integer(2)});
  auto comp = composition_pairing(hom_module(z2, z2), hom_module(z2, z2));
  CHECK(comp.is_equivariant());
  // identity composes to identity
  auto h = hom_module(z2, z2);
  Vector id = hom_element(*h, IntMatrix{{1}});
  CHECK(h->equivalent(comp(id, id), id));
}

TEST_CASE("composition with the identity") {
  auto g = c(4);
  auto ig = augmentation_ideal(g);
  auto z = trivial_module(g, 1);
  auto hxz = hom_module(ig, z);
  auto hxx = hom_module(ig, ig);
  auto comp = composition_pairing(hxz, hxx);
  Vector id = hom_element(*hxx, IntMatrix::identity(3));
  Vector f = to_vector({1, 2, -1});
  CHECK(comp(f, id) == f);
}

TEST_CASE("tensor factor permutation") {
  // swap of 2 x 3
  auto p = tensor_factor_permutation({2, 3}, {1, 0});
  CHECK(p[0 * 3 + 1] == 1 * 2 + 0);
  CHECK(p[1 * 3 + 2] == 2 * 2 + 1);
}
