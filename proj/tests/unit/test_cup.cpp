#include "doctest.h"
#include "tate/cup.hpp"

using namespace tate;

namespace {

GroupPtr c(std::size_t n) { return make_group(FiniteGroup::cyclic(n)); }
GroupPtr s3() { return make_group(FiniteGroup::from_permutations({{1, 0, 2}, {1, 2, 0}})); }

struct Fixture {
  TateContext ctx;
  GroupPtr g;
  ModulePtr z, ig, dual_ig, hom_z_ig, end_ig;
  explicit Fixture(GroupPtr grp) : g(std::move(grp)) {
    z = ctx.trivial_z(g);
    ig = ctx.augmentation(g);
    dual_ig = hom_module(ig, z);
    hom_z_ig = hom_module(z, ig);
    end_ig = hom_module(ig, ig);
  }
  std::size_t m() const { return g->order() - 1; }
  // f(g - 1) = 1 for every g != e.
  CohomClass f() {
    Vector v(m(), Integer(1));
    return class_of(ctx, dual_ig, -1, v);
  }
  // c(g) = 1 - g, valued in Hom(Z, I_G) = I_G.
  CohomClass c_minus(const ModulePtr& target) {
    Vector v(m() * m());
    for (std::size_t h = 0; h < m(); ++h) v[h * m() + h] = -1;
    return class_of(ctx, target, 1, v);
  }
};

Vector ids(const GModule& end) { return hom_element(end, IntMatrix::identity(end.hom->source->rank)); }

// eta with left and right swapped.
PairingMap swapped(const PairingMap& eta) {
  PairingMap p{eta.right, eta.left, eta.out, {}};
  for (const auto& t : eta.terms) p.terms.push_back({t.out, t.right, t.left, t.coef});
  return p;
}

}  // namespace

TEST_CASE("negative-degree fixtures: f cup c and c cup f") {
  for (auto g : {c(2), c(3), c(4), s3()}) {
    Fixture fx(g);
    auto one = class_of(fx.ctx, fx.z, 0, to_vector({1}));
    auto fc = cup(fx.ctx, fx.f(), fx.c_minus(fx.ig), evaluation_to_scalars(fx.dual_ig, fx.ig));
    CHECK(classes_equal(fx.ctx, fc, one));
    auto cf = cup(fx.ctx, fx.c_minus(fx.hom_z_ig), fx.f(), composition_pairing(fx.hom_z_ig, fx.dual_ig));
    CHECK(cf.module->key() == fx.end_ig->key());
    CHECK(classes_equal(fx.ctx, cf, class_of(fx.ctx, fx.end_ig, 0, ids(*fx.end_ig))));
  }
}

TEST_CASE("direct formulas agree with the shifting reduction") {
  for (auto g : {c(3), s3()}) {
    Fixture fx(g);
    auto eval = evaluation_to_scalars(fx.dual_ig, fx.ig);
    auto x = fx.f();
    auto y = fx.c_minus(fx.ig);
    CHECK(classes_equal(fx.ctx, cup(fx.ctx, x, y, eval), cup_by_shifting(fx.ctx, x, y, eval)));
    auto rev = swapped(eval);
    CHECK(classes_equal(fx.ctx, cup(fx.ctx, y, x, rev), cup_by_shifting(fx.ctx, y, x, rev)));
    // (0, -2) and (-2, 0) over Z.
    auto unit_l = left_unit_pairing(fx.z, fx.z);
    auto two = scale(class_of(fx.ctx, fx.z, 0, to_vector({1})), Integer(2));
    auto h = fx.ctx.cohomology(fx.z, -2);
    for (std::size_t k = 0; k < h->representatives.size(); ++k) {
      auto w = generator_class(fx.ctx, fx.z, -2, k);
      CHECK(classes_equal(fx.ctx, cup(fx.ctx, two, w, unit_l), cup_by_shifting(fx.ctx, two, w, unit_l)));
      CHECK(classes_equal(fx.ctx, cup(fx.ctx, w, two, unit_l), cup_by_shifting(fx.ctx, w, two, unit_l)));
    }
  }
}

TEST_CASE("graded commutation") {
  Fixture fx(c(3));
  auto eval = evaluation_to_scalars(fx.dual_ig, fx.ig);
  auto x = fx.c_minus(fx.ig);
  auto y = fx.f();
  // (1, -1): x cup y = (-1)^{-1} y cup x.
  CHECK(classes_equal(fx.ctx, cup(fx.ctx, x, y, swapped(eval)), scale(cup(fx.ctx, y, x, eval), Integer(-1))));
  // (0, 0) and (1, 1) over Z x Z -> Z.
  auto mult = left_unit_pairing(fx.z, fx.z);
  auto a = scale(class_of(fx.ctx, fx.z, 0, to_vector({1})), Integer(2));
  auto b = class_of(fx.ctx, fx.z, 0, to_vector({1}));
  CHECK(classes_equal(fx.ctx, cup(fx.ctx, a, b, mult), cup(fx.ctx, b, a, mult)));
  Fixture f2(s3());
  auto sign = make_module(f2.g, 1, IntMatrix(1, 0), {IntMatrix{{-1}}, IntMatrix{{1}}}, "sign");
  auto h1 = f2.ctx.cohomology(sign, 1);
  auto z2 = trivial_module(f2.g, 0, {Integer(2)});
  REQUIRE(h1->representatives.size() <= 1);
  auto hz2 = f2.ctx.cohomology(z2, 1);
  REQUIRE(hz2->representatives.size() == 1);
  auto u = generator_class(f2.ctx, z2, 1, 0);
  auto m2 = make_pairing(z2, z2, z2, IntMatrix{{1}});
  CHECK(classes_equal(f2.ctx, cup(f2.ctx, u, u, m2), scale(cup(f2.ctx, u, u, m2), Integer(-1))));
}

TEST_CASE("cup is bilinear and unital") {
  Fixture fx(c(4));
  auto unit = left_unit_pairing(fx.z, fx.ig);
  auto one = class_of(fx.ctx, fx.z, 0, to_vector({1}));
  for (int d = -2; d <= 2; ++d) {
    auto h = fx.ctx.cohomology(fx.ig, d);
    for (std::size_t k = 0; k < h->representatives.size(); ++k) {
      auto y = generator_class(fx.ctx, fx.ig, d, k);
      CHECK(classes_equal(fx.ctx, cup(fx.ctx, one, y, unit), y));
      auto lhs = cup(fx.ctx, add(one, scale(one, Integer(2))), y, unit);
      auto rhs = add(cup(fx.ctx, one, y, unit), cup(fx.ctx, scale(one, Integer(2)), y, unit));
      CHECK(classes_equal(fx.ctx, lhs, rhs));
      CHECK(is_zero_class(fx.ctx, cup(fx.ctx, zero_class(fx.ctx, fx.z, 0), y, unit)));
    }
  }
}

TEST_CASE("cup with the carrying cocycle") {
  for (std::size_t n : {2u, 3u, 4u}) {
    TateContext ctx;
    auto g = c(n);
    auto z = ctx.trivial_z(g);
    BarShape shape{n, 2};
    Vector chi(shape.tuples());
    for (std::size_t t = 0; t < shape.tuples(); ++t) {
      auto els = shape.decode(t);
      chi[t] = (els[0] + els[1] >= n) ? 1 : 0;
    }
    auto x = class_of(ctx, z, 2, chi);
    auto one = class_of(ctx, z, 0, to_vector({1}));
    auto p = cup(ctx, one, x, left_unit_pairing(z, z));
    CHECK(classes_equal(ctx, p, x));
    // Periodicity: chi cup chi generates degree 4.
    auto sq = cup(ctx, x, x, left_unit_pairing(z, z));
    for (std::size_t k = 1; k < n; ++k) CHECK_FALSE(is_zero_class(ctx, scale(sq, Integer(static_cast<long long>(k)))));
  }
}

TEST_CASE("unsupported degrees are reported") {
  TateContext ctx(60);
  auto g = s3();
  auto z = ctx.trivial_z(g);
  auto h = ctx.cohomology(z, -2);
  REQUIRE(h->representatives.size() == 1);
  auto w = generator_class(ctx, z, -2, 0);
  CHECK_THROWS_AS(cup(ctx, w, w, left_unit_pairing(z, z)), UnsupportedDegreesError);
}
