#include "doctest.h"
#include "tate/encoding.hpp"

using namespace tate;

namespace {

GroupPtr c(std::size_t n) { return make_group(FiniteGroup::cyclic(n)); }
GroupPtr s3() { return make_group(FiniteGroup::from_permutations({{1, 0, 2}, {1, 2, 0}})); }
ModulePtr sign_module(const GroupPtr& g) { return make_module(g, 1, IntMatrix(1, 0), {IntMatrix{{-1}}}, "Zi"); }

}  // namespace

TEST_CASE("augmentation elements: x cup x' and the decoding sign") {
  for (auto g : {c(2), c(3), c(4), s3()}) {
    TateContext ctx;
    auto z = ctx.trivial_z(g);
    auto ig = ctx.augmentation(g);
    auto [x, xp] = canonical_augmentation_elements(ctx, g);
    auto cert = verify_encoding_elements(ctx, ig, z, 1, x, xp);
    REQUIRE(cert.checks.size() == 2);
    // With x'(h - 1) = -[h = g0] both products come out as -[id].
    CHECK(cert.valid() == (g->order() == 2));
    auto flipped = verify_encoding_elements(ctx, ig, z, 1, x, scale(xp, Integer(-1)));
    CHECK(flipped.valid());
  }
}

TEST_CASE("trivial and failing certificates") {
  TateContext ctx;
  auto g = c(3);
  auto z = ctx.trivial_z(g);
  auto zz = hom_module(z, z);
  auto one = class_of(ctx, zz, 0, to_vector({1}));
  CHECK(verify_encoding_elements(ctx, z, z, 0, one, one).valid());
  auto ig = ctx.augmentation(g);
  auto [x, xp] = canonical_augmentation_elements(ctx, g);
  auto bad = verify_encoding_elements(ctx, ig, z, 1, x, zero_class(ctx, xp.module, -1));
  CHECK_FALSE(bad.valid());
  CHECK(bad.failure() == "x' cup x = [id_X']");
  CHECK_FALSE(is_zero(bad.checks[0].residual));
}

TEST_CASE("encoding module criterion") {
  TateContext ctx;
  auto c4 = c(4);
  auto v = is_encoding_module(ctx, ctx.augmentation(c4), 1);
  CHECK(v.encoding);
  CHECK(v.degree_r.torsion == std::vector<Integer>{Integer(4)});
  CHECK(v.endo.torsion == std::vector<Integer>{Integer(4)});
  CHECK_FALSE(is_encoding_module(ctx, ctx.trivial_z(s3()), 2).encoding);
  CHECK(is_encoding_module(ctx, ctx.trivial_z(c(3)), 2).encoding);
  CHECK(is_encoding_module(ctx, tensor_power(ctx.augmentation(c(2)), 2), 2).encoding);
  CHECK_THROWS_WITH_AS(is_encoding_module(ctx, trivial_module(c(2), 0, {Integer(2)}), 0),
                       doctest::Contains("The Z-free condition is necessary."), EncodingError);
}

TEST_CASE("encoding search and unit orbits") {
  TateContext ctx;
  auto g = c(3);
  auto s = find_encoding_element(ctx, ctx.augmentation(g), ctx.trivial_z(g), 1);
  REQUIRE(s.certificate);
  CHECK(s.certificate->valid());
  CHECK(s.orbit_size == 2);
  CHECK(s.orbit_verifies);
  auto none = find_encoding_element(ctx, ctx.trivial_z(c(2)), ctx.trivial_z(c(2)), 1);
  CHECK_FALSE(none.certificate);
  CHECK(none.exhausted);
  auto zero = find_encoding_element(ctx, ctx.trivial_z(g), ctx.trivial_z(g), 0);
  REQUIRE(zero.certificate);
  CHECK(zero.certificate->valid());
  CHECK_THROWS_AS(find_encoding_element(ctx, ctx.augmentation(g), ctx.trivial_z(g), 1, 1), BudgetError);
}

TEST_CASE("cohomological equivalence") {
  TateContext ctx;
  auto g = c(2);
  auto z = ctx.trivial_z(g);
  auto zi = sign_module(g);
  auto e = cohomologically_equivalent(ctx, z, zi);
  CHECK_FALSE(e.witnesses);
  CHECK(e.exhausted);
  CHECK(ctx.cohomology(hom_module(zi, z), 0)->is_trivial());
  CHECK(cohomologically_equivalent(ctx, z, z).witnesses);
  CHECK(cohomologically_equivalent(ctx, z, direct_sum(z, regular_module(g))).witnesses);
}

TEST_CASE("cohomologically zero modules") {
  TateContext ctx;
  for (auto g : {c(3), s3()}) {
    CHECK(is_cohomologically_zero(ctx, regular_module(g)).zero);
    CHECK_FALSE(is_cohomologically_zero(ctx, ctx.trivial_z(g)).zero);
  }
  CHECK(is_cohomologically_zero(ctx, trivial_module(c(3), 0)).zero);
  // The Sylow route agrees with the endomorphism route on a large induced module.
  auto g = c(6);
  auto big = tensor_module(regular_module(g), tensor_power(ctx.augmentation(g), 2));
  auto v = is_cohomologically_zero(ctx, big);
  CHECK(v.route == "sylow");
  CHECK(v.zero);
  auto not_zero = direct_sum(big, ctx.trivial_z(g));
  CHECK_FALSE(is_cohomologically_zero(ctx, not_zero).zero);
}

TEST_CASE("duality pairing") {
  for (auto g : {c(2), c(3), s3()}) {
    TateContext ctx;
    for (auto x : {ctx.trivial_z(g), ctx.augmentation(g)})
      for (int i = -1; i <= 1; ++i) {
        auto d = duality_pairing_matrix(ctx, x, i);
        CHECK(d.left.order() == d.right.order());
        CHECK(d.nondegenerate);
      }
    auto d = duality_pairing_matrix(ctx, ctx.trivial_z(g), 0);
    CHECK(d.values == IntMatrix{{1}});
  }
}

TEST_CASE("resolutions by augmentation powers") {
  TateContext ctx;
  auto r2 = encoding_resolution(ctx, c(2), 2);
  CHECK(r2.valid());
  REQUIRE(r2.modules.size() == 4);
  CHECK(r2.modules[1]->rank == 2);
  CHECK(r2.modules[2]->rank == 2);
  auto r3 = encoding_resolution(ctx, c(3), 3);
  CHECK(r3.valid());
  CHECK(r3.nodes.size() == 5);
}

TEST_CASE("endomorphism rings") {
  TateContext ctx;
  auto t = endo_ring_table(ctx, ctx.augmentation(c(4)));
  CHECK(t.elements.size() == 4);
  CHECK(t.generated_by_identity);
  CHECK(t.units.size() == 2);
  CHECK(endo_ring_table(ctx, regular_module(c(4))).elements.size() == 1);
  auto s = endo_ring_table(ctx, ctx.trivial_z(s3()));
  CHECK(s.elements.size() == 6);
  CHECK(s.units.size() == 2);
}

TEST_CASE("restriction of certificates") {
  TateContext ctx;
  auto g = s3();
  auto z = ctx.trivial_z(g);
  auto ig = ctx.augmentation(g);
  auto [x, xp] = canonical_augmentation_elements(ctx, g);
  xp = scale(xp, Integer(-1));
  REQUIRE(verify_encoding_elements(ctx, ig, z, 1, x, xp).valid());
  for (std::size_t p : {2u, 3u}) {
    auto emb = sylow_subgroup(g, p);
    auto rz = restrict_module(z, emb), rig = restrict_module(ig, emb);
    auto rx = restrict_class(ctx, x, emb, hom_module(rz, rig));
    auto rxp = restrict_class(ctx, xp, emb, hom_module(rig, rz));
    CHECK(verify_encoding_elements(ctx, rig, rz, 1, rx, rxp).valid());
  }
}

TEST_CASE("tensor products of encoding pairs") {
  TateContext ctx;
  auto g = c(3);
  auto z = ctx.trivial_z(g);
  auto ig = ctx.augmentation(g);
  auto [x, xp] = canonical_augmentation_elements(ctx, g);
  xp = scale(xp, Integer(-1));
  auto ig2 = tensor_module(ig, ig);
  auto hz = hom_module(z, ig);
  auto hd = hom_module(ig, z);
  auto h2 = hom_module(z, ig2);
  auto hd2 = hom_module(ig2, z);
  auto up = make_pairing(hz, hz, h2, IntMatrix::identity(h2->rank));
  auto down = make_pairing(hd, hd, hd2, IntMatrix::identity(hd2->rank));
  auto xx = cup(ctx, x, x, up);
  auto xpxp = cup(ctx, xp, xp, down);
  // Moving y' past x costs (-1)^{rs}: the decoding element is -(x' cup y').
  CHECK(verify_encoding_elements(ctx, ig2, z, 2, xx, scale(xpxp, Integer(-1))).valid());
  CHECK_FALSE(verify_encoding_elements(ctx, ig2, z, 2, xx, xpxp).valid());
}
