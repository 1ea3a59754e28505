#include "doctest.h"
#include "tate/cohomology.hpp"

using namespace tate;

namespace {

GroupPtr c(std::size_t n) { return make_group(FiniteGroup::cyclic(n)); }
GroupPtr s3() { return make_group(FiniteGroup::from_permutations({{1, 0, 2}, {1, 2, 0}})); }
GroupPtr klein() { return make_group(FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))); }

std::vector<Integer> ints(std::initializer_list<long long> v) { return {v.begin(), v.end()}; }

// Known integral cohomology of small groups, indexed by degree mod period.
std::vector<Integer> expected_z(const std::string& g, int degree) {
  if (g == "C2") return (degree % 2 == 0) ? ints({2}) : ints({});
  if (g == "C3") return (degree % 2 == 0) ? ints({3}) : ints({});
  if (g == "C4") return (degree % 2 == 0) ? ints({4}) : ints({});
  // S3: period 4; Z/6, 0, Z/2, 0.
  const int r = ((degree % 4) + 4) % 4;
  if (r == 0) return ints({6});
  if (r == 2) return ints({2});
  return {};
}

}  // namespace

TEST_CASE("normalized bar differential squares to zero") {
  for (auto g : {c(3), s3(), klein()}) {
    TateContext ctx;
    for (auto m : {trivial_module(g, 1), augmentation_ideal(g), trivial_module(g, 0, {Integer(2)})}) {
      for (std::size_t i = 0; i < 3; ++i) {
        IntMatrix dd = bar_differential(*m, i + 1) * bar_differential(*m, i);
        CHECK(dd.is_zero());
      }
    }
  }
}

TEST_CASE("integral Tate cohomology of small groups") {
  TateContext ctx;
  const std::vector<std::pair<std::string, GroupPtr>> groups = {{"C2", c(2)}, {"C3", c(3)}, {"C4", c(4)}, {"S3", s3()}};
  for (const auto& [name, g] : groups) {
    auto z = ctx.trivial_z(g);
    for (int d = -4; d <= 3; ++d) {
      CAPTURE(name);
      CAPTURE(d);
      auto h = ctx.cohomology(z, d);
      CHECK(h->invariants.free_rank == 0);
      CHECK(h->invariants.torsion == expected_z(name, d));
    }
  }
}

TEST_CASE("degree -2 matches the abelianization") {
  TateContext ctx;
  for (auto g : {c(4), s3(), klein()}) {
    auto h = ctx.cohomology(ctx.trivial_z(g), -2);
    CHECK(h->invariants.torsion == abelianization_invariants(*g).torsion);
  }
}

TEST_CASE("the regular module is cohomologically trivial") {
  TateContext ctx;
  for (auto g : {c(3), s3()}) {
    auto zg = regular_module(g);
    for (int d = -3; d <= 2; ++d) CHECK(ctx.cohomology(zg, d)->is_trivial());
  }
}

TEST_CASE("carrying cocycle generates degree two for cyclic groups") {
  for (std::size_t n : {2u, 3u, 5u}) {
    TateContext ctx;
    auto g = c(n);
    auto z = ctx.trivial_z(g);
    BarShape shape{n, 2};
    Vector v(shape.tuples());
    for (std::size_t t = 0; t < shape.tuples(); ++t) {
      auto els = shape.decode(t);
      v[t] = (els[0] + els[1] >= n) ? 1 : 0;
    }
    auto x = class_of(ctx, z, 2, v);
    for (std::size_t k = 1; k <= n; ++k) CHECK(is_zero_class(ctx, scale(x, Integer(static_cast<long long>(k)))) == (k == n));
  }
}

TEST_CASE("non-cocycles are rejected with violated relations") {
  TateContext ctx;
  auto g = c(3);
  auto z = ctx.trivial_z(g);
  Vector v(2);
  v[0] = 1;  // f(s) = 1, f(s^2) = 0 is not a crossed homomorphism into Z
  CHECK_THROWS_AS(class_of(ctx, z, 1, v), NotCocycleError);
  try {
    class_of(ctx, z, 1, v);
  } catch (const NotCocycleError& e) {
    CHECK_FALSE(e.violated.empty());
  }
}

TEST_CASE("the group order kills every class") {
  TateContext ctx;
  auto g = s3();
  for (auto m : {augmentation_ideal(g), ctx.trivial_z(g), dual_module(augmentation_ideal(g))}) {
    for (int d = -2; d <= 2; ++d) {
      auto h = ctx.cohomology(m, d);
      for (std::size_t k = 0; k < h->representatives.size(); ++k)
        CHECK(is_zero_class(ctx, scale(generator_class(ctx, m, d, k), Integer(6))));
    }
  }
}

TEST_CASE("bar and shifted pipelines agree") {
  TateContext ctx;
  ctx.set_cross_check(true);
  auto g = s3();
  for (auto m : {ctx.trivial_z(g), augmentation_ideal(g), trivial_module(g, 0, {Integer(3)})}) {
    CHECK_NOTHROW(ctx.bar_cohomology(m, 1));
    CHECK_NOTHROW(ctx.bar_cohomology(m, 2));
  }
  CHECK_NOTHROW(ctx.bar_cohomology(ctx.trivial_z(c(4)), 3));
}

TEST_CASE("ceiling routes to the shifted pipeline") {
  TateContext ctx(100);
  auto h = ctx.cohomology(ctx.trivial_z(s3()), 2);
  CHECK(h->pipeline == Pipeline::shifted);
  CHECK_FALSE(h->reducible());
  CHECK(h->invariants.torsion == ints({2}));
  CHECK_THROWS_AS(ctx.bar_cohomology(ctx.trivial_z(s3()), 2), ResourceError);
}

TEST_CASE("shifting is invertible") {
  TateContext ctx;
  auto g = s3();
  for (auto m : {ctx.trivial_z(g), augmentation_ideal(g)}) {
    for (int d = -3; d <= 1; ++d) {
      auto h = ctx.cohomology(m, d);
      auto up = ctx.cohomology(ctx.shifted_module(m, 1), d + 1);
      CHECK(h->invariants.torsion == up->invariants.torsion);
      for (std::size_t k = 0; k < h->representatives.size(); ++k) {
        auto x = generator_class(ctx, m, d, k);
        auto y = shift_up(ctx, x);
        CHECK_FALSE(is_zero_class(ctx, y));
        CHECK(classes_equal(ctx, shift_down(ctx, y, m), x));
      }
    }
  }
}

TEST_CASE("connecting map of the augmentation sequence") {
  TateContext ctx;
  for (auto g : {c(3), s3()}) {
    auto z = ctx.trivial_z(g);
    auto ses = augmentation_sequence(ctx, z);
    CHECK_NOTHROW(check_short_exact(ses));
    // delta[1] is the class of g -> g - 1.
    auto one = class_of(ctx, z, 0, to_vector({1}));
    auto d = connecting_delta(ctx, ses, one);
    const std::size_t m = g->order() - 1;
    Vector expect(m * m);
    for (std::size_t h = 0; h < m; ++h) expect[h * m + h] = 1;
    CHECK(d.degree == 1);
    CHECK(classes_equal(ctx, d, class_of(ctx, ctx.augmentation(g), 1, expect)));
    CHECK(classes_equal(ctx, d, shift_up(ctx, one)));
    // delta is an isomorphism in every degree.
    for (int deg = -3; deg <= 1; ++deg) {
      auto h = ctx.cohomology(z, deg);
      for (std::size_t k = 0; k < h->representatives.size(); ++k) {
        auto x = generator_class(ctx, z, deg, k);
        auto y = connecting_delta(ctx, ses, x);
        CHECK(y.degree == deg + 1);
        CHECK_FALSE(is_zero_class(ctx, y));
      }
    }
  }
}

TEST_CASE("non-exact sequences are rejected") {
  TateContext ctx;
  auto g = c(2);
  auto z = ctx.trivial_z(g);
  GModuleMap twice{z, z, IntMatrix{{2}}};
  GModuleMap zero{z, z, IntMatrix{{0}}};
  CHECK_THROWS_AS(check_short_exact({twice, zero}), CohomologyError);
}

TEST_CASE("induced maps are natural") {
  TateContext ctx;
  auto g = s3();
  auto z = ctx.trivial_z(g);
  auto z2 = trivial_module(g, 0, {Integer(2)});
  GModuleMap red{z, z2, IntMatrix{{1}}};
  auto one = class_of(ctx, z, 0, to_vector({1}));
  auto image = induced_map(ctx, red, one);
  CHECK(ctx.cohomology(z2, 0)->invariants.torsion == ints({2}));
  CHECK_FALSE(is_zero_class(ctx, image));
  // Commutes with shifting.
  auto lhs = shift_up(ctx, image);
  auto rhs = induced_map(ctx, tensor_maps(red, identity_map(ctx.augmentation(g)), ctx.shifted_module(z, 1),
                                          ctx.shifted_module(z2, 1)),
                         shift_up(ctx, one));
  CHECK(classes_equal(ctx, lhs, rhs));
  GModuleMap bad{z2, z, IntMatrix{{1}}};
  CHECK_THROWS_AS(induced_map(ctx, bad, class_of(ctx, z2, 0, to_vector({1}))), CohomologyError);
}
