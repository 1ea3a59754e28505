#include "doctest.h"
#include "tate/integer.hpp"

#include <limits>

using tate::Integer;

TEST_CASE("integer arithmetic stays exact across the int64 boundary") {
  Integer big(std::numeric_limits<long long>::max());
  Integer x = big + Integer(1);
  CHECK_FALSE(x.is_small());
  CHECK(x.to_string() == "9223372036854775808");
  CHECK((x - Integer(1)).is_small());
  CHECK(x - Integer(1) == big);

  Integer sq = x * x;
  CHECK(sq.to_string() == "85070591730234615865843651857942052864");
  CHECK(tate::div_exact(sq, x) == x);
  CHECK(-Integer(std::numeric_limits<long long>::min()) == x);
}

TEST_CASE("floor division and modulus follow floor semantics") {
  CHECK(tate::floor_div(Integer(-7), Integer(2)) == Integer(-4));
  CHECK(tate::mod_floor(Integer(-7), Integer(3)) == Integer(2));
  CHECK(tate::mod_floor(Integer(7), Integer(-3)) == Integer(1));
  CHECK(tate::divides(Integer(0), Integer(0)));
  CHECK_FALSE(tate::divides(Integer(0), Integer(3)));
}

TEST_CASE("extended gcd satisfies Bezout") {
  for (long long a = -30; a <= 30; a += 7) {
    for (long long b = -25; b <= 25; b += 4) {
      auto e = tate::extended_gcd(Integer(a), Integer(b));
      CHECK(e.g == tate::gcd(Integer(a), Integer(b)));
      CHECK(e.s * Integer(a) + e.t * Integer(b) == e.g);
    }
  }
}

TEST_CASE("integer parsing and ordering") {
  Integer a("-123456789012345678901234567890");
  Integer b("123456789012345678901234567890");
  CHECK(a < b);
  CHECK(a + b == Integer(0));
  CHECK(tate::abs(a) == b);
  CHECK_THROWS(Integer("12x"));
}
