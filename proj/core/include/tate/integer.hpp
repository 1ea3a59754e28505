#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

namespace tate {

// Arbitrary-precision integer with an inline int64 fast path.
//
// Values that fit in int64 never touch the heap; arithmetic that would
// overflow promotes to GMP and results are demoted again when they fit.
class Integer {
 public:
  Integer() noexcept = default;
  Integer(int v) noexcept : small_(v) {}
  Integer(long v) noexcept : small_(v) {}
  Integer(long long v) noexcept : small_(v) {}
  explicit Integer(const mpz_class& v);
  explicit Integer(std::string_view decimal);

  Integer(const Integer& o) : small_(o.small_) {
    if (o.big_) big_ = std::make_unique<mpz_class>(*o.big_);
  }
  Integer(Integer&&) noexcept = default;
  Integer& operator=(const Integer& o) {
    if (this != &o) {
      small_ = o.small_;
      if (o.big_) {
        if (big_) *big_ = *o.big_;
        else big_ = std::make_unique<mpz_class>(*o.big_);
      } else {
        big_.reset();
      }
    }
    return *this;
  }
  Integer& operator=(Integer&&) noexcept = default;
  ~Integer() = default;

  bool is_small() const noexcept { return !big_; }
  bool is_zero() const noexcept { return !big_ && small_ == 0; }
  bool is_one() const noexcept { return !big_ && small_ == 1; }
  int sign() const noexcept {
    if (!big_) return (small_ > 0) - (small_ < 0);
    return sgn(*big_);
  }
  bool fits_int64() const noexcept { return !big_; }
  std::int64_t to_int64() const;  // throws std::overflow_error
  mpz_class to_mpz() const;
  std::string to_string() const;

  Integer operator-() const;
  Integer& operator+=(const Integer& o);
  Integer& operator-=(const Integer& o);
  Integer& operator*=(const Integer& o);

  friend Integer operator+(Integer a, const Integer& b) { return a += b; }
  friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
  friend Integer operator*(Integer a, const Integer& b) { return a *= b; }

  friend bool operator==(const Integer& a, const Integer& b) noexcept;
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) noexcept;

  // a += b * c without materializing the product when everything is small.
  void add_mul(const Integer& b, const Integer& c);
  void sub_mul(const Integer& b, const Integer& c);

  std::size_t hash() const noexcept;

 private:
  void normalize();
  void set_big(mpz_class v);
  mpz_class as_mpz() const { return big_ ? *big_ : mpz_class(static_cast<long>(small_)); }

  std::int64_t small_ = 0;
  std::unique_ptr<mpz_class> big_;

  friend Integer abs(const Integer& a);
  friend Integer gcd(const Integer& a, const Integer& b);
  friend Integer div_exact(const Integer& a, const Integer& b);
  friend Integer floor_div(const Integer& a, const Integer& b);
  friend Integer mod_floor(const Integer& a, const Integer& b);
};

Integer abs(const Integer& a);
Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
// Caller guarantees b | a.
Integer div_exact(const Integer& a, const Integer& b);
Integer floor_div(const Integer& a, const Integer& b);
// Result in [0, |b|).
Integer mod_floor(const Integer& a, const Integer& b);
bool divides(const Integer& d, const Integer& a);

// g = gcd(a, b) = s*a + t*b, g >= 0.
struct ExtendedGcd {
  Integer g, s, t;
};
ExtendedGcd extended_gcd(const Integer& a, const Integer& b);

std::ostream& operator<<(std::ostream& os, const Integer& v);

}  // namespace tate

template <>
struct std::hash<tate::Integer> {
  std::size_t operator()(const tate::Integer& v) const noexcept { return v.hash(); }
};
