#include "tate/integer.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

namespace tate {

namespace {

constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

}  // namespace

Integer::Integer(const mpz_class& v) { set_big(v); }

Integer::Integer(std::string_view decimal) {
  mpz_class v;
  if (v.set_str(std::string(decimal), 10) != 0) {
    throw std::invalid_argument("not an integer: '" + std::string(decimal) + "'");
  }
  set_big(std::move(v));
}

void Integer::set_big(mpz_class v) {
  if (v.fits_slong_p()) {
    small_ = v.get_si();
    big_.reset();
  } else {
    if (big_) *big_ = std::move(v);
    else big_ = std::make_unique<mpz_class>(std::move(v));
    small_ = 0;
  }
}

void Integer::normalize() {
  if (big_ && big_->fits_slong_p()) {
    small_ = big_->get_si();
    big_.reset();
  }
}

std::int64_t Integer::to_int64() const {
  if (big_) throw std::overflow_error("integer does not fit in 64 bits: " + big_->get_str());
  return small_;
}

mpz_class Integer::to_mpz() const { return as_mpz(); }

std::string Integer::to_string() const {
  if (!big_) return std::to_string(small_);
  return big_->get_str();
}

Integer Integer::operator-() const {
  if (!big_ && small_ != kMin) return Integer(-small_);
  return Integer(mpz_class(-as_mpz()));
}

Integer& Integer::operator+=(const Integer& o) {
  if (!big_ && !o.big_) {
    std::int64_t r;
    if (!__builtin_add_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
  }
  set_big(as_mpz() + o.as_mpz());
  return *this;
}

Integer& Integer::operator-=(const Integer& o) {
  if (!big_ && !o.big_) {
    std::int64_t r;
    if (!__builtin_sub_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
  }
  set_big(as_mpz() - o.as_mpz());
  return *this;
}

Integer& Integer::operator*=(const Integer& o) {
  if (!big_ && !o.big_) {
    std::int64_t r;
    if (!__builtin_mul_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
  }
  set_big(as_mpz() * o.as_mpz());
  return *this;
}

void Integer::add_mul(const Integer& b, const Integer& c) {
  if (!big_ && !b.big_ && !c.big_) {
    std::int64_t p, r;
    if (!__builtin_mul_overflow(b.small_, c.small_, &p) &&
        !__builtin_add_overflow(small_, p, &r)) {
      small_ = r;
      return;
    }
  }
  set_big(as_mpz() + b.as_mpz() * c.as_mpz());
}

void Integer::sub_mul(const Integer& b, const Integer& c) {
  if (!big_ && !b.big_ && !c.big_) {
    std::int64_t p, r;
    if (!__builtin_mul_overflow(b.small_, c.small_, &p) &&
        !__builtin_sub_overflow(small_, p, &r)) {
      small_ = r;
      return;
    }
  }
  set_big(as_mpz() - b.as_mpz() * c.as_mpz());
}

bool operator==(const Integer& a, const Integer& b) noexcept {
  if (!a.big_ && !b.big_) return a.small_ == b.small_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // normalized: a big value never fits in int64
}

std::strong_ordering operator<=>(const Integer& a, const Integer& b) noexcept {
  if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
  int c = cmp(a.as_mpz(), b.as_mpz());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::size_t Integer::hash() const noexcept {
  if (!big_) return std::hash<std::int64_t>{}(small_);
  return std::hash<std::string>{}(big_->get_str(16));
}

Integer abs(const Integer& a) { return a.sign() < 0 ? -a : a; }

Integer gcd(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_ && a.small_ != kMin && b.small_ != kMin) {
    std::int64_t x = a.small_ < 0 ? -a.small_ : a.small_;
    std::int64_t y = b.small_ < 0 ? -b.small_ : b.small_;
    while (y != 0) {
      std::int64_t t = x % y;
      x = y;
      y = t;
    }
    return Integer(x);
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.as_mpz().get_mpz_t(), b.as_mpz().get_mpz_t());
  return Integer(g);
}

Integer lcm(const Integer& a, const Integer& b) {
  if (a.is_zero() || b.is_zero()) return Integer(0);
  return abs(div_exact(a, gcd(a, b)) * b);
}

Integer div_exact(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (!a.big_ && !b.big_ && !(a.small_ == kMin && b.small_ == -1)) {
    return Integer(a.small_ / b.small_);
  }
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), a.as_mpz().get_mpz_t(), b.as_mpz().get_mpz_t());
  return Integer(q);
}

Integer floor_div(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (!a.big_ && !b.big_ && !(a.small_ == kMin && b.small_ == -1)) {
    std::int64_t q = a.small_ / b.small_;
    std::int64_t r = a.small_ % b.small_;
    if (r != 0 && ((r < 0) != (b.small_ < 0))) --q;
    return Integer(q);
  }
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.as_mpz().get_mpz_t(), b.as_mpz().get_mpz_t());
  return Integer(q);
}

Integer mod_floor(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("modulus zero");
  if (!a.big_ && !b.big_ && b.small_ != kMin) {
    std::int64_t m = b.small_ < 0 ? -b.small_ : b.small_;
    std::int64_t r = a.small_ % m;
    if (r < 0) r += m;
    return Integer(r);
  }
  mpz_class r;
  mpz_class m = abs(b.as_mpz());
  mpz_fdiv_r(r.get_mpz_t(), a.as_mpz().get_mpz_t(), m.get_mpz_t());
  return Integer(r);
}

bool divides(const Integer& d, const Integer& a) {
  if (d.is_zero()) return a.is_zero();
  return mod_floor(a, d).is_zero();
}

ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
  // Iterative Euclid on Integer; values stay small for the matrices we see.
  Integer old_r = a, r = b;
  Integer old_s = 1, s = 0;
  Integer old_t = 0, t = 1;
  while (!r.is_zero()) {
    Integer q = floor_div(old_r, r);
    Integer tmp = old_r - q * r;
    old_r = std::move(r);
    r = std::move(tmp);
    tmp = old_s - q * s;
    old_s = std::move(s);
    s = std::move(tmp);
    tmp = old_t - q * t;
    old_t = std::move(t);
    t = std::move(tmp);
  }
  if (old_r.sign() < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

std::ostream& operator<<(std::ostream& os, const Integer& v) { return os << v.to_string(); }

}  // namespace tate
