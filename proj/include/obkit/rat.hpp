#pragma once

#include <gmp.h>

#include <cstdint>
#include <cstdlib>
#include <iosfwd>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "obkit/error.hpp"

namespace obkit {

// Arbitrary-precision rational, a thin value wrapper around GMP's mpq_t.
// Always canonical (reduced, positive denominator).  There is deliberately
// no conversion to or from floating point: every quantity in this library
// is exact.
class Rat {
public:
  Rat() { mpq_init(v_); }

  Rat(long n) {
    mpq_init(v_);
    mpq_set_si(v_, n, 1);
  }

  Rat(int n) : Rat(static_cast<long>(n)) {}

  Rat(long num, long den) {
    if (den == 0)
      throw Error(ErrorKind::Invalid, "rational with zero denominator");
    mpq_init(v_);
    // mpq_set_si takes the denominator unsigned; set both parts signed and
    // let canonicalize fix the sign.
    mpz_set_si(mpq_numref(v_), num);
    mpz_set_si(mpq_denref(v_), den);
    mpq_canonicalize(v_);
  }

  // Accepts "p/q", "p", and an optional leading minus sign.
  static Rat parse(std::string_view s) {
    Rat r;
    std::string buf(s);
    if (buf.empty() || mpq_set_str(r.v_, buf.c_str(), 10) != 0)
      throw Error(ErrorKind::Parse, "bad rational literal '" + buf + "'");
    if (mpz_sgn(mpq_denref(r.v_)) == 0)
      throw Error(ErrorKind::Parse, "zero denominator in '" + buf + "'");
    mpq_canonicalize(r.v_);
    return r;
  }

  Rat(const Rat& o) {
    mpq_init(v_);
    mpq_set(v_, o.v_);
  }

  Rat(Rat&& o) noexcept {
    mpq_init(v_);
    mpq_swap(v_, o.v_);
  }

  Rat& operator=(const Rat& o) {
    if (this != &o) mpq_set(v_, o.v_);
    return *this;
  }

  Rat& operator=(Rat&& o) noexcept {
    if (this != &o) mpq_swap(v_, o.v_);
    return *this;
  }

  ~Rat() { mpq_clear(v_); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    Rat r;
    mpq_add(r.v_, a.v_, b.v_);
    return r;
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    Rat r;
    mpq_sub(r.v_, a.v_, b.v_);
    return r;
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    Rat r;
    mpq_mul(r.v_, a.v_, b.v_);
    return r;
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw Error(ErrorKind::Invalid, "division by zero");
    Rat r;
    mpq_div(r.v_, a.v_, b.v_);
    return r;
  }
  Rat operator-() const {
    Rat r;
    mpq_neg(r.v_, v_);
    return r;
  }

  Rat& operator+=(const Rat& o) {
    mpq_add(v_, v_, o.v_);
    return *this;
  }
  Rat& operator-=(const Rat& o) {
    mpq_sub(v_, v_, o.v_);
    return *this;
  }
  Rat& operator*=(const Rat& o) {
    mpq_mul(v_, v_, o.v_);
    return *this;
  }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.v_, b.v_) != 0; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return mpq_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const Rat& a, const Rat& b) { return mpq_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const Rat& a, const Rat& b) { return mpq_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const Rat& a, const Rat& b) { return mpq_cmp(a.v_, b.v_) >= 0; }

  int sign() const { return mpq_sgn(v_); }
  bool is_zero() const { return mpq_sgn(v_) == 0; }

  Rat abs() const {
    Rat r;
    mpq_abs(r.v_, v_);
    return r;
  }

  // Floor of the rational as an integer-valued Rat.
  Rat floor() const {
    Rat r;
    mpz_t q;
    mpz_init(q);
    mpz_fdiv_q(q, mpq_numref(v_), mpq_denref(v_));
    mpq_set_z(r.v_, q);
    mpz_clear(q);
    return r;
  }

  Rat ceil() const {
    Rat r;
    mpz_t q;
    mpz_init(q);
    mpz_cdiv_q(q, mpq_numref(v_), mpq_denref(v_));
    mpq_set_z(r.v_, q);
    mpz_clear(q);
    return r;
  }

  bool is_integer() const { return mpz_cmp_ui(mpq_denref(v_), 1) == 0; }

  // Numerator/denominator as long; throws when they do not fit.
  long num_long() const {
    if (!mpz_fits_slong_p(mpq_numref(v_)))
      throw Error(ErrorKind::Invalid, "numerator out of long range");
    return mpz_get_si(mpq_numref(v_));
  }
  long den_long() const {
    if (!mpz_fits_slong_p(mpq_denref(v_)))
      throw Error(ErrorKind::Invalid, "denominator out of long range");
    return mpz_get_si(mpq_denref(v_));
  }

  std::string str() const {
    char* s = mpq_get_str(nullptr, 10, v_);
    std::string out(s);
    std::free(s);
    return out;
  }

  // Exact square root when this is a perfect square of a rational.
  std::optional<Rat> exact_sqrt() const {
    if (sign() < 0) return std::nullopt;
    if (mpz_perfect_square_p(mpq_numref(v_)) == 0 || mpz_perfect_square_p(mpq_denref(v_)) == 0)
      return std::nullopt;
    Rat r;
    mpz_sqrt(mpq_numref(r.v_), mpq_numref(v_));
    mpz_sqrt(mpq_denref(r.v_), mpq_denref(v_));
    mpq_canonicalize(r.v_);
    return r;
  }

  // Rational enclosure [lo, hi] of the square root of a nonnegative value,
  // with hi - lo <= 1/2^scale_bits (up to the denominator factor; the width
  // shrinks geometrically in scale_bits, which is all refinement needs).
  std::pair<Rat, Rat> sqrt_enclosure(long scale_bits) const {
    if (sign() < 0) throw Error(ErrorKind::Invalid, "sqrt enclosure of negative value");
    // sqrt(p/q) = sqrt(p*q)/q; floor-isqrt of p*q*S^2 gives bounds of width 1/(q*S).
    mpz_t n, s;
    mpz_init(n);
    mpz_init(s);
    mpz_mul(n, mpq_numref(v_), mpq_denref(v_));
    mpz_mul_2exp(n, n, 2 * static_cast<unsigned long>(scale_bits));
    mpz_sqrt(s, n);
    Rat lo, hi, den;
    mpz_set(mpq_numref(lo.v_), s);
    mpz_add_ui(s, s, 1);
    mpz_set(mpq_numref(hi.v_), s);
    mpz_mul_2exp(s, mpq_denref(v_), static_cast<unsigned long>(scale_bits));
    mpz_set(mpq_denref(lo.v_), s);
    mpz_set(mpq_denref(hi.v_), s);
    mpq_canonicalize(lo.v_);
    mpq_canonicalize(hi.v_);
    mpz_clear(n);
    mpz_clear(s);
    return {lo, hi};
  }

  std::size_t hash() const {
    auto mix = [](std::size_t h, std::size_t x) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return h;
    };
    std::size_t h = static_cast<std::size_t>(mpz_get_si(mpq_numref(v_)));
    h = mix(h, static_cast<std::size_t>(mpz_get_si(mpq_denref(v_))));
    h = mix(h, static_cast<std::size_t>(mpz_size(mpq_numref(v_))));
    return h;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
  mpq_t v_;
};

inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

// 2^n for n possibly negative.
inline Rat pow2(long n) {
  Rat r(1);
  Rat two(2);
  Rat half(1, 2);
  for (long i = 0; i < n; ++i) r *= two;
  for (long i = 0; i > n; --i) r *= half;
  return r;
}

}  // namespace obkit

template <>
struct std::hash<obkit::Rat> {
  std::size_t operator()(const obkit::Rat& r) const { return r.hash(); }
};
