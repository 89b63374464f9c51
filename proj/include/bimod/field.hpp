#pragma once

// Exact ground fields.
//
// A field type K provides
//   K::Element, zero(), one(), from_int(), parse(), format(), name()
// and the free functions is_zero(), inverse() and sub_mul() on its elements.
// Elements of the prime field carry their modulus so that the ordinary
// arithmetic operators can be used in generic code.

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "bimod/error.hpp"

namespace bimod {

// ---------------------------------------------------------------- rationals

struct Rationals {
  using Element = mpq_class;

  Element zero() const { return Element(0); }
  Element one() const { return Element(1); }
  Element from_int(long long v) const {
    Element e;
    mpz_set_si(e.get_num_mpz_t(), static_cast<long>(v));
    return e;
  }

  /// Accepts "p", "-p", "p/q" with q != 0; the result is canonicalized.
  Element parse(std::string_view text) const {
    std::string s(text);
    if (s.empty()) throw ParseError("empty rational literal");
    Element e;
    if (e.set_str(s, 10) != 0) throw ParseError("invalid rational literal '" + s + "'");
    if (e.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    e.canonicalize();
    return e;
  }

  std::string format(const Element& e) const { return e.get_str(); }
  std::string name() const { return "Q"; }
  std::uint64_t characteristic() const { return 0; }

  friend bool operator==(const Rationals&, const Rationals&) { return true; }
};

inline bool is_zero(const mpq_class& x) { return sgn(x) == 0; }

inline mpq_class inverse(const mpq_class& x) {
  if (is_zero(x)) throw Error("division by zero");
  mpq_class r;
  mpq_inv(r.get_mpq_t(), x.get_mpq_t());
  return r;
}

/// a -= f * b without temporaries escaping into the caller's loop.
inline void sub_mul(mpq_class& a, const mpq_class& f, const mpq_class& b) {
  thread_local mpq_class tmp;
  mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), b.get_mpq_t());
  mpq_sub(a.get_mpq_t(), a.get_mpq_t(), tmp.get_mpq_t());
}

inline void add_mul(mpq_class& a, const mpq_class& f, const mpq_class& b) {
  thread_local mpq_class tmp;
  mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), b.get_mpq_t());
  mpq_add(a.get_mpq_t(), a.get_mpq_t(), tmp.get_mpq_t());
}

// ------------------------------------------------------------- prime fields

/// Residue modulo a prime. A modulus of zero never occurs in a valid element.
struct Residue {
  std::uint64_t value = 0;
  std::uint64_t modulus = 0;

  friend bool operator==(const Residue& a, const Residue& b) {
    return a.value == b.value && a.modulus == b.modulus;
  }
};

namespace detail {

inline std::uint64_t common_modulus(const Residue& a, const Residue& b) {
  if (a.modulus != b.modulus) throw DimensionMismatch("residues of different moduli");
  return a.modulus;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1U;
  }
  return r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // Deterministic Miller-Rabin bases for 64-bit integers.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace detail

inline Residue operator+(const Residue& a, const Residue& b) {
  auto p = detail::common_modulus(a, b);
  auto s = a.value + b.value;
  if (s >= p || s < a.value) s -= p;
  return {s, p};
}
inline Residue operator-(const Residue& a) { return {a.value == 0 ? 0 : a.modulus - a.value, a.modulus}; }
inline Residue operator-(const Residue& a, const Residue& b) { return a + (-b); }
inline Residue operator*(const Residue& a, const Residue& b) {
  auto p = detail::common_modulus(a, b);
  return {detail::mulmod(a.value, b.value, p), p};
}
inline bool is_zero(const Residue& x) { return x.value == 0; }
inline Residue inverse(const Residue& x) {
  if (x.value == 0) throw Error("division by zero");
  return {detail::powmod(x.value, x.modulus - 2, x.modulus), x.modulus};
}
inline Residue operator/(const Residue& a, const Residue& b) { return a * inverse(b); }
inline Residue& operator+=(Residue& a, const Residue& b) { return a = a + b; }
inline Residue& operator-=(Residue& a, const Residue& b) { return a = a - b; }
inline Residue& operator*=(Residue& a, const Residue& b) { return a = a * b; }
inline bool operator!=(const Residue& a, const Residue& b) { return !(a == b); }
inline void sub_mul(Residue& a, const Residue& f, const Residue& b) { a = a - f * b; }
inline void add_mul(Residue& a, const Residue& f, const Residue& b) { a = a + f * b; }
inline std::ostream& operator<<(std::ostream& os, const Residue& r) { return os << r.value; }

struct PrimeField {
  using Element = Residue;

  std::uint64_t modulus = 2;

  PrimeField() = default;
  explicit PrimeField(std::uint64_t p) : modulus(p) {
    if (!detail::is_prime(p)) throw ValidationError("modulus " + std::to_string(p) + " is not prime");
  }

  Element zero() const { return {0, modulus}; }
  Element one() const { return {1 % modulus, modulus}; }
  Element from_int(long long v) const {
    auto p = static_cast<long long>(modulus);
    long long r = v % p;
    if (r < 0) r += p;
    return {static_cast<std::uint64_t>(r), modulus};
  }

  /// Integer literals, reduced modulo p; "a/b" is read as a * b^{-1}.
  Element parse(std::string_view text) const {
    std::string s(text);
    if (s.empty()) throw ParseError("empty residue literal");
    mpq_class q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw ParseError("invalid residue literal '" + s + "'");
    q.canonicalize();
    mpz_class num = q.get_num() % mpz_class(static_cast<unsigned long>(modulus));
    mpz_class den = q.get_den() % mpz_class(static_cast<unsigned long>(modulus));
    if (den == 0) throw ParseError("denominator of '" + s + "' vanishes modulo " + std::to_string(modulus));
    if (num < 0) num += static_cast<unsigned long>(modulus);
    Element n{num.get_ui(), modulus};
    Element d{den.get_ui(), modulus};
    return n / d;
  }

  std::string format(const Element& e) const { return std::to_string(e.value); }
  std::string name() const { return "F_" + std::to_string(modulus); }
  std::uint64_t characteristic() const { return modulus; }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.modulus == b.modulus; }
};

}  // namespace bimod
