#pragma once

#include "ffl/errors.hpp"
#include "ffl/field.hpp"
#include "ffl/numeric.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ffl {

// Dense univariate polynomial over a prime field F_q.  Coefficients are
// stored in ascending order (c[0] is the constant term) with no trailing
// zeros; the zero polynomial has an empty coefficient vector.
class Poly {
public:
  Poly() = default;

  // Reduces every coefficient mod q and strips trailing zeros.
  Poly(FieldSpec field, std::vector<std::uint32_t> coeffs);

  static Poly zero(const FieldSpec& field) { return Poly(field, {}); }
  static Poly one(const FieldSpec& field) { return Poly(field, {1}); }
  static Poly constant(const FieldSpec& field, std::uint32_t v) { return Poly(field, {v}); }
  static Poly variable(const FieldSpec& field) { return Poly(field, {0, 1}); }
  static Poly from_coeffs(const FieldSpec& field, std::vector<std::uint32_t> coeffs) {
    return Poly(field, std::move(coeffs));
  }

  const FieldSpec& field() const { return field_; }
  const std::vector<std::uint32_t>& coeffs() const { return c_; }

  bool is_zero() const { return c_.empty(); }

  // Degree of a nonzero polynomial; throws Error(ZeroPolynomial) on zero
  // because deg 0 is taken by nonzero constants and -inf does not fit an int.
  int degree() const;

  // c_i, with zero returned beyond the stored degree.
  std::uint32_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }

  std::uint32_t leading_coeff() const;
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  // Horner evaluation at a point of F_q.
  std::uint32_t eval(std::uint32_t x) const;

  // |f| = q^deg f, and |0| = 0.
  BigInt norm() const;

  Poly scaled(std::uint32_t s) const;  // s * f
  Poly monic() const;                  // f / leading_coeff; throws on zero

  bool operator==(const Poly& other) const { return field_ == other.field_ && c_ == other.c_; }

  Poly operator+(const Poly& other) const;
  Poly operator-(const Poly& other) const;
  Poly operator-() const;
  Poly operator*(const Poly& other) const;

private:
  FieldSpec field_;
  std::vector<std::uint32_t> c_;

  void normalize();
};

// Deterministic total order (degree first, then coefficients from the top).
bool poly_less(const Poly& a, const Poly& b);

struct DivRem {
  Poly quotient;
  Poly remainder;
};

// Euclidean division a = q*b + r with deg r < deg b.  Throws
// Error(DivisionByZero) when b is zero.
DivRem poly_divrem(const Poly& a, const Poly& b);
Poly poly_mod(const Poly& a, const Poly& b);

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& mod);
Poly poly_powmod(const Poly& base, const BigInt& exp, const Poly& mod);

// Monic gcd; throws Error(BothZero) when both inputs are zero.
Poly poly_gcd(const Poly& a, const Poly& b);

Poly derivative(const Poly& f);

// Square-freeness over a prime field.  A nonconstant f with f' == 0 is a
// p-th power, hence not squarefree.  Throws Error(ZeroPolynomial) on zero.
bool is_squarefree(const Poly& f);

// Rabin irreducibility test.  Constants are rejected with
// Error(ConstantInput); the zero polynomial with Error(ZeroPolynomial).
bool is_irreducible(const Poly& f);

// f = unit * prod factors[i].first ^ factors[i].second, with monic
// irreducible factors sorted by poly_less.
struct Factorization {
  FieldSpec field;
  std::uint32_t unit = 1;
  std::vector<std::pair<Poly, int>> factors;
};

Factorization factor(const Poly& f);
Poly factorization_product(const Factorization& fact);

// Moebius function of a nonzero polynomial (units count as 1).
int mobius(const Poly& f);

// #(A/fA)^* for nonconstant f.  Throws Error(ConstantInput) on units.
BigInt euler_phi(const Poly& f);

// Number of monic irreducibles of degree n (prime polynomial theorem).
// Throws Error(NonPositiveDegree) for n <= 0.
BigInt count_irreducible(const FieldSpec& field, int n);

// All monic irreducibles of degree d in enumeration order; cached per field.
const std::vector<Poly>& irreducible_table(const FieldSpec& field, int d);

// --- enumeration of monic polynomials --------------------------------------
//
// Monic polynomials of degree d are indexed by 0 <= i < q^d: the lower
// coefficients are the little-endian base-q digits of i (c_j = digit j) and
// c_d = 1.  Enumeration order means increasing index.

BigInt monic_count(const FieldSpec& field, int d);
Poly monic_at(const FieldSpec& field, int d, std::uint64_t index);
std::uint64_t monic_index(const Poly& f);  // throws Error(NotMonic)

namespace detail {
inline std::uint64_t monic_count_u64(const FieldSpec& field, int d) {
  std::uint64_t n = 1;
  for (int i = 0; i < d; ++i) n *= field.q;
  return n;
}
}  // namespace detail

// Visits monic polynomials of degree d with indices in [lo, hi).
template <typename Fn>
void for_each_monic_range(const FieldSpec& field, int d, std::uint64_t lo, std::uint64_t hi,
                          Fn&& fn) {
  if (d < 0) fail(errc::NonPositiveDegree, "monic enumeration needs d >= 0");
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(d) + 1, 0);
  digits[static_cast<std::size_t>(d)] = 1;
  std::uint64_t rest = lo;
  for (int j = 0; j < d; ++j) {
    digits[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(rest % field.q);
    rest /= field.q;
  }
  for (std::uint64_t i = lo; i < hi; ++i) {
    fn(Poly(field, digits));
    // Odometer increment of the lower digits.
    for (int j = 0; j < d; ++j) {
      auto& dj = digits[static_cast<std::size_t>(j)];
      if (++dj < field.q) break;
      dj = 0;
    }
  }
}

template <typename Fn>
void for_each_monic(const FieldSpec& field, int d, Fn&& fn) {
  for_each_monic_range(field, d, 0, detail::monic_count_u64(field, d),
                       std::forward<Fn>(fn));
}

// --- the hyperelliptic ensemble ---------------------------------------------
//
// The ensemble at genus g consists of all monic squarefree polynomials of
// degree 2g + 1 over F_q (q = 1 mod 4).  Its exact size is q for g = 0 and
// (q - 1) q^{2g} for g >= 1.

BigInt ensemble_size(const FieldSpec& field, int g);

template <typename Fn>
void for_each_ensemble(const FieldSpec& field, int g, Fn&& fn) {
  if (!field.ensemble_ready()) {
    fail(errc::BadFieldForEnsemble,
         "ensemble requires q = 1 (mod 4), got q = " + std::to_string(field.q));
  }
  if (g < 0) fail(errc::Unsupported, "genus must be nonnegative");
  for_each_monic(field, 2 * g + 1, [&](const Poly& f) {
    if (is_squarefree(f)) fn(f);
  });
}

// --- text round trip ---------------------------------------------------------

// "c0,c1,...,cd" (ascending coefficients).
std::string to_coeff_string(const Poly& f);

// Human-readable, highest degree first, e.g. "T^3+2*T+1".
std::string to_pretty_string(const Poly& f);

// Accepts either format above; also tolerates '-' signs and spaces.
// Throws Error(ParseError) on malformed input.
Poly parse_poly(const FieldSpec& field, const std::string& text);

}  // namespace ffl
