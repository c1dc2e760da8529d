#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace ffl {

// Exact arbitrary-precision integer.  All counting and coefficient arithmetic
// in the library is exact; floating point only enters at the reporting layer.
using BigInt = boost::multiprecision::cpp_int;

// Exact rational number (normalized, sign on numerator).
using Rational = boost::multiprecision::cpp_rational;

// High-precision binary float (50 decimal digits) for Euler products,
// relative errors and other analytic quantities.
using Real = boost::multiprecision::cpp_bin_float_50;

inline Real to_real(const BigInt& x) { return Real(x); }

inline Real to_real(const Rational& x) {
  return Real(boost::multiprecision::numerator(x)) /
         Real(boost::multiprecision::denominator(x));
}

// Exact binomial coefficient C(n, k) for n >= 0; zero when k < 0 or k > n.
inline BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;
  }
  return result;
}

// Floor division for possibly-negative numerators (C++ '/' truncates toward
// zero; we need floor(-1/2) == -1 for degree bookkeeping at genus 0).
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// q^e as an exact integer, for e >= 0.
inline BigInt bigint_pow(std::uint32_t base, std::uint64_t exp) {
  BigInt result = 1;
  BigInt b = base;
  while (exp > 0) {
    if (exp & 1) result *= b;
    b *= b;
    exp >>= 1;
  }
  return result;
}

}  // namespace ffl
