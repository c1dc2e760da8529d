#pragma once

#include "ffl/errors.hpp"

#include <cstdint>

namespace ffl {

// Description of a finite field F_q with q = p^e.  Only prime fields (e == 1)
// are implemented; the extension-field plumbing is validated up front so the
// failure is a clear diagnostic rather than silent nonsense.
struct FieldSpec {
  std::uint32_t p = 0;  // characteristic (prime)
  std::uint32_t e = 1;  // extension degree
  std::uint32_t q = 0;  // p^e

  bool operator==(const FieldSpec&) const = default;

  // True when the field can index a hyperelliptic ensemble: q = 1 (mod 4),
  // which also makes the reciprocity sign for quadratic symbols trivial.
  bool ensemble_ready() const { return q % 4 == 1; }
};

// Validates and constructs a field description.  Throws Error(NotPrime) when
// p is composite and Error(Unsupported) when e > 1.
FieldSpec make_field(std::uint32_t p, std::uint32_t e = 1);

// An element of F_q, tagged with its field.  Raw uint32_t values are used in
// the hot paths; this wrapper exists for API clarity at module boundaries.
struct FieldElement {
  std::uint32_t value = 0;
  FieldSpec spec;

  bool operator==(const FieldElement&) const = default;
};

// --- raw modular arithmetic on canonical representatives [0, q) ------------

inline std::uint32_t fq_add(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  std::uint32_t s = a + b;
  return s >= q ? s - q : s;
}

inline std::uint32_t fq_sub(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  return a >= b ? a - b : a + q - b;
}

inline std::uint32_t fq_neg(std::uint32_t a, std::uint32_t q) {
  return a == 0 ? 0 : q - a;
}

inline std::uint32_t fq_mul(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % q);
}

// a^n mod q with 0^0 == 1.
std::uint32_t fq_pow(std::uint32_t a, std::uint64_t n, std::uint32_t q);

// Multiplicative inverse; throws Error(DivisionByZero) on zero input.
std::uint32_t fq_inv(std::uint32_t a, std::uint32_t q);

// --- element-level helpers --------------------------------------------------

FieldElement field_add(FieldElement a, FieldElement b);
FieldElement field_mul(FieldElement a, FieldElement b);
FieldElement field_pow(FieldElement a, std::uint64_t n);
FieldElement field_inv(FieldElement a);

// Quadratic residue symbol on F_q (odd q): 0 for zero, +1 for nonzero
// squares, -1 for non-squares.  Computed as a^((q-1)/2).  Throws
// Error(OddCharacteristicRequired) when q is even.
int residue_symbol_fq(std::uint32_t a, std::uint32_t q);
int residue_symbol_fq(const FieldElement& a);

}  // namespace ffl
