#pragma once

#include "ffl/numeric.hpp"
#include "ffl/poly.hpp"

namespace ffl {

// Quadratic character chi_D attached to a monic polynomial D over F_q
// (q odd): chi_D(f) is the Jacobi-style quadratic residue symbol (D/f).
struct QuadChar {
  Poly modulus;  // D

  const FieldSpec& field() const { return modulus.field(); }
};

// Validates D (monic, nonzero, odd characteristic; squarefree unless the
// caller opts out for experiments on degenerate characters).
QuadChar make_quad_char(const Poly& D, bool require_squarefree = true);

// Residue symbol (D/P) for monic irreducible P: 0 when P | D, otherwise
// +1 or -1 according to whether D is a square in the residue field.
// Throws Error(NotIrreducible) when P is not irreducible.
int symbol_irreducible(const Poly& D, const Poly& P);

// Multiplicative extension (D/f) over the factorization of monic f.
// (D/1) == 1; throws Error(ZeroDenominator) when f == 0, Error(NotMonic)
// when f is not monic.
int symbol(const Poly& D, const Poly& f);

// Same value as symbol(), computed without factoring via quadratic
// reciprocity and a Euclidean remainder loop.  The two implementations are
// deliberately independent and cross-checked in the tests.
int symbol_euclidean(const Poly& D, const Poly& f);

// a_n(chi) = sum of chi(f) over monic f of degree n, exactly.
BigInt char_sum(const QuadChar& chi, int n);

// Weil bound check for a coefficient a_n of the L-polynomial of chi_D:
// |a_n| <= binom(deg D - 1, n) q^{n/2}.  The comparison is exact
// (squared, in integers); `bound` is reported for display only.
struct WeilReport {
  BigInt lhs;
  Real bound;
  bool ok = false;
};

WeilReport check_weil_bound(const FieldSpec& field, const BigInt& a_n, int deg_d, int n);
WeilReport check_weil_bound(const QuadChar& chi, int n);

}  // namespace ffl
