#pragma once

#include "ffl/character.hpp"
#include "ffl/numeric.hpp"
#include "ffl/poly.hpp"

#include <vector>

namespace ffl {

// The L-polynomial of a quadratic character chi_D for monic squarefree D of
// degree 2g + 1: a polynomial of degree 2g in u with integer coefficients,
// a_n = sum of chi_D(f) over monic f of degree n.
struct LPolynomial {
  Poly D;
  int g = 0;
  std::vector<BigInt> coeffs;  // a_0 .. a_2g

  const FieldSpec& field() const { return D.field(); }
};

// Coefficients via exact character sums over all monic polynomials of each
// degree.  Requires monic squarefree D of odd degree (Error(NotSquareFree),
// Error(EvenDegree)).
LPolynomial l_coefficients_direct(const QuadChar& chi);

// Coefficients via affine point counts on y^2 = D(x).  Only the base-field
// count is available without extension-field arithmetic, which pins down the
// L-polynomial exactly for g <= 1; larger genus throws
// Error(UnsupportedGenus).  The top coefficient at g = 1 is completed by the
// functional equation.
LPolynomial l_coefficients_from_points(const QuadChar& chi);

// Exact functional-equation check a_n q^g == a_{2g-n} q^n for all n.
bool verify_functional_equation(const LPolynomial& lpoly);

// L(1, chi_D) as an exact rational: sum a_n / q^n.
Rational l_value_at_one(const LPolynomial& lpoly);

// L(1, chi_D) by the approximate functional equation, computed from fresh
// character sums rather than stored coefficients:
//   sum_{deg f <= g} chi(f)/|f|  +  q^{-g} sum_{deg f <= g-1} chi(f).
// For squarefree D of degree 2g+1 this equals l_value_at_one exactly.
Rational approx_fe_value(const QuadChar& chi);

// Class number h_D = q^g L(1, chi_D) of the function field of y^2 = D(T).
// Throws Error(NonIntegralClassNumber) or Error(NonPositive) when the
// coefficients cannot come from a genuine character (fault detection).
BigInt class_number(const LPolynomial& lpoly);
BigInt class_number(const QuadChar& chi);

}  // namespace ffl
