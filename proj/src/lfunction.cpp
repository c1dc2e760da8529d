#include "ffl/lfunction.hpp"

namespace ffl {

namespace {

int genus_of(const QuadChar& chi) {
  const Poly& D = chi.modulus;
  if (D.is_zero()) fail(errc::ZeroPolynomial, "character modulus must be nonzero");
  if (!D.is_monic()) fail(errc::NotMonic, "character modulus must be monic");
  if (!is_squarefree(D)) fail(errc::NotSquareFree, "L-polynomial needs squarefree D");
  const int deg = D.degree();
  if (deg % 2 == 0) fail(errc::EvenDegree, "only odd-degree D is supported");
  return (deg - 1) / 2;
}

}  // namespace

LPolynomial l_coefficients_direct(const QuadChar& chi) {
  const int g = genus_of(chi);
  LPolynomial out;
  out.D = chi.modulus;
  out.g = g;
  out.coeffs.reserve(static_cast<std::size_t>(2 * g) + 1);
  for (int n = 0; n <= 2 * g; ++n) out.coeffs.push_back(char_sum(chi, n));
  return out;
}

LPolynomial l_coefficients_from_points(const QuadChar& chi) {
  const int g = genus_of(chi);
  if (g > 1) {
    fail(errc::UnsupportedGenus,
         "point-count route needs extension fields for g >= 2, got g = " + std::to_string(g));
  }
  LPolynomial out;
  out.D = chi.modulus;
  out.g = g;
  if (g == 0) {
    out.coeffs = {BigInt(1)};
    return out;
  }
  const FieldSpec& field = chi.field();
  BigInt a1 = 0;
  for (std::uint32_t x = 0; x < field.q; ++x) {
    a1 += residue_symbol_fq(chi.modulus.eval(x), field.q);
  }
  // a_2 = q a_0 by the functional equation; only a_1 carries point data.
  out.coeffs = {BigInt(1), a1, BigInt(field.q)};
  return out;
}

bool verify_functional_equation(const LPolynomial& lpoly) {
  const int g = lpoly.g;
  if (lpoly.coeffs.size() != static_cast<std::size_t>(2 * g) + 1) return false;
  const BigInt qg = bigint_pow(lpoly.field().q, static_cast<std::uint64_t>(g));
  for (int n = 0; n <= 2 * g; ++n) {
    const BigInt qn = bigint_pow(lpoly.field().q, static_cast<std::uint64_t>(n));
    if (lpoly.coeffs[static_cast<std::size_t>(n)] * qg !=
        lpoly.coeffs[static_cast<std::size_t>(2 * g - n)] * qn) {
      return false;
    }
  }
  return true;
}

Rational l_value_at_one(const LPolynomial& lpoly) {
  const int g = lpoly.g;
  BigInt num = 0;
  for (int n = 0; n <= 2 * g; ++n) {
    num += lpoly.coeffs[static_cast<std::size_t>(n)] *
           bigint_pow(lpoly.field().q, static_cast<std::uint64_t>(2 * g - n));
  }
  return Rational(num, bigint_pow(lpoly.field().q, 2 * static_cast<std::uint64_t>(g)));
}

Rational approx_fe_value(const QuadChar& chi) {
  const int g = genus_of(chi);
  const std::uint32_t q = chi.field().q;
  Rational total = 0;
  for (int n = 0; n <= g; ++n) {
    total += Rational(char_sum(chi, n), bigint_pow(q, static_cast<std::uint64_t>(n)));
  }
  Rational dual = 0;
  for (int m = 0; m + 1 <= g; ++m) dual += Rational(char_sum(chi, m));
  total += dual / Rational(bigint_pow(q, static_cast<std::uint64_t>(g)));
  return total;
}

BigInt class_number(const LPolynomial& lpoly) {
  const int g = lpoly.g;
  const BigInt qg = bigint_pow(lpoly.field().q, static_cast<std::uint64_t>(g));
  BigInt scaled = 0;  // q^{2g} L(1) = sum a_n q^{2g-n}
  for (int n = 0; n <= 2 * g; ++n) {
    scaled += lpoly.coeffs[static_cast<std::size_t>(n)] *
              bigint_pow(lpoly.field().q, static_cast<std::uint64_t>(2 * g - n));
  }
  if (scaled <= 0) fail(errc::NonPositive, "q^g L(1) must be positive");
  if (scaled % qg != 0) {
    fail(errc::NonIntegralClassNumber, "q^g L(1) is not an integer");
  }
  return scaled / qg;
}

BigInt class_number(const QuadChar& chi) {
  return class_number(l_coefficients_direct(chi));
}

}  // namespace ffl
