#include "ffl/character.hpp"

#include <unordered_map>

namespace ffl {

namespace {

void require_odd_q(const FieldSpec& field) {
  if (field.q % 2 == 0) {
    fail(errc::EvenCharacteristic, "quadratic characters need odd q");
  }
}

// (D/P) without the irreducibility check, for internal callers that already
// know P is prime (e.g. entries of irreducible_table).
int symbol_prime_unchecked(const Poly& D, const Poly& P) {
  const std::uint32_t q = P.field().q;
  const int d = P.degree();
  if (d == 1) {
    // P = T - a; evaluate and use the residue symbol of F_q.
    const std::uint32_t a = fq_neg(P.coeff(0), q);
    return residue_symbol_fq(D.eval(a), q);
  }
  const Poly r = poly_mod(D, P);
  if (r.is_zero()) return 0;
  const BigInt exp = (bigint_pow(q, static_cast<std::uint64_t>(d)) - 1) / 2;
  const Poly s = poly_powmod(r, exp, P);
  if (s == Poly::one(P.field())) return 1;
  if (s == -Poly::one(P.field())) return -1;
  fail(errc::NotIrreducible, "residue symbol did not land in {1,-1}; modulus not prime?");
}

}  // namespace

QuadChar make_quad_char(const Poly& D, bool require_squarefree) {
  require_odd_q(D.field());
  if (D.is_zero()) fail(errc::ZeroPolynomial, "character modulus must be nonzero");
  if (!D.is_monic()) fail(errc::NotMonic, "character modulus must be monic");
  if (require_squarefree && !is_squarefree(D)) {
    fail(errc::NotSquareFree, "character modulus must be squarefree");
  }
  return QuadChar{D};
}

int symbol_irreducible(const Poly& D, const Poly& P) {
  require_odd_q(P.field());
  if (!P.is_monic()) fail(errc::NotMonic, "symbol denominator must be monic");
  if (!is_irreducible(P)) fail(errc::NotIrreducible, "symbol denominator must be irreducible");
  return symbol_prime_unchecked(D, P);
}

int symbol(const Poly& D, const Poly& f) {
  require_odd_q(D.field());
  if (f.is_zero()) fail(errc::ZeroDenominator, "symbol denominator must be nonzero");
  if (!f.is_monic()) fail(errc::NotMonic, "symbol denominator must be monic");
  if (f.degree() == 0) return 1;
  int out = 1;
  for (const auto& [p, e] : factor(f).factors) {
    const int v = symbol_prime_unchecked(D, p);
    if (v == 0) return 0;
    if (e % 2 == 1) out *= v;
  }
  return out;
}

int symbol_euclidean(const Poly& D, const Poly& f) {
  require_odd_q(D.field());
  if (f.is_zero()) fail(errc::ZeroDenominator, "symbol denominator must be nonzero");
  if (!f.is_monic()) fail(errc::NotMonic, "symbol denominator must be monic");

  const std::uint32_t q = f.field().q;
  const bool sign_active = ((q - 1) / 2) % 2 == 1;  // q = 3 mod 4

  int out = 1;
  Poly num = D;
  Poly den = f;
  while (den.degree() > 0) {
    num = poly_mod(num, den);
    if (num.is_zero()) return 0;
    // Split off the unit: (c*m / den) = (c/den) * (m/den) with m monic, and
    // (c/den) = chi_q(c)^{deg den} for a constant c.
    const std::uint32_t c = num.leading_coeff();
    if (den.degree() % 2 == 1) out *= residue_symbol_fq(c, q);
    const Poly m = num.monic();
    if (m.degree() == 0) return out;
    // Reciprocity for monic coprime pairs: (m/den) = s * (den/m) with
    // s = (-1)^{(q-1)/2 * deg m * deg den}.
    if (sign_active && m.degree() % 2 == 1 && den.degree() % 2 == 1) out = -out;
    num = den;
    den = m;
  }
  return out;
}

BigInt char_sum(const QuadChar& chi, int n) {
  if (n < 0) fail(errc::NonPositiveDegree, "char_sum needs n >= 0");
  if (n == 0) return 1;

  // Symbols of primes are cached per call: every monic f of degree n is
  // factored, so each prime is needed many times.
  std::unordered_map<std::uint64_t, int> prime_symbol;
  const auto prime_key = [](const Poly& p) {
    return (static_cast<std::uint64_t>(p.degree()) << 48) | monic_index(p);
  };

  BigInt total = 0;
  for_each_monic(chi.field(), n, [&](const Poly& f) {
    int value = 1;
    for (const auto& [p, e] : factor(f).factors) {
      auto [it, inserted] = prime_symbol.try_emplace(prime_key(p), 0);
      if (inserted) it->second = symbol_prime_unchecked(chi.modulus, p);
      if (it->second == 0) {
        value = 0;
        break;
      }
      if (e % 2 == 1) value *= it->second;
    }
    total += value;
  });
  return total;
}

WeilReport check_weil_bound(const FieldSpec& field, const BigInt& a_n, int deg_d, int n) {
  if (n >= deg_d) {
    fail(errc::DegreeTooLarge, "Weil bound applies to coefficients below deg D");
  }
  if (n < 0) fail(errc::NonPositiveDegree, "coefficient index must be nonnegative");
  const BigInt binom = binomial(deg_d - 1, n);
  const BigInt rhs_sq = binom * binom * bigint_pow(field.q, static_cast<std::uint64_t>(n));
  WeilReport report;
  report.lhs = a_n;
  report.bound = to_real(binom) * sqrt(to_real(bigint_pow(field.q, static_cast<std::uint64_t>(n))));
  report.ok = a_n * a_n <= rhs_sq;
  return report;
}

WeilReport check_weil_bound(const QuadChar& chi, int n) {
  return check_weil_bound(chi.field(), char_sum(chi, n), chi.modulus.degree(), n);
}

}  // namespace ffl
