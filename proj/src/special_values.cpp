#include "ffl/special_values.hpp"

#include <string>

namespace ffl {

namespace {

// q^e for possibly negative integer e, in high precision.
Real real_qpow(std::uint32_t q, long long e) {
  if (e >= 0) return to_real(bigint_pow(q, static_cast<std::uint64_t>(e)));
  return Real(1) / to_real(bigint_pow(q, static_cast<std::uint64_t>(-e)));
}

// log(1 - x) for 0 <= x < 1/2 via the power series, so factors far below
// the floating-point epsilon of (1 - x) still contribute accurately.
Real log1m(const Real& x) {
  Real term = x;
  Real sum = 0;
  const Real stop = x * Real("1e-55");
  for (int m = 1; m < 1000; ++m) {
    sum += term / m;
    if (term < stop) break;
    term *= x;
  }
  return -sum;
}

}  // namespace

Rational zeta_A(const FieldSpec& field, int s) {
  if (s <= 1) {
    fail(errc::PoleAtOne, "zeta_A has a pole at s = 1; got s = " + std::to_string(s));
  }
  // 1/(1 - q^{1-s}) = q^{s-1}/(q^{s-1} - 1).
  const BigInt p = bigint_pow(field.q, static_cast<std::uint64_t>(s - 1));
  return Rational(p, p - 1);
}

TruncatedEulerProduct euler_product_P(const FieldSpec& field, int s, int cutoff) {
  if (s != 1 && s != 2) {
    fail(errc::Unsupported, "euler_product_P supports s in {1,2}, got s = " + std::to_string(s));
  }
  if (cutoff < 0) fail(errc::Unsupported, "cutoff must be nonnegative");

  Real log_total = 0;
  for (int n = 1; n <= cutoff; ++n) {
    // x_n = 1/((q^n + 1) q^{ns}), the per-factor deficit at degree n.
    const Real qn = to_real(bigint_pow(field.q, static_cast<std::uint64_t>(n)));
    const Real x = Real(1) / ((qn + 1) * real_qpow(field.q, static_cast<long long>(n) * s));
    log_total += to_real(count_irreducible(field, n)) * log1m(x);
  }

  TruncatedEulerProduct out;
  out.cutoff_degree = cutoff;
  out.value = exp(log_total);
  // pi_q(n) <= q^n/n and |log(1-x)| <= 2x for the omitted factors, hence
  // sum_{n>c} pi_q(n)|log(1-x_n)| <= (2/(c+1)) q^{-(c+1)s} / (1 - q^{-s}).
  const Real qs = real_qpow(field.q, -s);
  out.tail_bound = (Real(2) / (cutoff + 1)) *
                   real_qpow(field.q, -static_cast<long long>(cutoff + 1) * s) / (Real(1) - qs);
  return out;
}

Rational mobius_weighted_sum(const FieldSpec& field, int a, int max_deg, const Poly* l,
                             bool prime_weight) {
  if (max_deg < 0) fail(errc::Unsupported, "max_deg must be nonnegative");
  if (l != nullptr) {
    if (l->is_zero()) fail(errc::ZeroModulus, "coprimality filter needs l != 0");
    if (!l->is_monic()) fail(errc::NotMonic, "coprimality filter needs monic l");
  }

  Rational total = 1;  // d = 1 contributes mu = 1, weight 1
  for (int n = 1; n <= max_deg; ++n) {
    Rational level = 0;
    for_each_monic(field, n, [&](const Poly& d) {
      if (!is_squarefree(d)) return;  // mu(d) = 0
      if (l != nullptr && poly_gcd(d, *l).degree() != 0) return;
      const Factorization fact = factor(d);
      Rational term = fact.factors.size() % 2 == 0 ? 1 : -1;
      if (prime_weight) {
        for (const auto& [p, e] : fact.factors) {
          term /= bigint_pow(field.q, static_cast<std::uint64_t>(p.degree())) + 1;
        }
      }
      level += term;
    });
    if (a > 0) level /= bigint_pow(field.q, static_cast<std::uint64_t>(n) * a);
    total += level;
  }
  return total;
}

MainTermBreakdown mean_value_main_term(const FieldSpec& field, int g, FormulaVariant variant,
                                       int cutoff) {
  if (g < 0) fail(errc::Unsupported, "genus must be nonnegative");
  const Real p2 = euler_product_P(field, 2, cutoff).value;
  const Real p1 = euler_product_P(field, 1, cutoff).value;
  const Real abs_d = real_qpow(field.q, 2 * static_cast<long long>(g) + 1);
  const long long half_g = floor_div(g, 2);
  const long long half_gm1 = floor_div(g - 1, 2);
  const Real zeta2 = to_real(zeta_A(field, 2));

  MainTermBreakdown out;
  out.variant = variant;
  out.leading = abs_d * p2;
  out.secondary_1 = -abs_d * real_qpow(field.q, -half_g - 1) * p1;
  if (variant == FormulaVariant::proof_assembled) {
    // |D| q^{-g} q^{floor((g-1)/2)+1} / (zeta_A(2)(1-q)) * P(1), with its
    // explicit minus sign; zeta_A(2)(1-q) = -q, so this cancels secondary_1.
    out.secondary_2 = -abs_d * real_qpow(field.q, -g) * real_qpow(field.q, half_gm1 + 1) /
                      (zeta2 * (Real(1) - Real(field.q))) * p1;
  } else {
    out.secondary_2 =
        -abs_d * p1 / (zeta2 * zeta2 * real_qpow(field.q, static_cast<long long>(g) * half_gm1));
  }
  out.total = out.leading + out.secondary_1 + out.secondary_2;
  return out;
}

Real corollary_average(const FieldSpec& field, int cutoff) {
  return to_real(zeta_A(field, 2)) * euler_product_P(field, 2, cutoff).value;
}

Rational prop2_main_term(const FieldSpec& field, int g, const Poly& l) {
  if (g < 0) fail(errc::Unsupported, "genus must be nonnegative");
  if (l.is_zero()) fail(errc::ZeroModulus, "prop2_main_term needs l != 0");
  if (!l.is_monic()) fail(errc::NotMonic, "prop2_main_term needs monic l");
  // q^{2g+1} / zeta_A(2) * prod_{P|l} |P|/(|P|+1).
  Rational out = bigint_pow(field.q, 2 * static_cast<std::uint64_t>(g) + 1);
  out /= zeta_A(field, 2);
  for (const auto& [p, e] : factor(l).factors) {
    const BigInt np = bigint_pow(field.q, static_cast<std::uint64_t>(p.degree()));
    out *= Rational(np, np + 1);
  }
  return out;
}

BigInt count_coprime_exact(const FieldSpec& field, int d, const Poly& l) {
  if (l.is_zero() || !l.is_monic()) fail(errc::NotMonic, "l must be monic and nonzero");
  if (l.degree() < 1) fail(errc::ConstantInput, "l must be nonconstant");
  if (d < l.degree()) {
    fail(errc::DegreeTooSmall, "closed form needs d >= deg l, got d = " + std::to_string(d));
  }
  // q^d Phi(l)/|l| = q^{d - deg l} Phi(l), an exact integer in this range.
  return bigint_pow(field.q, static_cast<std::uint64_t>(d - l.degree())) * euler_phi(l);
}

BigInt count_coprime_bruteforce(const FieldSpec& field, int d, const Poly& l) {
  if (l.is_zero() || !l.is_monic()) fail(errc::NotMonic, "l must be monic and nonzero");
  if (l.degree() < 1) fail(errc::ConstantInput, "l must be nonconstant");
  if (d < 0) fail(errc::NonPositiveDegree, "degree must be nonnegative");
  BigInt count = 0;
  for_each_monic(field, d, [&](const Poly& f) {
    if (poly_gcd(f, l).degree() == 0) ++count;
  });
  return count;
}

Real monitor_p2_truncation(const FieldSpec& field, int g, int cutoff) {
  if (g < 0) fail(errc::Unsupported, "genus must be nonnegative");
  const Real p2 = euler_product_P(field, 2, cutoff).value;
  const Rational trunc = mobius_weighted_sum(field, 2, static_cast<int>(floor_div(g, 2)),
                                             nullptr, true);
  // |D| |trunc - P(2)| / q^g = q^{g+1} |trunc - P(2)|.
  return real_qpow(field.q, g + 1) * abs(to_real(trunc) - p2);
}

Real monitor_p1_tail(const FieldSpec& field, int g, int cutoff) {
  if (g < 0) fail(errc::Unsupported, "genus must be nonnegative");
  const Real p1 = euler_product_P(field, 1, cutoff).value;
  const Rational trunc = mobius_weighted_sum(field, 1, static_cast<int>(floor_div(g, 2)),
                                             nullptr, true);
  return real_qpow(field.q, g + 1) * abs(p1 - to_real(trunc));
}

Real monitor_p1_tail_scaled(const FieldSpec& field, int g, int cutoff) {
  if (g < 0) fail(errc::Unsupported, "genus must be nonnegative");
  const Real p1 = euler_product_P(field, 1, cutoff).value;
  const long long half_gm1 = floor_div(g - 1, 2);
  const Rational trunc =
      half_gm1 < 0 ? Rational(0)
                   : mobius_weighted_sum(field, 1, static_cast<int>(half_gm1), nullptr, true);
  // |prefactor| = |D| q^{-g} q^{floor((g-1)/2)+1} / q; ratio against q^g
  // collapses to q^{floor((g-1)/2)+1} |P(1) - trunc|.
  return real_qpow(field.q, half_gm1 + 1) * abs(p1 - to_real(trunc));
}

Real monitor_mu_partial_sum(const FieldSpec& field, int g) {
  if (g < 1) fail(errc::Unsupported, "monitor undefined at g = 0 (zero envelope)");
  const long long half_gm1 = floor_div(g - 1, 2);
  const Rational partial =
      mobius_weighted_sum(field, 0, static_cast<int>(half_gm1), nullptr, true);
  // (|D| q^{-g} / (zeta_A(2)(q-1))) |S| / (g q^g) = |S| / g.
  return to_real(abs(partial)) / g;
}

Rational coprime_mu_series_tail(const FieldSpec& field, int g, const Poly& l) {
  if (g < 0) fail(errc::Unsupported, "genus must be nonnegative");
  if (l.is_zero()) fail(errc::ZeroModulus, "coprimality filter needs l != 0");
  if (!l.is_monic()) fail(errc::NotMonic, "coprimality filter needs monic l");
  // Full series: (1/zeta_A(2)) / prod_{P|l}(1 - 1/|P|^2).
  Rational full = Rational(1) / zeta_A(field, 2);
  for (const auto& [p, e] : factor(l).factors) {
    const BigInt np2 = bigint_pow(field.q, 2 * static_cast<std::uint64_t>(p.degree()));
    full *= Rational(np2, np2 - 1);
  }
  return full - mobius_weighted_sum(field, 2, g, &l, false);
}

Rational coprime_mu_series_tail_bound(const FieldSpec& field, int g) {
  if (g < 0) fail(errc::Unsupported, "genus must be nonnegative");
  return Rational(1, bigint_pow(field.q, static_cast<std::uint64_t>(g)) * (field.q - 1));
}

}  // namespace ffl
