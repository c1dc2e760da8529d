#pragma once

#include "ffl/character.hpp"
#include "ffl/lfunction.hpp"
#include "ffl/numeric.hpp"
#include "ffl/poly.hpp"
#include "ffl/special_values.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ffl {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

enum class RunMode { full, sample };

struct ExperimentConfig {
  FieldSpec field;
  int g_min = 1;
  int g_max = 1;
  RunMode mode = RunMode::full;
  std::uint64_t sample_size = 0;  // sample mode
  std::uint64_t seed = 0;         // sample mode
  int cutoff = 40;                // Euler-product truncation degree
  int workers = 1;
  std::uint64_t budget = kDefaultBudget;  // work units: #polys x coefficient count
};

// One ensemble row.  In full mode the sums are exact (sum_h has denominator
// 1); in sample mode they are the unbiased estimates ensemble_size * mean,
// still exact rationals given the sample, with a standard error attached.
struct MomentRow {
  int g = 0;
  BigInt ensemble_size;
  Rational sum_L;
  Rational sum_h;
  Real main_proof;       // proof_assembled main-term total
  Real main_literal;     // theorem_literal main-term total
  Real corollary;        // predicted ensemble average of L(1, chi_D)
  Real rel_err_leading;  // |sum_L / (|D| P(2)) - 1|
  Real err_over_2qg;     // (sum_L - main_proof) / (2q)^g, signed
  bool sampled = false;
  Real std_error;  // sample mode; 0 in full mode
};

struct MomentReport {
  ExperimentConfig config;
  std::vector<MomentRow> rows;
};

// Exhaustive (full) or seeded-sample mean-value experiment over the
// ensembles g_min..g_max.  Deterministic for a fixed config, including
// across worker counts.  Throws Error(BudgetExceeded) when the work-unit
// estimate exceeds cfg.budget, Error(BadField) when q != 1 (mod 4).
MomentReport run_mean_value(const ExperimentConfig& cfg);

std::string to_csv(const MomentReport& report);
std::string to_json(const MomentReport& report);

// Exact double sums over D in the ensemble and non-square monic f:
//   non1 = sum_D sum_{n <= g} q^{-n} sum_{deg f = n, f not a square} chi_D(f)
//   non2 = q^{-g} sum_D sum_{m <= g-1} sum_{deg f = m, f not a square} chi_D(f)
// with ratios against the (2q)^g envelope.
struct NonsquareReport {
  std::uint32_t q = 0;
  int g = 0;
  Rational non1;
  Rational non2;
  Real ratio1;
  Real ratio2;
};

NonsquareReport run_nonsquare_monitor(const FieldSpec& field, int g,
                                      std::uint64_t budget = kDefaultBudget);
std::string to_json(const NonsquareReport& report);

// Exact count of ensemble members coprime to l versus the closed-form main
// term; normalized_error = |error| / (sqrt(|D|) Phi(l)/|l|).
struct Prop2Report {
  std::uint32_t q = 0;
  int g = 0;
  Poly l;
  BigInt count;
  Rational main_term;
  Rational error;
  Real normalized_error;
};

Prop2Report run_prop2_check(const FieldSpec& field, int g, const Poly& l,
                            std::uint64_t budget = kDefaultBudget);
std::string to_json(const Prop2Report& report);

// Cross-validation web: every identity the library promises, run over the
// ensembles up to g_max, with failures reported as data (not exceptions).
struct InvariantResult {
  std::string name;
  bool pass = false;
  std::uint64_t checked = 0;
  std::string counterexample;  // empty when pass
};

struct VerifyReport {
  std::uint32_t q = 0;
  int g_max = 0;
  std::uint64_t discriminants = 0;
  bool all_pass = false;
  std::vector<InvariantResult> invariants;
};

VerifyReport run_verify_suite(const FieldSpec& field, int g_max,
                              std::uint64_t budget = kDefaultBudget);
std::string to_json(const VerifyReport& report);
std::string to_text(const VerifyReport& report);

// L-polynomial via the table-driven engine: chi_D(P) for all irreducible P
// with deg P <= 2g by synthetic division against cached symbol tables, then
// a_n by multiplicative convolution.  Must agree with l_coefficients_direct.
LPolynomial l_coefficients_fast(const QuadChar& chi);

// --- engine scan (building block for the drivers and the acceptance harness)
//
// Visits every squarefree monic D of degree 2g+1 whose enumeration index
// lies in [lo, hi), handing the callback:
//   - D itself,
//   - a_0..a_N (N = max_coeff_deg) of its L-polynomial, exact in int64,
//   - the number of distinct irreducible divisors of D per degree 1..N,
//   - chi_D(P) for every irreducible P of degree <= N, flattened in table
//     order (all degree-1 primes, then degree-2, ...).
// Buffers are reused between calls; copy anything that must outlive them.
struct ScanView {
  const Poly& D;
  const std::vector<std::int64_t>& coeffs;
  const std::vector<int>& prime_divisors_by_deg;  // index = degree, [0] unused
  const std::vector<std::int8_t>& symbols;
};

void scan_ensemble(const FieldSpec& field, int g, int max_coeff_deg, std::uint64_t lo,
                   std::uint64_t hi, const std::function<void(const ScanView&)>& fn);

// Number of monic polynomials of degree 2g+1 as the scan index space.
std::uint64_t scan_index_count(const FieldSpec& field, int g);

}  // namespace ffl
