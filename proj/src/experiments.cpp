#include "ffl/experiments.hpp"

#include "ffl/errors.hpp"
#include "ffl/field.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ffl {

namespace {

// ---------------------------------------------------------------------------
// Symbol tables.  For each prime degree d we tabulate the quadratic residue
// symbol (r / P) for every residue r mod P (encoded as sum r_i q^i) and every
// monic irreducible P of degree d.  A discriminant D is then resolved against
// a prime by one synthetic division and one table lookup.

struct DegreeTable {
  int d = 0;
  std::uint64_t qd = 1;  // q^d
  std::size_t prime_count = 0;
  std::vector<std::uint32_t> pcoef;  // prime_count * d low coefficients
  std::vector<std::int8_t> sym;      // prime_count * qd residue symbols
};

struct TableSet {
  FieldSpec field;
  int max_deg = 0;
  std::vector<const DegreeTable*> deg;   // index by degree, [0] unused
  std::vector<std::size_t> sym_offset;   // per-discriminant symbol buffer offsets
  std::size_t total_primes = 0;
};

std::map<std::pair<std::uint32_t, int>, std::unique_ptr<DegreeTable>> g_tables;
std::uint64_t g_table_bytes = 0;
std::mutex g_tables_mutex;

constexpr std::uint64_t kTableMemoryCap = std::uint64_t(1) << 30;  // 1 GiB

// Reduces buf (degree <= top_deg) modulo the monic prime with low
// coefficients pc (degree d) and returns the residue code sum buf[i] q^i.
inline std::uint64_t reduce_code(std::uint32_t* buf, int top_deg, const std::uint32_t* pc,
                                 int d, std::uint32_t q) {
  for (int k = top_deg; k >= d; --k) {
    const std::uint32_t c = buf[k];
    if (c == 0) continue;
    const std::uint32_t neg = q - c;
    for (int j = 0; j < d; ++j) buf[k - d + j] = (buf[k - d + j] + neg * pc[j]) % q;
  }
  std::uint64_t code = 0;
  for (int j = d - 1; j >= 0; --j) code = code * q + buf[j];
  return code;
}

std::unique_ptr<DegreeTable> build_degree_table(const FieldSpec& field, int d) {
  const std::uint32_t q = field.q;
  const BigInt qd_big = bigint_pow(q, static_cast<std::uint64_t>(d));
  const BigInt bytes = count_irreducible(field, d) * qd_big;
  if (BigInt(g_table_bytes) + bytes > BigInt(kTableMemoryCap))
    fail(errc::BudgetExceeded, "symbol tables for q=" + std::to_string(q) + ", prime degree " +
                                   std::to_string(d) + " would exceed the 1 GiB table cap");

  auto t = std::make_unique<DegreeTable>();
  t->d = d;
  t->qd = qd_big.convert_to<std::uint64_t>();
  const auto& primes = irreducible_table(field, d);
  t->prime_count = primes.size();
  t->pcoef.resize(t->prime_count * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < t->prime_count; ++i)
    for (int j = 0; j < d; ++j) t->pcoef[i * d + j] = primes[i].coeff(static_cast<std::size_t>(j));

  // Mark squares: every residue starts as a non-square (-1), zero is 0, and
  // each s^2 mod P flips to +1.  Nonzero residues are walked by an odometer.
  t->sym.assign(t->prime_count * t->qd, std::int8_t(-1));
  std::vector<std::uint32_t> s(static_cast<std::size_t>(d), 0);
  std::vector<std::uint32_t> sq(static_cast<std::size_t>(2 * d - 1), 0);
  for (std::size_t i = 0; i < t->prime_count; ++i) {
    std::int8_t* block = t->sym.data() + i * t->qd;
    block[0] = 0;
    const std::uint32_t* pc = t->pcoef.data() + i * d;
    std::fill(s.begin(), s.end(), 0);
    for (std::uint64_t step = 1; step < t->qd; ++step) {
      for (int pos = 0;; ++pos) {
        if (++s[pos] == q) s[pos] = 0;
        else break;
      }
      std::fill(sq.begin(), sq.end(), 0);
      for (int a = 0; a < d; ++a) {
        if (s[a] == 0) continue;
        for (int b = 0; b < d; ++b) sq[a + b] = (sq[a + b] + s[a] * s[b]) % q;
      }
      const std::uint64_t code = reduce_code(sq.data(), 2 * d - 2, pc, d, q);
      block[code] = 1;
    }
  }
  g_table_bytes += t->prime_count * t->qd;
  return t;
}

TableSet get_tables(const FieldSpec& field, int max_deg) {
  if (max_deg < 0) fail(errc::NonPositiveDegree, "table degree must be >= 0");
  if (max_deg >= 1) {
    // Partial convolution products are coefficient-wise bounded by q^n, so
    // (max_deg + 1) q^max_deg bounds every int64 intermediate in the engine.
    const BigInt bound = BigInt(max_deg + 1) * bigint_pow(field.q, static_cast<std::uint64_t>(max_deg));
    if (bound >= (BigInt(1) << 62))
      fail(errc::DegreeTooLarge, "engine coefficients would overflow 64-bit intermediates");
  }
  TableSet out;
  out.field = field;
  out.max_deg = max_deg;
  out.deg.assign(static_cast<std::size_t>(max_deg) + 1, nullptr);
  out.sym_offset.assign(static_cast<std::size_t>(max_deg) + 2, 0);
  std::lock_guard<std::mutex> lock(g_tables_mutex);
  for (int d = 1; d <= max_deg; ++d) {
    const auto key = std::make_pair(field.q, d);
    auto it = g_tables.find(key);
    if (it == g_tables.end()) it = g_tables.emplace(key, build_degree_table(field, d)).first;
    out.deg[static_cast<std::size_t>(d)] = it->second.get();
  }
  for (int d = 1; d <= max_deg; ++d)
    out.sym_offset[static_cast<std::size_t>(d) + 1] =
        out.sym_offset[static_cast<std::size_t>(d)] + out.deg[static_cast<std::size_t>(d)]->prime_count;
  out.sym_offset[1] = 0;
  out.total_primes = out.sym_offset[static_cast<std::size_t>(max_deg) + 1];
  return out;
}

// Reusable per-thread buffers for the per-discriminant computation.
struct Scratch {
  std::vector<std::uint32_t> dcoef, buf;
  std::vector<std::int64_t> coeffs, tmp, series;
  std::vector<int> zcount, spl, smn;
  std::vector<std::int8_t> symbols;

  Scratch(const TableSet& t, int deg_d) {
    dcoef.resize(static_cast<std::size_t>(deg_d) + 1);
    buf.resize(static_cast<std::size_t>(deg_d) + 1);
    const std::size_t n = static_cast<std::size_t>(t.max_deg) + 1;
    coeffs.resize(n);
    tmp.resize(n);
    series.resize(n);
    zcount.resize(n);
    spl.resize(n);
    smn.resize(n);
    symbols.resize(t.total_primes);
  }
};

// Multiplies coeffs (truncated at degree N) by (1 -+ u^d)^{-s}, whose series
// coefficients are (+-1)^k C(s-1+k, k) at u^{dk}; the running binomial stays
// well inside int64 because every partial product is bounded by q^n.
void apply_series(Scratch& sc, int d, int s, bool alternate) {
  if (s == 0) return;
  const int n_max = static_cast<int>(sc.coeffs.size()) - 1;
  const int k_max = n_max / d;
  if (k_max == 0) return;
  std::copy(sc.coeffs.begin(), sc.coeffs.end(), sc.tmp.begin());
  std::int64_t b = 1;
  for (int k = 1; k <= k_max; ++k) {
    b = b * (s - 1 + k) / k;
    sc.series[static_cast<std::size_t>(k)] = (alternate && (k & 1)) ? -b : b;
  }
  for (int n = d; n <= n_max; ++n) {
    std::int64_t acc = sc.tmp[static_cast<std::size_t>(n)];
    for (int k = 1; k * d <= n; ++k)
      acc += sc.series[static_cast<std::size_t>(k)] * sc.tmp[static_cast<std::size_t>(n - k * d)];
    sc.coeffs[static_cast<std::size_t>(n)] = acc;
  }
}

// chi_D(P) for every tabulated prime, divisor counts by degree, and the
// L-polynomial coefficients a_0..a_max_deg for monic squarefree D.
void process_discriminant(const TableSet& t, const Poly& f, Scratch& sc) {
  const std::uint32_t q = t.field.q;
  const int deg = f.degree();
  for (int i = 0; i <= deg; ++i) sc.dcoef[static_cast<std::size_t>(i)] = f.coeff(static_cast<std::size_t>(i));
  std::fill(sc.zcount.begin(), sc.zcount.end(), 0);
  std::fill(sc.spl.begin(), sc.spl.end(), 0);
  std::fill(sc.smn.begin(), sc.smn.end(), 0);
  std::size_t sympos = 0;
  for (int d = 1; d <= t.max_deg; ++d) {
    const DegreeTable& tab = *t.deg[static_cast<std::size_t>(d)];
    for (std::size_t i = 0; i < tab.prime_count; ++i) {
      std::copy(sc.dcoef.begin(), sc.dcoef.begin() + deg + 1, sc.buf.begin());
      const std::uint64_t code = reduce_code(sc.buf.data(), deg, tab.pcoef.data() + i * d, d, q);
      const std::int8_t v = tab.sym[i * tab.qd + code];
      sc.symbols[sympos++] = v;
      if (v > 0) ++sc.spl[static_cast<std::size_t>(d)];
      else if (v < 0) ++sc.smn[static_cast<std::size_t>(d)];
      else ++sc.zcount[static_cast<std::size_t>(d)];
    }
  }
  std::fill(sc.coeffs.begin(), sc.coeffs.end(), 0);
  sc.coeffs[0] = 1;
  for (int d = 1; d <= t.max_deg; ++d) {
    apply_series(sc, d, sc.spl[static_cast<std::size_t>(d)], false);
    apply_series(sc, d, sc.smn[static_cast<std::size_t>(d)], true);
  }
}

// h_D = a_g + sum_{n < g} a_n (q^{g-n} + 1), the functional-equation-folded
// form of q^g L(1); qpow[i] = q^i.
std::int64_t class_number_folded(const std::vector<std::int64_t>& coeffs, int g,
                                 const std::vector<std::int64_t>& qpow) {
  std::int64_t h = coeffs[static_cast<std::size_t>(g)];
  for (int n = 0; n < g; ++n)
    h += coeffs[static_cast<std::size_t>(n)] * (qpow[static_cast<std::size_t>(g - n)] + 1);
  return h;
}

std::vector<std::int64_t> int_powers(std::uint32_t q, int up_to) {
  std::vector<std::int64_t> p(static_cast<std::size_t>(up_to) + 1, 1);
  for (int i = 1; i <= up_to; ++i) p[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i - 1)] * q;
  return p;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

// Runs body(worker, lo, hi) over a contiguous partition of [0, total) and
// rethrows the first worker exception.  worker_count is clamped to total.
void run_partitioned(std::uint64_t total, int workers,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& body) {
  int w = workers;
  if (total > 0 && static_cast<std::uint64_t>(w) > total) w = static_cast<int>(total);
  if (w < 1) w = 1;
  if (w == 1) {
    body(0, 0, total);
    return;
  }
  const std::uint64_t base = total / static_cast<std::uint64_t>(w);
  const std::uint64_t rem = total % static_cast<std::uint64_t>(w);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(w));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w));
  std::uint64_t lo = 0;
  for (int k = 0; k < w; ++k) {
    const std::uint64_t hi = lo + base + (static_cast<std::uint64_t>(k) < rem ? 1 : 0);
    pool.emplace_back([&body, &errors, k, lo, hi] {
      try {
        body(k, lo, hi);
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    });
    lo = hi;
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

FieldSpec validated_ensemble_field(const FieldSpec& field, const char* err_code) {
  const FieldSpec f = make_field(field.p, field.e);
  if (!f.ensemble_ready())
    fail(err_code, "ensemble requires q = 1 (mod 4), got q = " + std::to_string(f.q));
  return f;
}

void check_budget(const BigInt& work, std::uint64_t budget) {
  if (work > BigInt(budget))
    fail(errc::BudgetExceeded,
         "estimated work " + work.str() + " exceeds budget " + std::to_string(budget));
}

std::string rat_str(const Rational& r) {
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

std::string real_str(const Real& x) { return x.str(25); }

Real real_pow2q(std::uint32_t q, int g) {
  Real r = 1;
  for (int i = 0; i < g; ++i) r *= 2 * q;
  return r;
}

using ordered_json = nlohmann::ordered_json;

}  // namespace

std::uint64_t scan_index_count(const FieldSpec& field, int g) {
  if (g < 0) fail(errc::NonPositiveDegree, "genus must be >= 0");
  const int d = 2 * g + 1;
  const BigInt count = monic_count(field, d);
  if (count > BigInt(std::numeric_limits<std::uint64_t>::max()))
    fail(errc::DegreeTooLarge, "monic index space exceeds 64-bit range");
  return count.convert_to<std::uint64_t>();
}

void scan_ensemble(const FieldSpec& field, int g, int max_coeff_deg, std::uint64_t lo,
                   std::uint64_t hi, const std::function<void(const ScanView&)>& fn) {
  const FieldSpec f = validated_ensemble_field(field, errc::BadFieldForEnsemble);
  if (g < 0) fail(errc::NonPositiveDegree, "genus must be >= 0");
  if (max_coeff_deg < 0 || max_coeff_deg > 2 * g)
    fail(errc::Unsupported, "coefficient degree must lie in [0, 2g]");
  if (lo > hi || hi > scan_index_count(f, g))
    fail(errc::Unsupported, "scan range must lie within [0, q^(2g+1)]");
  const TableSet tables = get_tables(f, max_coeff_deg);
  Scratch scratch(tables, 2 * g + 1);
  for_each_monic_range(f, 2 * g + 1, lo, hi, [&](const Poly& d) {
    if (!is_squarefree(d)) return;
    process_discriminant(tables, d, scratch);
    fn(ScanView{d, scratch.coeffs, scratch.zcount, scratch.symbols});
  });
}

LPolynomial l_coefficients_fast(const QuadChar& chi) {
  const Poly& d = chi.modulus;
  const int deg = d.degree();
  if (deg % 2 == 0) fail(errc::EvenDegree, "discriminant degree must be odd, got " + std::to_string(deg));
  if (!is_squarefree(d)) fail(errc::NotSquareFree, "discriminant must be squarefree");
  const int g = (deg - 1) / 2;
  const TableSet tables = get_tables(d.field(), 2 * g);
  Scratch scratch(tables, deg);
  process_discriminant(tables, d, scratch);
  return LPolynomial{d, g, std::vector<BigInt>(scratch.coeffs.begin(), scratch.coeffs.end())};
}

// ---------------------------------------------------------------------------
// Mean-value experiment.

namespace {

MomentRow full_row(const FieldSpec& f, int g, const ExperimentConfig& cfg) {
  const std::uint64_t total = scan_index_count(f, g);
  (void)get_tables(f, g);  // build tables before spawning workers
  const std::vector<std::int64_t> qpow = int_powers(f.q, g);

  int w = cfg.workers;
  if (static_cast<std::uint64_t>(w) > total) w = static_cast<int>(total);
  if (w < 1) w = 1;
  std::vector<BigInt> sums(static_cast<std::size_t>(w));
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(w), 0);
  run_partitioned(total, w, [&](int k, std::uint64_t lo, std::uint64_t hi) {
    BigInt local = 0;
    std::uint64_t c = 0;
    scan_ensemble(f, g, g, lo, hi, [&](const ScanView& view) {
      local += class_number_folded(view.coeffs, g, qpow);
      ++c;
    });
    sums[static_cast<std::size_t>(k)] = std::move(local);
    counts[static_cast<std::size_t>(k)] = c;
  });

  BigInt sum_h = 0;
  std::uint64_t scanned = 0;
  for (int k = 0; k < w; ++k) {
    sum_h += sums[static_cast<std::size_t>(k)];
    scanned += counts[static_cast<std::size_t>(k)];
  }
  const BigInt expected = ensemble_size(f, g);
  if (BigInt(scanned) != expected)
    fail(errc::Unsupported, "internal: squarefree count mismatch at g = " + std::to_string(g));

  MomentRow row;
  row.g = g;
  row.ensemble_size = expected;
  row.sum_h = Rational(sum_h);
  row.sum_L = Rational(sum_h, bigint_pow(f.q, static_cast<std::uint64_t>(g)));
  row.sampled = false;
  row.std_error = 0;
  return row;
}

MomentRow sample_row(const FieldSpec& f, int g, const ExperimentConfig& cfg) {
  const std::uint64_t total = scan_index_count(f, g);
  const int d = 2 * g + 1;

  // Indices are drawn single-threaded from a per-genus substream, so the
  // sample is a pure function of (seed, g) regardless of worker count.
  std::mt19937_64 rng(cfg.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(g + 1)));
  std::vector<std::uint64_t> indices;
  indices.reserve(cfg.sample_size);
  while (indices.size() < cfg.sample_size) {
    const std::uint64_t i = uniform_below(rng, total);
    if (is_squarefree(monic_at(f, d, i))) indices.push_back(i);
  }

  const TableSet tables = get_tables(f, g);
  const std::vector<std::int64_t> qpow = int_powers(f.q, g);
  std::vector<std::int64_t> hs(indices.size());
  run_partitioned(indices.size(), cfg.workers, [&](int, std::uint64_t lo, std::uint64_t hi) {
    Scratch scratch(tables, d);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const Poly dd = monic_at(f, d, indices[i]);
      process_discriminant(tables, dd, scratch);
      hs[i] = class_number_folded(scratch.coeffs, g, qpow);
    }
  });

  BigInt sh = 0, sh2 = 0;
  for (const std::int64_t h : hs) {
    sh += h;
    sh2 += BigInt(h) * h;
  }
  const std::uint64_t n = indices.size();
  const BigInt size = ensemble_size(f, g);
  const BigInt qg = bigint_pow(f.q, static_cast<std::uint64_t>(g));

  MomentRow row;
  row.g = g;
  row.ensemble_size = size;
  row.sum_h = Rational(size * sh, BigInt(n));
  row.sum_L = Rational(size * sh, BigInt(n) * qg);
  row.sampled = true;
  if (n >= 2) {
    const Real mean = to_real(Rational(sh, BigInt(n)));
    Real var = (to_real(sh2) - Real(n) * mean * mean) / Real(n - 1);
    if (var < 0) var = 0;
    row.std_error = to_real(size) * sqrt(var / Real(n)) / to_real(qg);
  } else {
    row.std_error = 0;
  }
  return row;
}

}  // namespace

MomentReport run_mean_value(const ExperimentConfig& cfg) {
  const FieldSpec f = validated_ensemble_field(cfg.field, errc::BadField);
  if (cfg.g_min < 1 || cfg.g_max < cfg.g_min)
    fail(errc::Unsupported, "need 1 <= g_min <= g_max");
  if (cfg.cutoff < 0) fail(errc::Unsupported, "cutoff must be >= 0");
  if (cfg.workers < 1) fail(errc::Unsupported, "workers must be >= 1");
  if (cfg.mode == RunMode::sample && cfg.sample_size == 0)
    fail(errc::Unsupported, "sample mode needs sample_size >= 1");

  BigInt work = 0;
  for (int g = cfg.g_min; g <= cfg.g_max; ++g) {
    const int d = 2 * g + 1;
    const BigInt per = cfg.mode == RunMode::full ? monic_count(f, d) : BigInt(cfg.sample_size);
    work += per * d;
  }
  check_budget(work, cfg.budget);

  MomentReport report;
  report.config = cfg;
  report.config.field = f;
  const Real corollary = corollary_average(f, cfg.cutoff);
  for (int g = cfg.g_min; g <= cfg.g_max; ++g) {
    MomentRow row = cfg.mode == RunMode::full ? full_row(f, g, cfg) : sample_row(f, g, cfg);
    const MainTermBreakdown proof =
        mean_value_main_term(f, g, FormulaVariant::proof_assembled, cfg.cutoff);
    const MainTermBreakdown literal =
        mean_value_main_term(f, g, FormulaVariant::theorem_literal, cfg.cutoff);
    row.main_proof = proof.total;
    row.main_literal = literal.total;
    row.corollary = corollary;
    const Real sum_l = to_real(row.sum_L);
    row.rel_err_leading = abs(sum_l / proof.leading - 1);
    row.err_over_2qg = (sum_l - proof.total) / real_pow2q(f.q, g);
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string to_csv(const MomentReport& report) {
  std::ostringstream os;
  os << "q,g,ensemble_size,sum_L_num,sum_L_den,sum_h,main_proof,main_literal,corollary,"
        "rel_err_leading,err_over_2qg\n";
  for (const MomentRow& row : report.rows) {
    os << report.config.field.q << ',' << row.g << ',' << row.ensemble_size.str() << ','
       << numerator(row.sum_L).str() << ',' << denominator(row.sum_L).str() << ','
       << rat_str(row.sum_h) << ',' << real_str(row.main_proof) << ','
       << real_str(row.main_literal) << ',' << real_str(row.corollary) << ','
       << real_str(row.rel_err_leading) << ',' << real_str(row.err_over_2qg) << '\n';
  }
  return os.str();
}

std::string to_json(const MomentReport& report) {
  ordered_json config;
  config["q"] = report.config.field.q;
  config["g_min"] = report.config.g_min;
  config["g_max"] = report.config.g_max;
  config["mode"] = report.config.mode == RunMode::full ? "full" : "sample";
  if (report.config.mode == RunMode::sample) {
    config["sample_size"] = report.config.sample_size;
    config["seed"] = report.config.seed;
  }
  config["cutoff"] = report.config.cutoff;

  ordered_json rows = ordered_json::array();
  for (const MomentRow& row : report.rows) {
    ordered_json r;
    r["g"] = row.g;
    r["ensemble_size"] = row.ensemble_size.str();
    r["sum_L_num"] = numerator(row.sum_L).str();
    r["sum_L_den"] = denominator(row.sum_L).str();
    r["sum_h"] = rat_str(row.sum_h);
    r["main_proof"] = real_str(row.main_proof);
    r["main_literal"] = real_str(row.main_literal);
    r["corollary"] = real_str(row.corollary);
    r["rel_err_leading"] = real_str(row.rel_err_leading);
    r["err_over_2qg"] = real_str(row.err_over_2qg);
    if (row.sampled) r["std_error"] = real_str(row.std_error);
    rows.push_back(std::move(r));
  }

  ordered_json j;
  j["config"] = std::move(config);
  j["rows"] = std::move(rows);
  return j.dump(1) + "\n";
}

// ---------------------------------------------------------------------------
// Non-square character sums.

NonsquareReport run_nonsquare_monitor(const FieldSpec& field, int g, std::uint64_t budget) {
  const FieldSpec f = validated_ensemble_field(field, errc::BadFieldForEnsemble);
  if (g < 1) fail(errc::Unsupported, "nonsquare monitor needs g >= 1");
  check_budget(monic_count(f, 2 * g + 1) * (2 * g + 1), budget);

  const int m_max = g / 2;
  std::vector<BigInt> a_sum(static_cast<std::size_t>(g) + 1, 0);
  std::vector<BigInt> sq_sum(static_cast<std::size_t>(m_max) + 1, 0);
  std::vector<std::int64_t> num(static_cast<std::size_t>(m_max) + 1, 0);

  scan_ensemble(f, g, g, 0, scan_index_count(f, g), [&](const ScanView& view) {
    for (int n = 0; n <= g; ++n) a_sum[static_cast<std::size_t>(n)] += view.coeffs[static_cast<std::size_t>(n)];
    // #{monic l of degree m coprime to D} from the prime-divisor degrees:
    // coefficients of prod_{d <= m_max} (1 - u^d)^{z_d} / (1 - q u).
    std::fill(num.begin(), num.end(), 0);
    num[0] = 1;
    for (int d = 1; d <= m_max; ++d)
      for (int rep = 0; rep < view.prime_divisors_by_deg[static_cast<std::size_t>(d)]; ++rep)
        for (int n = m_max; n >= d; --n) num[static_cast<std::size_t>(n)] -= num[static_cast<std::size_t>(n - d)];
    std::int64_t c = 0;
    for (int m = 0; m <= m_max; ++m) {
      c = c * f.q + num[static_cast<std::size_t>(m)];
      sq_sum[static_cast<std::size_t>(m)] += c;
    }
  });

  Rational non1 = 0;
  BigInt non2_num = 0;
  for (int n = 0; n <= g; ++n) {
    BigInt top = a_sum[static_cast<std::size_t>(n)];
    if (n % 2 == 0) top -= sq_sum[static_cast<std::size_t>(n / 2)];
    non1 += Rational(top, bigint_pow(f.q, static_cast<std::uint64_t>(n)));
    if (n <= g - 1) non2_num += top;
  }
  const Rational non2(non2_num, bigint_pow(f.q, static_cast<std::uint64_t>(g)));

  NonsquareReport rep;
  rep.q = f.q;
  rep.g = g;
  rep.non1 = non1;
  rep.non2 = non2;
  const Real envelope = real_pow2q(f.q, g);
  rep.ratio1 = to_real(abs(non1)) / envelope;
  rep.ratio2 = to_real(abs(non2)) / envelope;
  return rep;
}

std::string to_json(const NonsquareReport& report) {
  ordered_json j;
  j["q"] = report.q;
  j["g"] = report.g;
  j["non1"] = rat_str(report.non1);
  j["non2"] = rat_str(report.non2);
  j["ratio1"] = real_str(report.ratio1);
  j["ratio2"] = real_str(report.ratio2);
  return j.dump(1) + "\n";
}

// ---------------------------------------------------------------------------
// Coprime-discriminant count versus its closed-form main term.

Prop2Report run_prop2_check(const FieldSpec& field, int g, const Poly& l,
                            std::uint64_t budget) {
  const FieldSpec f = validated_ensemble_field(field, errc::BadFieldForEnsemble);
  if (g < 1) fail(errc::Unsupported, "coprimality check needs g >= 1");
  if (l == Poly::zero(f)) fail(errc::ZeroModulus, "modulus l must be nonzero");
  if (!l.is_monic()) fail(errc::NotMonic, "modulus l must be monic");
  check_budget(monic_count(f, 2 * g + 1) * (2 * g + 1), budget);

  BigInt count = 0;
  const bool trivial = l.degree() == 0;
  for_each_ensemble(f, g, [&](const Poly& d) {
    if (trivial || poly_gcd(d, l).degree() == 0) ++count;
  });

  Prop2Report rep;
  rep.q = f.q;
  rep.g = g;
  rep.l = l;
  rep.count = count;
  rep.main_term = prop2_main_term(f, g, l);
  rep.error = Rational(count) - rep.main_term;
  if (rep.error == 0) {
    rep.normalized_error = 0;
  } else {
    const BigInt phi = trivial ? BigInt(1) : euler_phi(l);
    const BigInt norm_l = trivial ? BigInt(1) : l.norm();
    rep.normalized_error = to_real(abs(rep.error)) * to_real(norm_l) /
                           (to_real(bigint_pow(f.q, static_cast<std::uint64_t>(g))) *
                            sqrt(Real(f.q)) * to_real(phi));
  }
  return rep;
}

std::string to_json(const Prop2Report& report) {
  ordered_json j;
  j["q"] = report.q;
  j["g"] = report.g;
  j["l"] = to_coeff_string(report.l);
  j["count"] = report.count.str();
  j["main_term"] = rat_str(report.main_term);
  j["error"] = rat_str(report.error);
  j["normalized_error"] = real_str(report.normalized_error);
  return j.dump(1) + "\n";
}

// ---------------------------------------------------------------------------
// Cross-validation suite.

VerifyReport run_verify_suite(const FieldSpec& field, int g_max, std::uint64_t budget) {
  const FieldSpec f = validated_ensemble_field(field, errc::BadFieldForEnsemble);
  if (g_max < 1) fail(errc::Unsupported, "verification needs g_max >= 1");
  BigInt work = 0;
  for (int g = 1; g <= g_max; ++g) work += monic_count(f, 2 * g + 1) * (2 * g + 1);
  check_budget(work, budget);

  VerifyReport rep;
  rep.q = f.q;
  rep.g_max = g_max;

  InvariantResult inv_fe{"functional_equation", true, 0, ""};
  InvariantResult inv_weil{"weil_bound", true, 0, ""};
  InvariantResult inv_class{"class_number_positive_integral", true, 0, ""};
  InvariantResult inv_a1{"a1_point_identity", true, 0, ""};
  InvariantResult inv_afe{"approx_fe_identity", true, 0, ""};
  InvariantResult inv_afe_pub{"approx_fe_public_subset", true, 0, ""};
  InvariantResult inv_dvf{"direct_vs_fast", true, 0, ""};
  InvariantResult inv_vanish{"char_sum_vanishing", true, 0, ""};
  InvariantResult inv_count{"ensemble_count", true, 0, ""};

  auto flunk = [](InvariantResult& r, const std::string& detail) {
    if (r.pass) {
      r.pass = false;
      r.counterexample = detail;
    }
  };

  for (int g = 1; g <= g_max; ++g) {
    const int dd = 2 * g + 1;
    const int n_top = 2 * g;
    const TableSet tables = get_tables(f, n_top);
    const std::uint64_t total = scan_index_count(f, g);
    const std::vector<std::int64_t> qpow = int_powers(f.q, n_top);

    auto label = [&](const Poly& d) {
      return "q=" + std::to_string(f.q) + " g=" + std::to_string(g) + " D=" + to_coeff_string(d);
    };

    // chi_D(f) for small composite f, assembled from the per-prime symbols of
    // the scan: each monic f of degree 1..g becomes a list of
    // (symbol index, exponent parity) pairs.
    struct Entry {
      std::uint32_t sym_index;
      std::uint8_t parity;
    };
    std::vector<std::vector<std::vector<Entry>>> recipes(static_cast<std::size_t>(g) + 1);
    {
      std::vector<std::unordered_map<std::uint64_t, std::size_t>> pos_of(static_cast<std::size_t>(g) + 1);
      for (int dp = 1; dp <= g; ++dp) {
        const auto& tab = irreducible_table(f, dp);
        for (std::size_t i = 0; i < tab.size(); ++i)
          pos_of[static_cast<std::size_t>(dp)][monic_index(tab[i])] = i;
      }
      for (int n = 1; n <= g; ++n) {
        for_each_monic(f, n, [&](const Poly& mono) {
          std::vector<Entry> entries;
          for (const auto& pe : factor(mono).factors) {
            const int dp = pe.first.degree();
            const std::size_t pos = pos_of[static_cast<std::size_t>(dp)].at(monic_index(pe.first));
            entries.push_back(Entry{
                static_cast<std::uint32_t>(tables.sym_offset[static_cast<std::size_t>(dp)] + pos),
                static_cast<std::uint8_t>(pe.second & 1)});
          }
          recipes[static_cast<std::size_t>(n)].push_back(std::move(entries));
        });
      }
    }

    // Deterministic strided subsets of squarefree indices for the checks that
    // are too slow to run over the whole ensemble.
    auto subset = [&](int want, std::uint64_t phase) {
      std::vector<std::uint64_t> out;
      for (int j = 0; j < want; ++j) {
        std::uint64_t i =
            ((total / static_cast<std::uint64_t>(want)) * static_cast<std::uint64_t>(j) + phase) % total;
        while (!is_squarefree(monic_at(f, dd, i))) i = (i + 1) % total;
        out.push_back(i);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    };
    const auto pub_idx = subset(12, 1);
    const auto dvf_idx = subset(6, 7);
    const auto vanish1_idx = subset(6, 3);
    const auto vanish2_idx = subset(3, 5);
    const std::unordered_set<std::uint64_t> pub_set(pub_idx.begin(), pub_idx.end());
    const std::unordered_set<std::uint64_t> dvf_set(dvf_idx.begin(), dvf_idx.end());

    std::uint64_t scanned = 0;
    std::vector<std::int64_t> a_small(static_cast<std::size_t>(g) + 1, 0);
    scan_ensemble(f, g, n_top, 0, total, [&](const ScanView& view) {
      ++scanned;
      const std::uint64_t index = monic_index(view.D);
      LPolynomial lp{view.D, g, std::vector<BigInt>(view.coeffs.begin(), view.coeffs.end())};

      ++inv_fe.checked;
      if (!verify_functional_equation(lp)) flunk(inv_fe, label(view.D));

      for (int n = 0; n <= n_top; ++n) {
        ++inv_weil.checked;
        if (!check_weil_bound(f, lp.coeffs[static_cast<std::size_t>(n)], dd, n).ok)
          flunk(inv_weil, label(view.D) + " n=" + std::to_string(n));
      }

      ++inv_class.checked;
      try {
        if (class_number(lp) <= 0) flunk(inv_class, label(view.D));
      } catch (const Error& e) {
        flunk(inv_class, label(view.D) + " (" + std::string(e.what()) + ")");
      }

      ++inv_a1.checked;
      std::int64_t points = 0;
      for (std::uint32_t x = 0; x < f.q; ++x) points += residue_symbol_fq(view.D.eval(x), f.q);
      if (BigInt(points) != lp.coeffs[1]) flunk(inv_a1, label(view.D));

      // Approximate functional equation as an exact integer identity:
      // q^{2g} L(1) recomputed from character sums of degree <= g only.
      ++inv_afe.checked;
      std::int64_t lhs = 0;
      for (int n = 0; n <= n_top; ++n)
        lhs += view.coeffs[static_cast<std::size_t>(n)] * qpow[static_cast<std::size_t>(n_top - n)];
      a_small[0] = 1;
      for (int n = 1; n <= g; ++n) {
        std::int64_t acc = 0;
        for (const auto& entries : recipes[static_cast<std::size_t>(n)]) {
          int val = 1;
          for (const Entry& e : entries) {
            const int s = view.symbols[e.sym_index];
            if (s == 0) {
              val = 0;
              break;
            }
            if (e.parity && s < 0) val = -val;
          }
          acc += val;
        }
        a_small[static_cast<std::size_t>(n)] = acc;
      }
      std::int64_t rhs = 0;
      for (int n = 0; n <= g; ++n)
        rhs += a_small[static_cast<std::size_t>(n)] * qpow[static_cast<std::size_t>(n_top - n)];
      std::int64_t second = 0;
      for (int m = 0; m <= g - 1; ++m) second += a_small[static_cast<std::size_t>(m)];
      rhs += qpow[static_cast<std::size_t>(g)] * second;
      if (lhs != rhs) flunk(inv_afe, label(view.D));

      if (pub_set.count(index) != 0) {
        ++inv_afe_pub.checked;
        const QuadChar chi = make_quad_char(view.D);
        if (approx_fe_value(chi) != l_value_at_one(lp)) flunk(inv_afe_pub, label(view.D));
      }
      if (dvf_set.count(index) != 0) {
        ++inv_dvf.checked;
        if (l_coefficients_direct(make_quad_char(view.D)).coeffs != lp.coeffs)
          flunk(inv_dvf, label(view.D));
      }
    });

    ++inv_count.checked;
    if (BigInt(scanned) != ensemble_size(f, g))
      flunk(inv_count, "g=" + std::to_string(g) + ": scanned " + std::to_string(scanned) +
                           ", expected " + ensemble_size(f, g).str());
    rep.discriminants += scanned;

    for (const std::uint64_t i : vanish1_idx) {
      ++inv_vanish.checked;
      const Poly d = monic_at(f, dd, i);
      if (char_sum(make_quad_char(d), n_top + 1) != 0)
        flunk(inv_vanish, label(d) + " n=" + std::to_string(n_top + 1));
    }
    for (const std::uint64_t i : vanish2_idx) {
      ++inv_vanish.checked;
      const Poly d = monic_at(f, dd, i);
      if (char_sum(make_quad_char(d), n_top + 2) != 0)
        flunk(inv_vanish, label(d) + " n=" + std::to_string(n_top + 2));
    }
  }

  rep.invariants = {inv_fe,      inv_weil,   inv_class, inv_a1,    inv_afe,
                    inv_afe_pub, inv_dvf,    inv_vanish, inv_count};
  rep.all_pass = std::all_of(rep.invariants.begin(), rep.invariants.end(),
                             [](const InvariantResult& r) { return r.pass; });
  return rep;
}

std::string to_json(const VerifyReport& report) {
  ordered_json inv = ordered_json::array();
  for (const InvariantResult& r : report.invariants) {
    ordered_json e;
    e["name"] = r.name;
    e["pass"] = r.pass;
    e["checked"] = r.checked;
    e["counterexample"] = r.counterexample;
    inv.push_back(std::move(e));
  }
  ordered_json j;
  j["q"] = report.q;
  j["g_max"] = report.g_max;
  j["discriminants"] = report.discriminants;
  j["all_pass"] = report.all_pass;
  j["invariants"] = std::move(inv);
  return j.dump(1) + "\n";
}

std::string to_text(const VerifyReport& report) {
  std::ostringstream os;
  std::size_t failures = 0;
  for (const InvariantResult& r : report.invariants) {
    os << (r.pass ? "PASS" : "FAIL") << ' ' << r.name << "  checked=" << r.checked;
    if (!r.pass) {
      os << "  counterexample: " << r.counterexample;
      ++failures;
    }
    os << '\n';
  }
  os << "verify: " << report.invariants.size() << " invariants, " << failures
     << " failures, " << report.discriminants << " discriminants covered\n";
  return os.str();
}

}  // namespace ffl
