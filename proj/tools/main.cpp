#include "ffl/errors.hpp"
#include "ffl/experiments.hpp"
#include "ffl/lfunction.hpp"
#include "ffl/special_values.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using ordered_json = nlohmann::ordered_json;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) ffl::fail(ffl::errc::Unsupported, "cannot open output file " + out_path);
  os << text;
}

std::string real_str(const ffl::Real& x) { return x.str(25); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact arithmetic for quadratic Dirichlet L-functions over F_q[T]"};
  app.require_subcommand(1);
  int exit_code = 0;

  // --- mean -----------------------------------------------------------------
  struct {
    std::uint32_t q = 5;
    int g = 0, g_min = 1, g_max = 0;
    std::string mode = "full";
    std::uint64_t sample_size = 0, seed = 0, budget = ffl::kDefaultBudget;
    int cutoff = 40, workers = 1;
    std::string out, format = "json";
  } m;
  auto* mean = app.add_subcommand("mean", "sum of L(1, chi_D) over the genus-g ensemble, "
                                          "exact (full) or seeded-sample");
  mean->add_option("--q", m.q, "field size (prime, q = 1 mod 4)")->required();
  mean->add_option("--g", m.g, "single genus (shorthand for --g-min = --g-max)");
  mean->add_option("--g-min", m.g_min, "first genus (default 1)");
  mean->add_option("--g-max", m.g_max, "last genus (default g-min)");
  mean->add_option("--mode", m.mode, "full | sample")->check(CLI::IsMember({"full", "sample"}));
  mean->add_option("--sample-size", m.sample_size, "draws per genus in sample mode");
  mean->add_option("--seed", m.seed, "RNG seed for sample mode");
  mean->add_option("--cutoff", m.cutoff, "Euler-product truncation degree (default 40)");
  mean->add_option("--workers", m.workers, "worker threads (results are worker-invariant)");
  mean->add_option("--budget", m.budget, "work-unit budget (default 10^7)");
  mean->add_option("--out", m.out, "output file (default stdout)");
  mean->add_option("--format", m.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  mean->callback([&] {
    ffl::ExperimentConfig cfg;
    cfg.field = ffl::make_field(m.q);
    if (m.g > 0) {
      cfg.g_min = cfg.g_max = m.g;
    } else {
      cfg.g_min = m.g_min;
      cfg.g_max = m.g_max > 0 ? m.g_max : m.g_min;
    }
    cfg.mode = m.mode == "full" ? ffl::RunMode::full : ffl::RunMode::sample;
    cfg.sample_size = m.sample_size;
    cfg.seed = m.seed;
    cfg.cutoff = m.cutoff;
    cfg.workers = m.workers;
    cfg.budget = m.budget;
    const ffl::MomentReport report = ffl::run_mean_value(cfg);
    emit(m.format == "csv" ? ffl::to_csv(report) : ffl::to_json(report), m.out);
  });

  // --- nonsquare --------------------------------------------------------------
  struct {
    std::uint32_t q = 5;
    int g = 1;
    std::uint64_t budget = ffl::kDefaultBudget;
    std::string out;
  } ns;
  auto* nonsquare = app.add_subcommand("nonsquare", "exact non-square character-sum terms for one genus");
  nonsquare->add_option("--q", ns.q)->required();
  nonsquare->add_option("--g", ns.g)->required();
  nonsquare->add_option("--budget", ns.budget);
  nonsquare->add_option("--out", ns.out);
  nonsquare->callback([&] {
    emit(ffl::to_json(ffl::run_nonsquare_monitor(ffl::make_field(ns.q), ns.g, ns.budget)), ns.out);
  });

  // --- prop2 ------------------------------------------------------------------
  struct {
    std::uint32_t q = 5;
    int g = 1;
    std::string l = "1";
    std::uint64_t budget = ffl::kDefaultBudget;
    std::string out;
  } p2;
  auto* prop2 = app.add_subcommand("prop2", "count ensemble members coprime to l versus the main term");
  prop2->add_option("--q", p2.q)->required();
  prop2->add_option("--g", p2.g)->required();
  prop2->add_option("--l", p2.l, "monic modulus, e.g. \"0,1\" or \"T^2+2\"")->required();
  prop2->add_option("--budget", p2.budget);
  prop2->add_option("--out", p2.out);
  prop2->callback([&] {
    const ffl::FieldSpec field = ffl::make_field(p2.q);
    const ffl::Poly l = ffl::parse_poly(field, p2.l);
    emit(ffl::to_json(ffl::run_prop2_check(field, p2.g, l, p2.budget)), p2.out);
  });

  // --- verify -----------------------------------------------------------------
  struct {
    std::uint32_t q = 5;
    int g_max = 2;
    std::uint64_t budget = ffl::kDefaultBudget;
    std::string out;
  } vf;
  auto* verify = app.add_subcommand("verify", "run every cross-validation invariant over the ensembles");
  verify->add_option("--q", vf.q)->required();
  verify->add_option("--g-max", vf.g_max);
  verify->add_option("--budget", vf.budget);
  verify->add_option("--out", vf.out, "also write the JSON report here");
  verify->callback([&] {
    const ffl::VerifyReport report = ffl::run_verify_suite(ffl::make_field(vf.q), vf.g_max, vf.budget);
    std::cout << ffl::to_text(report);
    if (!vf.out.empty()) emit(ffl::to_json(report), vf.out);
    if (!report.all_pass) exit_code = 1;
  });

  // --- lpoly ------------------------------------------------------------------
  struct {
    std::uint32_t q = 5;
    std::string D;
    std::string engine = "direct";
    std::string out;
  } lp;
  auto* lpoly = app.add_subcommand("lpoly", "L-polynomial, L(1) and class number of one discriminant");
  lpoly->add_option("--q", lp.q)->required();
  lpoly->add_option("--D", lp.D, "monic squarefree discriminant of odd degree")->required();
  lpoly->add_option("--engine", lp.engine, "direct | fast")->check(CLI::IsMember({"direct", "fast"}));
  lpoly->add_option("--out", lp.out);
  lpoly->callback([&] {
    const ffl::FieldSpec field = ffl::make_field(lp.q);
    const ffl::Poly d = ffl::parse_poly(field, lp.D);
    const ffl::QuadChar chi = ffl::make_quad_char(d);
    const ffl::LPolynomial poly =
        lp.engine == "fast" ? ffl::l_coefficients_fast(chi) : ffl::l_coefficients_direct(chi);
    const ffl::Rational value = ffl::l_value_at_one(poly);
    const ffl::BigInt h = ffl::class_number(poly);
    ordered_json j;
    j["q"] = field.q;
    j["D"] = ffl::to_coeff_string(d);
    j["g"] = poly.g;
    ordered_json coeffs = ordered_json::array();
    for (const ffl::BigInt& c : poly.coeffs) coeffs.push_back(c.str());
    j["coeffs"] = std::move(coeffs);
    j["l_at_one"] = ordered_json{{"num", numerator(value).str()}, {"den", denominator(value).str()}};
    j["class_number"] = h.str();
    emit(j.dump(1) + "\n", lp.out);
  });

  // --- symbol -----------------------------------------------------------------
  struct {
    std::uint32_t q = 5;
    std::string D, f;
    std::string out;
  } sy;
  auto* symbol = app.add_subcommand("symbol", "quadratic residue symbol (D / f), cross-checked "
                                              "between the factorization and Euclidean routes");
  symbol->add_option("--q", sy.q)->required();
  symbol->add_option("--D", sy.D)->required();
  symbol->add_option("--f", sy.f, "monic denominator")->required();
  symbol->add_option("--out", sy.out);
  symbol->callback([&] {
    const ffl::FieldSpec field = ffl::make_field(sy.q);
    const ffl::Poly d = ffl::parse_poly(field, sy.D);
    const ffl::Poly f = ffl::parse_poly(field, sy.f);
    const int via_factor = ffl::symbol(d, f);
    const int via_euclid = ffl::symbol_euclidean(d, f);
    if (via_factor != via_euclid) {
      std::cerr << "error: symbol routes disagree (" << via_factor << " vs " << via_euclid << ")\n";
      exit_code = 1;
      return;
    }
    ordered_json j;
    j["q"] = field.q;
    j["D"] = ffl::to_coeff_string(d);
    j["f"] = ffl::to_coeff_string(f);
    j["symbol"] = via_factor;
    emit(j.dump(1) + "\n", sy.out);
  });

  // --- charsum ----------------------------------------------------------------
  struct {
    std::uint32_t q = 5;
    std::string D;
    int n = 0;
    std::string out;
  } cs;
  auto* charsum = app.add_subcommand("charsum", "a_n = sum of chi_D(f) over monic f of degree n");
  charsum->add_option("--q", cs.q)->required();
  charsum->add_option("--D", cs.D)->required();
  charsum->add_option("--n", cs.n)->required();
  charsum->add_option("--out", cs.out);
  charsum->callback([&] {
    const ffl::FieldSpec field = ffl::make_field(cs.q);
    const ffl::Poly d = ffl::parse_poly(field, cs.D);
    const ffl::BigInt value = ffl::char_sum(ffl::make_quad_char(d), cs.n);
    ordered_json j;
    j["q"] = field.q;
    j["D"] = ffl::to_coeff_string(d);
    j["n"] = cs.n;
    j["char_sum"] = value.str();
    emit(j.dump(1) + "\n", cs.out);
  });

  // --- special ----------------------------------------------------------------
  struct {
    std::uint32_t q = 5;
    std::string what = "P2";
    int s = 2;
    int cutoff = 40;
    std::string out;
  } sp;
  auto* special = app.add_subcommand("special", "zeta_A and the prime Euler products P(1), P(2)");
  special->add_option("--q", sp.q)->required();
  special->add_option("--what", sp.what, "zeta | P1 | P2 | corollary")
      ->check(CLI::IsMember({"zeta", "P1", "P2", "corollary"}));
  special->add_option("--s", sp.s, "argument for zeta (integer >= 2)");
  special->add_option("--cutoff", sp.cutoff, "Euler-product truncation degree");
  special->add_option("--out", sp.out);
  special->callback([&] {
    const ffl::FieldSpec field = ffl::make_field(sp.q);
    ordered_json j;
    j["q"] = field.q;
    j["what"] = sp.what;
    if (sp.what == "zeta") {
      const ffl::Rational z = ffl::zeta_A(field, sp.s);
      j["s"] = sp.s;
      j["value"] = numerator(z).str() + "/" + denominator(z).str();
    } else if (sp.what == "corollary") {
      const ffl::TruncatedEulerProduct p2 = ffl::euler_product_P(field, 2, sp.cutoff);
      j["value"] = real_str(ffl::corollary_average(field, sp.cutoff));
      j["cutoff"] = sp.cutoff;
      j["tail_bound"] = real_str(p2.tail_bound);
    } else {
      const int s = sp.what == "P1" ? 1 : 2;
      const ffl::TruncatedEulerProduct p = ffl::euler_product_P(field, s, sp.cutoff);
      j["value"] = real_str(p.value);
      j["cutoff"] = p.cutoff_degree;
      j["tail_bound"] = real_str(p.tail_bound);
    }
    emit(j.dump(1) + "\n", sp.out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // bad command line; --help stays 0
  } catch (const ffl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const std::string& code = e.code();
    // Violations of arithmetic invariants are distinguished from bad input.
    return (code == ffl::errc::NonIntegralClassNumber || code == ffl::errc::NonPositive) ? 1 : 2;
  }
  return exit_code;
}
