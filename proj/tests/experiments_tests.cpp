#include "ffl/experiments.hpp"

#include "doctest.h"
#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

using namespace ffl;

namespace {

double as_double(const Real& x) { return x.convert_to<double>(); }

ExperimentConfig base_config(std::uint32_t q) {
  ExperimentConfig cfg;
  cfg.field = make_field(q);
  return cfg;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("ensemble scan exposes consistent per-discriminant data") {
  const FieldSpec f = make_field(5);
  CHECK(scan_index_count(f, 1) == 125);

  std::vector<Poly> seen;
  scan_ensemble(f, 1, 2, 0, 125, [&](const ScanView& v) {
    CHECK(v.D.is_monic());
    CHECK(v.D.degree() == 3);
    CHECK(is_squarefree(v.D));
    REQUIRE(v.coeffs.size() == 3);
    CHECK(v.coeffs[0] == 1);
    REQUIRE(v.prime_divisors_by_deg.size() == 3);
    // 15 = 5 linear + 10 quadratic monic irreducibles over F_5.
    REQUIRE(v.symbols.size() == 15);
    int zeros_deg1 = 0;
    for (int i = 0; i < 5; ++i) {
      CHECK(v.symbols[static_cast<std::size_t>(i)] >= -1);
      CHECK(v.symbols[static_cast<std::size_t>(i)] <= 1);
      if (v.symbols[static_cast<std::size_t>(i)] == 0) ++zeros_deg1;
    }
    CHECK(zeros_deg1 == v.prime_divisors_by_deg[1]);
    CHECK(v.prime_divisors_by_deg[1] + 2 * v.prime_divisors_by_deg[2] <= 3);
    seen.push_back(v.D);
  });
  CHECK(seen.size() == 100);

  // A partial range replays the same subsequence.
  std::vector<Poly> part;
  scan_ensemble(f, 1, 2, 25, 75, [&](const ScanView& v) { part.push_back(v.D); });
  std::vector<Poly> expected;
  for (const Poly& d : seen) {
    const std::uint64_t idx = monic_index(d);
    if (idx >= 25 && idx < 75) expected.push_back(d);
  }
  CHECK(part == expected);

  // Out-of-range scans are rejected rather than wrapping the enumeration.
  CHECK_THROWS_WITH_AS(scan_ensemble(f, 1, 2, 0, 126, [](const ScanView&) {}),
                       doctest::Contains("Unsupported"), Error);
}

TEST_CASE("table engine agrees with direct character sums") {
  const FieldSpec f = make_field(5);
  for_each_ensemble(f, 1, [&](const Poly& d) {
    const QuadChar chi = make_quad_char(d);
    const LPolynomial fast = l_coefficients_fast(chi);
    const LPolynomial direct = l_coefficients_direct(chi);
    CHECK(fast.g == 1);
    CHECK(fast.coeffs == direct.coeffs);
  });

  std::uint64_t step = 0;
  for_each_ensemble(f, 2, [&](const Poly& d) {
    if (step++ % 127 != 0) return;
    const QuadChar chi = make_quad_char(d);
    CHECK(l_coefficients_fast(chi).coeffs == l_coefficients_direct(chi).coeffs);
  });

  const FieldSpec f13 = make_field(13);
  for (const char* text : {"T^3+2", "T^3+T+4", "T^3+5*T^2+1"}) {
    const QuadChar chi = make_quad_char(parse_poly(f13, text));
    CHECK(l_coefficients_fast(chi).coeffs == l_coefficients_direct(chi).coeffs);
  }

  const QuadChar even = make_quad_char(parse_poly(f, "T^2+2"));
  CHECK_THROWS_WITH_AS(l_coefficients_fast(even), doctest::Contains("EvenDegree"), Error);
}

TEST_CASE("exhaustive mean values match the hand-verified ledger") {
  ExperimentConfig cfg = base_config(5);
  cfg.g_min = 1;
  cfg.g_max = 3;
  cfg.workers = 3;
  const MomentReport rep = run_mean_value(cfg);
  REQUIRE(rep.rows.size() == 3);

  const MomentRow& r1 = rep.rows[0];
  CHECK(r1.g == 1);
  CHECK(r1.ensemble_size == 100);
  CHECK(r1.sum_L == Rational(120));
  CHECK(r1.sum_h == Rational(600));
  CHECK_FALSE(r1.sampled);
  CHECK(r1.std_error == 0);
  CHECK(as_double(r1.main_proof) == doctest::Approx(120.81161613940062).epsilon(1e-12));
  CHECK(as_double(r1.main_literal) == doctest::Approx(33.798721823778336).epsilon(1e-12));
  CHECK(as_double(r1.corollary) == doctest::Approx(1.2081161613940062).epsilon(1e-12));
  CHECK(as_double(r1.rel_err_leading) == doctest::Approx(6.7180e-3).epsilon(1e-3));
  CHECK(as_double(r1.err_over_2qg) == doctest::Approx(-0.08116).epsilon(1e-3));

  const MomentRow& r2 = rep.rows[1];
  CHECK(r2.g == 2);
  CHECK(r2.ensemble_size == 2500);
  CHECK(r2.sum_L == Rational(15096, 5));
  CHECK(r2.sum_h == Rational(75480));
  CHECK(as_double(r2.rel_err_leading) == doctest::Approx(3.610e-4).epsilon(1e-3));
  CHECK(r2.err_over_2qg < 0);

  const MomentRow& r3 = rep.rows[2];
  CHECK(r3.g == 3);
  CHECK(r3.ensemble_size == 62500);
  CHECK(r3.sum_L == Rational(1887696, 25));
  CHECK(r3.sum_h == Rational(9438480));
  CHECK(as_double(r3.rel_err_leading) == doctest::Approx(7.680e-6).epsilon(1e-3));
  CHECK(r3.err_over_2qg > 0);

  // The empirical mean tightens as g grows.
  CHECK(r2.rel_err_leading < r1.rel_err_leading);
  CHECK(r3.rel_err_leading < r2.rel_err_leading);

  ExperimentConfig cfg13 = base_config(13);
  const MomentReport rep13 = run_mean_value(cfg13);
  REQUIRE(rep13.rows.size() == 1);
  CHECK(rep13.rows[0].ensemble_size == 2028);
  CHECK(rep13.rows[0].sum_L == Rational(2184));
  CHECK(rep13.rows[0].sum_h == Rational(28392));
  CHECK(as_double(rep13.rows[0].rel_err_leading) == doctest::Approx(4.228e-4).epsilon(1e-3));
}

TEST_CASE("results are identical across worker counts") {
  ExperimentConfig cfg = base_config(5);
  cfg.g_min = 1;
  cfg.g_max = 2;
  cfg.workers = 1;
  const MomentReport one = run_mean_value(cfg);
  cfg.workers = 3;
  const MomentReport three = run_mean_value(cfg);
  CHECK(to_json(one) == to_json(three));
  CHECK(to_csv(one) == to_csv(three));
}

TEST_CASE("sampling is seeded, deterministic, and sane") {
  ExperimentConfig cfg = base_config(5);
  cfg.g_min = 2;
  cfg.g_max = 2;
  cfg.mode = RunMode::sample;
  cfg.sample_size = 200;
  cfg.seed = 42;
  const MomentReport rep = run_mean_value(cfg);
  REQUIRE(rep.rows.size() == 1);
  const MomentRow& row = rep.rows[0];
  CHECK(row.sampled);
  CHECK(row.ensemble_size == 2500);
  CHECK(row.sum_L == Rational(5969, 2));
  CHECK(row.sum_h == Rational(149225, 2));
  CHECK(row.std_error > 0);
  // The estimate should sit within a few standard errors of the exact value.
  CHECK(abs(to_real(row.sum_L) - Real(15096) / 5) <= 5 * row.std_error);

  // Same seed, any worker count: byte-identical output.
  const MomentReport again = run_mean_value(cfg);
  CHECK(to_json(rep) == to_json(again));
  cfg.workers = 4;
  CHECK(to_json(run_mean_value(cfg)) == to_json(rep));

  // A different seed draws a different sample.
  cfg.workers = 1;
  cfg.seed = 43;
  CHECK(run_mean_value(cfg).rows[0].sum_h != row.sum_h);

  // Each genus has its own substream: the g = 2 row is unchanged when g = 1
  // is added to the run.
  cfg.seed = 42;
  cfg.g_min = 1;
  const MomentReport wide = run_mean_value(cfg);
  REQUIRE(wide.rows.size() == 2);
  CHECK(wide.rows[1].sum_h == row.sum_h);
}

TEST_CASE("work budget and config validation") {
  ExperimentConfig cfg = base_config(5);
  cfg.g_min = cfg.g_max = 4;  // 5^9 * 9 monic visits: over the default budget
  CHECK_THROWS_WITH_AS(run_mean_value(cfg), doctest::Contains("BudgetExceeded"), Error);
  cfg.g_min = cfg.g_max = 1;
  cfg.budget = 10;
  CHECK_THROWS_WITH_AS(run_mean_value(cfg), doctest::Contains("BudgetExceeded"), Error);

  CHECK_THROWS_WITH_AS(run_mean_value(base_config(7)), doctest::Contains("BadField"), Error);

  cfg = base_config(5);
  cfg.g_min = 0;
  CHECK_THROWS_WITH_AS(run_mean_value(cfg), doctest::Contains("Unsupported"), Error);
  cfg = base_config(5);
  cfg.g_min = 2;
  cfg.g_max = 1;
  CHECK_THROWS_WITH_AS(run_mean_value(cfg), doctest::Contains("Unsupported"), Error);
  cfg = base_config(5);
  cfg.workers = 0;
  CHECK_THROWS_WITH_AS(run_mean_value(cfg), doctest::Contains("Unsupported"), Error);
  cfg = base_config(5);
  cfg.cutoff = -1;
  CHECK_THROWS_WITH_AS(run_mean_value(cfg), doctest::Contains("Unsupported"), Error);
  cfg = base_config(5);
  cfg.mode = RunMode::sample;  // sample_size left at 0
  CHECK_THROWS_WITH_AS(run_mean_value(cfg), doctest::Contains("Unsupported"), Error);
}

TEST_CASE("non-square contribution monitor") {
  const FieldSpec f = make_field(5);

  const NonsquareReport g1 = run_nonsquare_monitor(f, 1);
  CHECK(g1.non1 == 0);
  CHECK(g1.non2 == 0);
  CHECK(g1.ratio1 == 0);
  CHECK(g1.ratio2 == 0);

  const NonsquareReport g2 = run_nonsquare_monitor(f, 2);
  CHECK(g2.non1 == Rational(12, 5));
  CHECK(g2.non2 == 0);
  CHECK(as_double(g2.ratio1) == doctest::Approx(0.024).epsilon(1e-9));

  const NonsquareReport g3 = run_nonsquare_monitor(f, 3);
  CHECK(g3.non1 == Rational(32, 5));
  CHECK(g3.non2 == Rational(32, 25));
  CHECK(as_double(g3.ratio1) == doctest::Approx(0.0064).epsilon(1e-9));
  CHECK(as_double(g3.ratio2) == doctest::Approx(0.00128).epsilon(1e-9));

  CHECK_THROWS_WITH_AS(run_nonsquare_monitor(f, 5, 100), doctest::Contains("BudgetExceeded"),
                       Error);
  CHECK_THROWS_WITH_AS(run_nonsquare_monitor(make_field(7), 1), doctest::Contains("BadField"),
                       Error);
}

TEST_CASE("coprimality counts against the closed-form prediction") {
  const FieldSpec f = make_field(5);
  const Poly t = Poly::variable(f);
  const Poly t1 = t + Poly::one(f);

  struct Pin {
    Poly l;
    int g;
    BigInt count;
    Rational main;
  };
  const Pin pins[] = {
      {t, 1, 84, Rational(250, 3)},
      {t, 2, 2084, Rational(6250, 3)},
      {t1, 1, 84, Rational(250, 3)},
      {t1, 2, 2084, Rational(6250, 3)},
      {t * t1, 1, 71, Rational(625, 9)},
      {t * t1, 2, 1739, Rational(15625, 9)},
      {parse_poly(f, "T^2+2"), 1, 95, Rational(1250, 13)},
      {parse_poly(f, "T^2+2"), 2, 2405, Rational(31250, 13)},
  };
  for (const Pin& pin : pins) {
    const Prop2Report r = run_prop2_check(f, pin.g, pin.l);
    CHECK(r.count == pin.count);
    CHECK(r.main_term == pin.main);
    CHECK(r.error == Rational(pin.count) - pin.main);
    CHECK(r.normalized_error <= 10);
  }

  // l = 1 filters nothing, so the count equals the main term exactly.
  const Prop2Report triv = run_prop2_check(f, 1, Poly::one(f));
  CHECK(triv.count == 100);
  CHECK(triv.main_term == Rational(100));
  CHECK(triv.error == 0);
  CHECK(triv.normalized_error == 0);

  const Prop2Report tg1 = run_prop2_check(f, 1, t);
  CHECK(as_double(tg1.normalized_error) == doctest::Approx(0.0745355992).epsilon(1e-6));

  CHECK_THROWS_WITH_AS(run_prop2_check(f, 6, t, 1000), doctest::Contains("BudgetExceeded"),
                       Error);
}

TEST_CASE("cross-validation web passes end to end") {
  const FieldSpec f = make_field(5);
  const VerifyReport rep = run_verify_suite(f, 2);
  CHECK(rep.q == 5);
  CHECK(rep.g_max == 2);
  CHECK(rep.all_pass);
  CHECK(rep.discriminants == 2600);
  REQUIRE(rep.invariants.size() == 9);
  const char* names[] = {"functional_equation",
                         "weil_bound",
                         "class_number_positive_integral",
                         "a1_point_identity",
                         "approx_fe_identity",
                         "approx_fe_public_subset",
                         "direct_vs_fast",
                         "char_sum_vanishing",
                         "ensemble_count"};
  const std::uint64_t checked[] = {2600, 12800, 2600, 2600, 2600, 24, 12, 18, 2};
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(rep.invariants[i].name == names[i]);
    CHECK(rep.invariants[i].pass);
    CHECK(rep.invariants[i].checked == checked[i]);
    CHECK(rep.invariants[i].counterexample.empty());
  }

  const std::string text = to_text(rep);
  CHECK(text.find("PASS functional_equation") != std::string::npos);
  CHECK(text.find("9 invariants, 0 failures, 2600 discriminants covered") != std::string::npos);
}

TEST_CASE("serialization formats") {
  ExperimentConfig cfg = base_config(5);
  const MomentReport rep = run_mean_value(cfg);

  const std::string csv = to_csv(rep);
  const std::string header =
      "q,g,ensemble_size,sum_L_num,sum_L_den,sum_h,main_proof,main_literal,corollary,"
      "rel_err_leading,err_over_2qg";
  REQUIRE(csv.rfind(header + "\n", 0) == 0);
  CHECK(csv.substr(header.size() + 1, 22) == "5,1,100,120,1,600,120.");
  CHECK(csv.back() == '\n');

  const nlohmann::json j = nlohmann::json::parse(to_json(rep));
  CHECK(j["config"]["q"] == 5);
  CHECK(j["config"]["mode"] == "full");
  CHECK(j["config"].contains("seed") == false);  // full mode omits sampling keys
  REQUIRE(j["rows"].size() == 1);
  CHECK(j["rows"][0]["g"] == 1);
  CHECK(j["rows"][0]["ensemble_size"] == "100");
  CHECK(j["rows"][0]["sum_L_num"] == "120");
  CHECK(j["rows"][0]["sum_L_den"] == "1");
  CHECK(j["rows"][0]["sum_h"] == "600");
  CHECK(j["rows"][0].contains("std_error") == false);

  cfg.mode = RunMode::sample;
  cfg.sample_size = 50;
  cfg.seed = 7;
  const nlohmann::json js = nlohmann::json::parse(to_json(run_mean_value(cfg)));
  CHECK(js["config"]["sample_size"] == 50);
  CHECK(js["config"]["seed"] == 7);
  CHECK(js["rows"][0].contains("std_error"));

  const nlohmann::json jv = nlohmann::json::parse(to_json(run_verify_suite(make_field(5), 1)));
  CHECK(jv["all_pass"] == true);
  CHECK(jv["invariants"].size() == 9);

  const nlohmann::json jp =
      nlohmann::json::parse(to_json(run_prop2_check(make_field(5), 1, Poly::variable(make_field(5)))));
  CHECK(jp["count"] == "84");

  const nlohmann::json jn = nlohmann::json::parse(to_json(run_nonsquare_monitor(make_field(5), 2)));
  CHECK(jn["q"] == 5);
}

}  // TEST_SUITE
