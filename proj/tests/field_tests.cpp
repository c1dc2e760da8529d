#include "ffl/field.hpp"

#include "doctest.h"

using namespace ffl;

TEST_SUITE("field") {

TEST_CASE("make_field validates the characteristic") {
  CHECK(make_field(5).q == 5);
  CHECK(make_field(13).q == 13);
  CHECK(make_field(2).q == 2);
  CHECK_THROWS_WITH_AS(make_field(4), doctest::Contains("NotPrime"), Error);
  CHECK_THROWS_WITH_AS(make_field(1), doctest::Contains("NotPrime"), Error);
  CHECK_THROWS_WITH_AS(make_field(0), doctest::Contains("NotPrime"), Error);
  CHECK_THROWS_WITH_AS(make_field(91), doctest::Contains("NotPrime"), Error);  // 7 * 13
  CHECK_THROWS_WITH_AS(make_field(5, 2), doctest::Contains("Unsupported"), Error);
  CHECK_THROWS_WITH_AS(make_field(5, 0), doctest::Contains("Unsupported"), Error);
}

TEST_CASE("ensemble readiness is q = 1 (mod 4)") {
  CHECK(make_field(5).ensemble_ready());
  CHECK(make_field(13).ensemble_ready());
  CHECK(make_field(17).ensemble_ready());
  CHECK_FALSE(make_field(3).ensemble_ready());
  CHECK_FALSE(make_field(7).ensemble_ready());
  CHECK_FALSE(make_field(11).ensemble_ready());
  CHECK_FALSE(make_field(2).ensemble_ready());
}

TEST_CASE("prime field axioms hold exhaustively") {
  for (const std::uint32_t q : {2u, 3u, 5u, 13u}) {
    const FieldSpec f = make_field(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      CHECK(fq_add(a, 0, q) == a);
      CHECK(fq_mul(a, 1, q) == a);
      CHECK(fq_add(a, fq_neg(a, q), q) == 0);
      if (a != 0) CHECK(fq_mul(a, fq_inv(a, q), q) == 1);
      for (std::uint32_t b = 0; b < q; ++b) {
        CHECK(fq_add(a, b, q) == fq_add(b, a, q));
        CHECK(fq_mul(a, b, q) == fq_mul(b, a, q));
        CHECK(fq_sub(fq_add(a, b, q), b, q) == a);
        for (std::uint32_t c = 0; c < q; ++c) {
          CHECK(fq_add(fq_add(a, b, q), c, q) == fq_add(a, fq_add(b, c, q), q));
          CHECK(fq_mul(fq_mul(a, b, q), c, q) == fq_mul(a, fq_mul(b, c, q), q));
          CHECK(fq_mul(a, fq_add(b, c, q), q) ==
                fq_add(fq_mul(a, b, q), fq_mul(a, c, q), q));
        }
      }
    }
    (void)f;
  }
}

TEST_CASE("powers and inverses") {
  CHECK(fq_pow(0, 0, 5) == 1);  // empty product convention
  CHECK(fq_pow(0, 3, 5) == 0);
  CHECK(fq_pow(2, 10, 13) == 10);  // 1024 mod 13
  CHECK(fq_pow(3, 4, 5) == 1);
  CHECK_THROWS_WITH_AS(fq_inv(0, 5), doctest::Contains("DivisionByZero"), Error);
  for (std::uint32_t q : {3u, 5u, 13u})
    for (std::uint32_t a = 1; a < q; ++a) CHECK(fq_mul(a, fq_inv(a, q), q) == 1);
}

TEST_CASE("element wrappers reject mixed fields") {
  const FieldSpec f5 = make_field(5), f13 = make_field(13);
  const FieldElement a{2, f5}, b{3, f5}, c{3, f13};
  CHECK(field_add(a, b).value == 0);
  CHECK(field_mul(a, b).value == 1);
  CHECK(field_pow(a, 3).value == 3);
  CHECK(field_inv(a).value == 3);
  CHECK_THROWS_WITH_AS(field_add(a, c), doctest::Contains("BadField"), Error);
  CHECK_THROWS_WITH_AS(field_mul(a, c), doctest::Contains("BadField"), Error);
}

TEST_CASE("quadratic residue symbol on F_q") {
  // q = 5: squares are {1, 4}.
  CHECK(residue_symbol_fq(0, 5) == 0);
  CHECK(residue_symbol_fq(1, 5) == 1);
  CHECK(residue_symbol_fq(4, 5) == 1);
  CHECK(residue_symbol_fq(2, 5) == -1);
  CHECK(residue_symbol_fq(3, 5) == -1);
  CHECK_THROWS_WITH_AS(residue_symbol_fq(1, 2), doctest::Contains("OddCharacteristicRequired"),
                       Error);

  for (const std::uint32_t q : {5u, 13u, 17u}) {
    int squares = 0;
    for (std::uint32_t a = 1; a < q; ++a) {
      if (residue_symbol_fq(a, q) == 1) ++squares;
      for (std::uint32_t b = 1; b < q; ++b)
        CHECK(residue_symbol_fq(fq_mul(a, b, q), q) ==
              residue_symbol_fq(a, q) * residue_symbol_fq(b, q));
    }
    CHECK(squares == static_cast<int>((q - 1) / 2));
  }

  const FieldSpec f = make_field(13);
  CHECK(residue_symbol_fq(FieldElement{3, f}) == 1);  // 3 = 4^2 mod 13
}

}  // TEST_SUITE
