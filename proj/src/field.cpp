#include "ffl/field.hpp"

#include <string>

namespace ffl {

namespace {

bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint32_t d = 3; static_cast<std::uint64_t>(d) * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

void require_same_field(const FieldSpec& a, const FieldSpec& b) {
  if (!(a == b)) fail(errc::BadField, "elements belong to different fields");
}

}  // namespace

FieldSpec make_field(std::uint32_t p, std::uint32_t e) {
  if (!is_prime_u32(p)) {
    fail(errc::NotPrime, "p = " + std::to_string(p) + " is not prime");
  }
  if (e == 0) {
    fail(errc::Unsupported, "extension degree must be positive");
  }
  if (e > 1) {
    fail(errc::Unsupported,
         "extension fields (e = " + std::to_string(e) + ") are not implemented; use e = 1");
  }
  return FieldSpec{p, 1, p};
}

std::uint32_t fq_pow(std::uint32_t a, std::uint64_t n, std::uint32_t q) {
  std::uint64_t base = a % q;
  std::uint64_t result = 1;
  while (n > 0) {
    if (n & 1) result = (result * base) % q;
    base = (base * base) % q;
    n >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

std::uint32_t fq_inv(std::uint32_t a, std::uint32_t q) {
  a %= q;
  if (a == 0) fail(errc::DivisionByZero, "inverse of zero in F_" + std::to_string(q));
  // Fermat: a^(q-2) since q is prime.
  return fq_pow(a, q - 2, q);
}

FieldElement field_add(FieldElement a, FieldElement b) {
  require_same_field(a.spec, b.spec);
  return {fq_add(a.value, b.value, a.spec.q), a.spec};
}

FieldElement field_mul(FieldElement a, FieldElement b) {
  require_same_field(a.spec, b.spec);
  return {fq_mul(a.value, b.value, a.spec.q), a.spec};
}

FieldElement field_pow(FieldElement a, std::uint64_t n) {
  return {fq_pow(a.value, n, a.spec.q), a.spec};
}

FieldElement field_inv(FieldElement a) {
  return {fq_inv(a.value, a.spec.q), a.spec};
}

int residue_symbol_fq(std::uint32_t a, std::uint32_t q) {
  if (q % 2 == 0) {
    fail(errc::OddCharacteristicRequired,
         "quadratic residue symbol needs odd q, got q = " + std::to_string(q));
  }
  a %= q;
  if (a == 0) return 0;
  std::uint32_t r = fq_pow(a, (q - 1) / 2, q);
  return r == 1 ? 1 : -1;
}

int residue_symbol_fq(const FieldElement& a) {
  return residue_symbol_fq(a.value, a.spec.q);
}

}  // namespace ffl
