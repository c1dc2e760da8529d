#pragma once

#include "ffl/poly.hpp"

#include <random>
#include <vector>

namespace ffl_test {

// Deterministic random polynomial of degree exactly deg (monic when asked),
// or the zero polynomial when deg < 0.
inline ffl::Poly random_poly(std::mt19937& rng, const ffl::FieldSpec& field, int deg,
                             bool monic = false) {
  if (deg < 0) return ffl::Poly::zero(field);
  std::vector<std::uint32_t> c(static_cast<std::size_t>(deg) + 1);
  for (auto& v : c) v = static_cast<std::uint32_t>(rng() % field.q);
  c.back() = monic ? 1 : 1 + static_cast<std::uint32_t>(rng() % (field.q - 1));
  return ffl::Poly::from_coeffs(field, std::move(c));
}

}  // namespace ffl_test
