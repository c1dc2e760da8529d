#pragma once

#include <stdexcept>
#include <string>

namespace ffl {

// Every failure mode in the library carries a stable machine-readable code
// plus a human-readable detail string.  The what() text is "Code: detail".
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& detail) {
  throw Error(code, detail);
}

namespace errc {
// Field / element construction.
inline constexpr const char* NotPrime = "NotPrime";
inline constexpr const char* Unsupported = "Unsupported";
inline constexpr const char* OddCharacteristicRequired = "OddCharacteristicRequired";
inline constexpr const char* EvenCharacteristic = "EvenCharacteristic";
inline constexpr const char* BadField = "BadField";
// Polynomial arithmetic.
inline constexpr const char* DivisionByZero = "DivisionByZero";
inline constexpr const char* BothZero = "BothZero";
inline constexpr const char* ZeroPolynomial = "ZeroPolynomial";
inline constexpr const char* ConstantInput = "ConstantInput";
inline constexpr const char* NonPositiveDegree = "NonPositiveDegree";
inline constexpr const char* NotIrreducible = "NotIrreducible";
inline constexpr const char* NotMonic = "NotMonic";
inline constexpr const char* ParseError = "ParseError";
// Characters and L-functions.
inline constexpr const char* ZeroDenominator = "ZeroDenominator";
inline constexpr const char* DegreeTooLarge = "DegreeTooLarge";
inline constexpr const char* NotSquareFree = "NotSquareFree";
inline constexpr const char* EvenDegree = "EvenDegree";
inline constexpr const char* UnsupportedGenus = "UnsupportedGenus";
inline constexpr const char* NonIntegralClassNumber = "NonIntegralClassNumber";
inline constexpr const char* NonPositive = "NonPositive";
// Special values.
inline constexpr const char* PoleAtOne = "PoleAtOne";
inline constexpr const char* ZeroModulus = "ZeroModulus";
inline constexpr const char* DegreeTooSmall = "DegreeTooSmall";
// Ensembles and experiments.
inline constexpr const char* BadFieldForEnsemble = "BadFieldForEnsemble";
inline constexpr const char* BudgetExceeded = "BudgetExceeded";
}  // namespace errc

}  // namespace ffl
