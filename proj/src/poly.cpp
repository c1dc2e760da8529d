#include "ffl/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <sstream>

namespace ffl {

namespace {

// Signed degree with -1 for the zero polynomial; internal shorthand.
int deg_of(const Poly& f) { return static_cast<int>(f.coeffs().size()) - 1; }

void require_same_field(const Poly& a, const Poly& b) {
  if (!(a.field() == b.field())) fail(errc::BadField, "polynomials over different fields");
}

// Moebius function on ordinary integers (exponents of field extensions are
// tiny, so trial division is plenty).
int mobius_int(std::uint64_t n) {
  int factors = 0;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      ++factors;
    }
  }
  if (n > 1) ++factors;
  return factors % 2 == 0 ? 1 : -1;
}

}  // namespace

Poly::Poly(FieldSpec field, std::vector<std::uint32_t> coeffs)
    : field_(field), c_(std::move(coeffs)) {
  normalize();
}

void Poly::normalize() {
  for (auto& v : c_) v %= field_.q;
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int Poly::degree() const {
  if (c_.empty()) fail(errc::ZeroPolynomial, "degree of the zero polynomial");
  return static_cast<int>(c_.size()) - 1;
}

std::uint32_t Poly::leading_coeff() const {
  if (c_.empty()) fail(errc::ZeroPolynomial, "leading coefficient of the zero polynomial");
  return c_.back();
}

std::uint32_t Poly::eval(std::uint32_t x) const {
  x %= field_.q;
  std::uint32_t acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = fq_add(fq_mul(acc, x, field_.q), *it, field_.q);
  }
  return acc;
}

BigInt Poly::norm() const {
  if (c_.empty()) return 0;
  return bigint_pow(field_.q, c_.size() - 1);
}

Poly Poly::scaled(std::uint32_t s) const {
  s %= field_.q;
  std::vector<std::uint32_t> out(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] = fq_mul(c_[i], s, field_.q);
  return Poly(field_, std::move(out));
}

Poly Poly::monic() const {
  return scaled(fq_inv(leading_coeff(), field_.q));
}

Poly Poly::operator+(const Poly& other) const {
  require_same_field(*this, other);
  std::vector<std::uint32_t> out(std::max(c_.size(), other.c_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = fq_add(coeff(i), other.coeff(i), field_.q);
  }
  return Poly(field_, std::move(out));
}

Poly Poly::operator-(const Poly& other) const {
  require_same_field(*this, other);
  std::vector<std::uint32_t> out(std::max(c_.size(), other.c_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = fq_sub(coeff(i), other.coeff(i), field_.q);
  }
  return Poly(field_, std::move(out));
}

Poly Poly::operator-() const {
  std::vector<std::uint32_t> out(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] = fq_neg(c_[i], field_.q);
  return Poly(field_, std::move(out));
}

Poly Poly::operator*(const Poly& other) const {
  require_same_field(*this, other);
  if (c_.empty() || other.c_.empty()) return zero(field_);
  std::vector<std::uint32_t> out(c_.size() + other.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < other.c_.size(); ++j) {
      out[i + j] = fq_add(out[i + j], fq_mul(c_[i], other.c_[j], field_.q), field_.q);
    }
  }
  return Poly(field_, std::move(out));
}

bool poly_less(const Poly& a, const Poly& b) {
  if (a.coeffs().size() != b.coeffs().size()) return a.coeffs().size() < b.coeffs().size();
  for (std::size_t i = a.coeffs().size(); i-- > 0;) {
    if (a.coeffs()[i] != b.coeffs()[i]) return a.coeffs()[i] < b.coeffs()[i];
  }
  return false;
}

DivRem poly_divrem(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  if (b.is_zero()) fail(errc::DivisionByZero, "polynomial division by zero");
  const std::uint32_t q = a.field().q;
  const int db = deg_of(b);
  if (deg_of(a) < db) return {Poly::zero(a.field()), a};

  std::vector<std::uint32_t> rem = a.coeffs();
  // Quotient slots are pre-sized so degree drops of more than one per step
  // still land each coefficient at its correct power of T.
  std::vector<std::uint32_t> quot(rem.size() - static_cast<std::size_t>(db), 0);
  const std::uint32_t inv_lead = fq_inv(b.leading_coeff(), q);

  for (int k = static_cast<int>(rem.size()) - 1; k >= db; --k) {
    const std::uint32_t top = rem[static_cast<std::size_t>(k)];
    if (top == 0) continue;
    const std::uint32_t factor = fq_mul(top, inv_lead, q);
    const int shift = k - db;
    quot[static_cast<std::size_t>(shift)] = factor;
    for (int j = 0; j <= db; ++j) {
      auto& r = rem[static_cast<std::size_t>(shift + j)];
      r = fq_sub(r, fq_mul(factor, b.coeff(static_cast<std::size_t>(j)), q), q);
    }
  }
  return {Poly(a.field(), std::move(quot)), Poly(a.field(), std::move(rem))};
}

Poly poly_mod(const Poly& a, const Poly& b) { return poly_divrem(a, b).remainder; }

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& mod) {
  return poly_mod(a * b, mod);
}

Poly poly_powmod(const Poly& base, const BigInt& exp, const Poly& mod) {
  if (exp < 0) fail(errc::Unsupported, "negative exponent in poly_powmod");
  Poly result = poly_mod(Poly::one(base.field()), mod);
  if (exp == 0) return result;
  Poly b = poly_mod(base, mod);
  const std::size_t bits = boost::multiprecision::msb(exp) + 1;
  for (std::size_t i = bits; i-- > 0;) {
    result = poly_mulmod(result, result, mod);
    if (boost::multiprecision::bit_test(exp, static_cast<unsigned>(i))) {
      result = poly_mulmod(result, b, mod);
    }
  }
  return result;
}

Poly poly_gcd(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  if (a.is_zero() && b.is_zero()) fail(errc::BothZero, "gcd(0, 0) is undefined");
  Poly x = a;
  Poly y = b;
  while (!y.is_zero()) {
    Poly r = poly_mod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Poly derivative(const Poly& f) {
  if (f.coeffs().size() <= 1) return Poly::zero(f.field());
  std::vector<std::uint32_t> out(f.coeffs().size() - 1);
  for (std::size_t i = 1; i < f.coeffs().size(); ++i) {
    out[i - 1] = fq_mul(static_cast<std::uint32_t>(i % f.field().q), f.coeffs()[i], f.field().q);
  }
  return Poly(f.field(), std::move(out));
}

bool is_squarefree(const Poly& f) {
  if (f.is_zero()) fail(errc::ZeroPolynomial, "squarefreeness of the zero polynomial");
  if (deg_of(f) == 0) return true;
  Poly d = derivative(f);
  if (d.is_zero()) return false;  // p-th power over a prime field
  return deg_of(poly_gcd(f, d)) == 0;
}

bool is_irreducible(const Poly& f) {
  if (f.is_zero()) fail(errc::ZeroPolynomial, "irreducibility of the zero polynomial");
  const int n = deg_of(f);
  if (n == 0) fail(errc::ConstantInput, "irreducibility of a unit");
  if (n == 1) return true;

  const Poly m = f.monic();
  const Poly x = Poly::variable(f.field());
  const BigInt q = f.field().q;

  // Frobenius iterates x^(q^i) mod m for i = 1..n; h -> h^q is the Frobenius
  // because coefficients live in the prime field.
  std::vector<Poly> frob;
  frob.reserve(static_cast<std::size_t>(n));
  Poly h = poly_powmod(x, q, m);
  frob.push_back(h);
  for (int i = 1; i < n; ++i) {
    h = poly_powmod(h, q, m);
    frob.push_back(h);
  }

  // x^(q^n) == x mod m is necessary...
  if (!(frob.back() == poly_mod(x, m))) return false;
  // ...and no proper subfield may capture a root: for each prime divisor l
  // of n, gcd(x^(q^(n/l)) - x, m) must be trivial.
  std::vector<int> prime_divisors;
  int rest = n;
  for (int l = 2; l * l <= rest; ++l) {
    if (rest % l == 0) {
      prime_divisors.push_back(l);
      while (rest % l == 0) rest /= l;
    }
  }
  if (rest > 1) prime_divisors.push_back(rest);
  for (int l : prime_divisors) {
    const Poly diff = frob[static_cast<std::size_t>(n / l - 1)] - poly_mod(x, m);
    if (diff.is_zero() || deg_of(poly_gcd(diff, m)) > 0) return false;
  }
  return true;
}

const std::vector<Poly>& irreducible_table(const FieldSpec& field, int d) {
  if (d <= 0) fail(errc::NonPositiveDegree, "irreducible table needs d >= 1");
  static std::map<std::pair<std::uint32_t, int>, std::vector<Poly>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(field.q, d);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<Poly> table;
  for_each_monic(field, d, [&](const Poly& f) {
    if (is_irreducible(f)) table.push_back(f);
  });
  return cache.emplace(key, std::move(table)).first->second;
}

Factorization factor(const Poly& f) {
  if (f.is_zero()) fail(errc::ZeroPolynomial, "factorization of the zero polynomial");
  Factorization out;
  out.field = f.field();
  out.unit = f.leading_coeff();
  Poly m = f.monic();

  for (int d = 1; 2 * d <= deg_of(m); ++d) {
    for (const Poly& p : irreducible_table(f.field(), d)) {
      int mult = 0;
      for (;;) {
        DivRem dr = poly_divrem(m, p);
        if (!dr.remainder.is_zero()) break;
        m = dr.quotient;
        ++mult;
      }
      if (mult > 0) out.factors.emplace_back(p, mult);
      if (deg_of(m) < 2 * d) break;
    }
    if (deg_of(m) < 2 * (d + 1)) break;
  }
  if (deg_of(m) >= 1) out.factors.emplace_back(m, 1);

  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  return out;
}

Poly factorization_product(const Factorization& fact) {
  Poly out = Poly::constant(fact.field, fact.unit);
  for (const auto& [p, e] : fact.factors) {
    for (int i = 0; i < e; ++i) out = out * p;
  }
  return out;
}

int mobius(const Poly& f) {
  if (f.is_zero()) fail(errc::ZeroPolynomial, "Moebius of the zero polynomial");
  if (deg_of(f) == 0) return 1;
  if (!is_squarefree(f)) return 0;
  Factorization fact = factor(f);
  return fact.factors.size() % 2 == 0 ? 1 : -1;
}

BigInt euler_phi(const Poly& f) {
  if (f.is_zero()) fail(errc::ZeroPolynomial, "euler_phi of the zero polynomial");
  if (deg_of(f) == 0) fail(errc::ConstantInput, "euler_phi of a unit");
  BigInt out = 1;
  for (const auto& [p, e] : factor(f).factors) {
    const BigInt np = bigint_pow(f.field().q, static_cast<std::uint64_t>(deg_of(p)));
    BigInt term = np - 1;
    for (int i = 1; i < e; ++i) term *= np;
    out *= term;
  }
  return out;
}

BigInt count_irreducible(const FieldSpec& field, int n) {
  if (n <= 0) fail(errc::NonPositiveDegree, "count_irreducible needs n >= 1");
  BigInt sum = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    sum += mobius_int(static_cast<std::uint64_t>(d)) *
           bigint_pow(field.q, static_cast<std::uint64_t>(n / d));
  }
  BigInt count = sum / n;
  if (count * n != sum) fail(errc::Unsupported, "prime polynomial count was not integral");
  return count;
}

BigInt monic_count(const FieldSpec& field, int d) {
  if (d < 0) fail(errc::NonPositiveDegree, "monic_count needs d >= 0");
  return bigint_pow(field.q, static_cast<std::uint64_t>(d));
}

Poly monic_at(const FieldSpec& field, int d, std::uint64_t index) {
  if (d < 0) fail(errc::NonPositiveDegree, "monic_at needs d >= 0");
  std::vector<std::uint32_t> c(static_cast<std::size_t>(d) + 1, 0);
  for (int j = 0; j < d; ++j) {
    c[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(index % field.q);
    index /= field.q;
  }
  if (index != 0) fail(errc::Unsupported, "monic index out of range");
  c[static_cast<std::size_t>(d)] = 1;
  return Poly(field, std::move(c));
}

std::uint64_t monic_index(const Poly& f) {
  if (!f.is_monic()) fail(errc::NotMonic, "monic_index of a non-monic polynomial");
  std::uint64_t idx = 0;
  for (std::size_t i = f.coeffs().size() - 1; i-- > 0;) {
    idx = idx * f.field().q + f.coeffs()[i];
  }
  return idx;
}

BigInt ensemble_size(const FieldSpec& field, int g) {
  if (!field.ensemble_ready()) {
    fail(errc::BadFieldForEnsemble,
         "ensemble requires q = 1 (mod 4), got q = " + std::to_string(field.q));
  }
  if (g < 0) fail(errc::Unsupported, "genus must be nonnegative");
  if (g == 0) return field.q;  // every monic linear polynomial is squarefree
  return (BigInt(field.q) - 1) * bigint_pow(field.q, 2 * static_cast<std::uint64_t>(g));
}

std::string to_coeff_string(const Poly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    if (i > 0) os << ',';
    os << f.coeffs()[i];
  }
  return os.str();
}

std::string to_pretty_string(const Poly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = f.coeffs().size(); i-- > 0;) {
    const std::uint32_t c = f.coeffs()[i];
    if (c == 0) continue;
    if (!first) os << '+';
    first = false;
    if (i == 0) {
      os << c;
    } else {
      if (c != 1) os << c << '*';
      os << 'T';
      if (i > 1) os << '^' << i;
    }
  }
  return os.str();
}

namespace {

// Parses "c0,c1,...,cd" with optional signs and whitespace.
Poly parse_coeff_list(const FieldSpec& field, const std::string& text) {
  std::vector<std::uint32_t> coeffs;
  std::string token;
  std::istringstream is(text);
  while (std::getline(is, token, ',')) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(token, &pos);
    } catch (const std::exception&) {
      fail(errc::ParseError, "bad coefficient '" + token + "'");
    }
    while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
    if (pos != token.size()) fail(errc::ParseError, "bad coefficient '" + token + "'");
    const long long q = field.q;
    coeffs.push_back(static_cast<std::uint32_t>(((v % q) + q) % q));
  }
  if (coeffs.empty()) fail(errc::ParseError, "empty polynomial text");
  if (!text.empty() && text.back() == ',') fail(errc::ParseError, "trailing comma");
  return Poly(field, std::move(coeffs));
}

// Parses sums of monomials like "T^3+2*T+1" or "3T^2 - T".
Poly parse_pretty(const FieldSpec& field, const std::string& text) {
  std::vector<std::uint32_t> coeffs;
  const long long q = field.q;
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };

  skip_ws();
  if (i == text.size()) fail(errc::ParseError, "empty polynomial text");
  bool expect_term = true;
  long long sign = 1;
  while (i < text.size()) {
    skip_ws();
    if (i == text.size()) break;
    const char ch = text[i];
    if (ch == '+' || ch == '-') {
      if (expect_term && ch == '+') fail(errc::ParseError, "dangling '+'");
      sign = (ch == '-') ? -sign : sign;
      ++i;
      expect_term = true;
      continue;
    }
    if (!expect_term) fail(errc::ParseError, "missing '+' before term");

    long long coef = 1;
    bool saw_coef = false;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t pos = 0;
      coef = std::stoll(text.substr(i), &pos);
      i += pos;
      saw_coef = true;
      skip_ws();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip_ws();
        if (i == text.size() || (text[i] != 'T' && text[i] != 't')) {
          fail(errc::ParseError, "expected T after '*'");
        }
      }
    }
    long long exp = 0;
    if (i < text.size() && (text[i] == 'T' || text[i] == 't')) {
      ++i;
      exp = 1;
      skip_ws();
      if (i < text.size() && text[i] == '^') {
        ++i;
        skip_ws();
        if (i == text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
          fail(errc::ParseError, "expected exponent after '^'");
        }
        std::size_t pos = 0;
        exp = std::stoll(text.substr(i), &pos);
        i += pos;
      }
    } else if (!saw_coef) {
      fail(errc::ParseError, std::string("unexpected character '") + ch + "'");
    }
    if (exp < 0 || exp > 1'000'000) fail(errc::ParseError, "exponent out of range");
    if (coeffs.size() < static_cast<std::size_t>(exp) + 1) {
      coeffs.resize(static_cast<std::size_t>(exp) + 1, 0);
    }
    const long long add = ((sign * coef) % q + q) % q;
    coeffs[static_cast<std::size_t>(exp)] =
        static_cast<std::uint32_t>((coeffs[static_cast<std::size_t>(exp)] + add) % q);
    sign = 1;
    expect_term = false;
  }
  if (expect_term) fail(errc::ParseError, "trailing sign without term");
  return Poly(field, std::move(coeffs));
}

}  // namespace

Poly parse_poly(const FieldSpec& field, const std::string& text) {
  if (text.find('T') != std::string::npos || text.find('t') != std::string::npos) {
    return parse_pretty(field, text);
  }
  return parse_coeff_list(field, text);
}

}  // namespace ffl
