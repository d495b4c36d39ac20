#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace classd {

// Non-negative fraction kept in lowest terms. Used where a quotient has to
// survive round trips exactly (execution time = cycles / frequency).
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Rational() = default;
  Rational(std::uint64_t n, std::uint64_t d) : num(n), den(d) {
    if (d == 0) throw std::domain_error("zero denominator");
    const std::uint64_t g = std::gcd(n, d);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<unsigned __int128>(a.num) * b.den <
           static_cast<unsigned __int128>(b.num) * a.den;
  }
};

// Multiplies by an integer, throwing if the result no longer fits.
inline Rational operator*(const Rational& r, std::uint64_t k) {
  const std::uint64_t g = std::gcd(k, r.den);
  const unsigned __int128 n = static_cast<unsigned __int128>(r.num) * (k / g);
  if (n > UINT64_MAX) throw std::overflow_error("rational overflow");
  return Rational(static_cast<std::uint64_t>(n), r.den / g);
}

}  // namespace classd
