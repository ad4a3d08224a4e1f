#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace binpack {

// Exact rational arithmetic over int64 terms.  Values are kept normalized
// (den > 0, gcd(|num|, den) == 1).  Operations compute through 128-bit
// intermediates and throw std::overflow_error if a reduced result no longer
// fits; the quantities handled here (probabilities, quantile grid points,
// empirical frequencies) stay far below that.
struct Rational {
  std::int64_t num{0};
  std::int64_t den{1};

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);
  static Rational integer(std::int64_t n) {
    Rational r;
    r.num = n;
    return r;
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }
};

// Parses "7/48", "3", or "-1/2".  Throws std::invalid_argument on anything else.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& r);
std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace binpack
