#include "binpack/rational.hpp"

#include <cstdlib>
#include <limits>
#include <ostream>

namespace binpack {
namespace {

using i128 = __int128;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("rational term exceeds int64 after reduction");
  }
  return static_cast<std::int64_t>(v);
}

Rational make_reduced(i128 num, i128 den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  Rational r;
  r.num = narrow(num);
  r.den = narrow(den);
  return r;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) { *this = make_reduced(n, d); }

Rational Rational::operator+(const Rational& o) const {
  return make_reduced(i128(num) * o.den + i128(o.num) * den, i128(den) * o.den);
}

Rational Rational::operator-(const Rational& o) const {
  return make_reduced(i128(num) * o.den - i128(o.num) * den, i128(den) * o.den);
}

Rational Rational::operator*(const Rational& o) const {
  return make_reduced(i128(num) * o.num, i128(den) * o.den);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw std::invalid_argument("rational division by zero");
  return make_reduced(i128(num) * o.den, i128(den) * o.num);
}

bool Rational::operator<(const Rational& o) const {
  return i128(num) * o.den < i128(o.num) * den;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = text.find('/');
  auto parse_int = [](const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer in rational literal");
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad rational literal: " + s);
    }
    if (pos != s.size()) throw std::invalid_argument("trailing junk in rational literal: " + s);
    return static_cast<std::int64_t>(v);
  };
  if (slash == std::string::npos) return Rational::integer(parse_int(text));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::string to_string(const Rational& r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << to_string(r); }

}  // namespace binpack
