#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace binpack {

// Item size as an exact fraction value/den of the bin capacity.  Keeping
// sizes integral removes every floating-point feasibility ambiguity: an item
// fits a bin iff load + value <= den, exactly.
//
// Sampled items always satisfy 0 < value < den.  Quantile grids and
// ground-set padding may additionally produce value == den (a legal full-bin
// item), so containers accept the closed upper bound.
struct Size {
  std::int64_t value{0};

  friend auto operator<=>(const Size&, const Size&) = default;
};

// Denominator used for continuous families; samples are quantized onto this
// grid once, at generation time, and everything downstream stays exact.
inline constexpr std::int64_t kContinuousDen = 1'000'000'000;

// A multiset of items over one shared denominator.  Order of `sizes` matters
// wherever the instance represents an arrival stream; oracles treat it as a
// multiset.
struct Instance {
  std::int64_t den{0};
  std::vector<Size> sizes;

  std::int64_t total_value() const {
    std::int64_t sum = 0;
    for (const Size& s : sizes) sum += s.value;
    return sum;
  }
};

// nullopt when well-formed; otherwise a description of the first violation.
// Checks: den >= 1, and 0 < value <= den for every size.
std::optional<std::string> validate_instance(const Instance& inst);

// Text format, bit-exact round trip:
//   capacity <den>
//   <value>            (one integer per line, in order)
// Blank lines and lines starting with '#' are ignored.
Instance load_instance(std::istream& in);
void save_instance(const Instance& inst, std::ostream& out);
Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& inst, const std::string& path);

// Volume lower bound ceil(sum sizes / den) in exact integer arithmetic.
std::int64_t volume_lower_bound(const Instance& inst);

}  // namespace binpack
