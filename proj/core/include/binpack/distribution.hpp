#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "binpack/instance.hpp"
#include "binpack/rational.hpp"
#include "binpack/rng.hpp"

namespace binpack {

// Finite-support distribution over sizes value/den.  Support is strictly
// ascending; probabilities are positive exact rationals summing to one.
struct DiscreteSpec {
  std::int64_t den{0};
  std::vector<Size> support;
  std::vector<Rational> probs;
};

// Uniform on (0,1), quantized once at generation onto the den grid.
struct UniformSpec {
  std::int64_t den{kContinuousDen};
};

// Two atoms 1/2 - eps and 1/2 + eps with probability 1/2 each.
struct TwoPointSpec {
  Rational epsilon;
  std::int64_t den{kContinuousDen};
};

struct DistributionSpec {
  std::variant<DiscreteSpec, UniformSpec, TwoPointSpec> family;
  std::string name;  // label used in reports and CSV; derived if empty

  std::int64_t den() const;
  bool is_discrete_like() const { return !std::holds_alternative<UniformSpec>(family); }
};

DistributionSpec make_discrete(std::int64_t den, std::vector<std::int64_t> values,
                               std::vector<Rational> probs, std::string name = "");
DistributionSpec make_uniform();
DistributionSpec make_two_point(Rational epsilon);

// The two-point family expressed over its explicit atoms; throws ParseError
// if an atom does not land exactly on the den grid.
DiscreteSpec two_point_atoms(const TwoPointSpec& spec);

// Generalized inverse CDF on the quantile grid: the smallest grid value y
// with F(y) >= alpha, with the boundary conventions F^-1(0) = 0 and
// F^-1(1) = 1 (i.e. a full-bin item).  Returns the numerator over den();
// 0 only for alpha = 0.
std::int64_t quantile(const DistributionSpec& spec, const Rational& alpha);

// Deterministic quantile instance on the grid t/T.  shifted uses
// t = 1..T, unshifted t = 0..T-1.  Quantile value 0 (possible only
// unshifted, at t=0) is dropped: a size-0 item occupies no bin space.
// Quantile value 1 is kept as a full-bin item.
Instance quantile_instance(const DistributionSpec& spec, std::int64_t T, bool shifted);

// T independent draws; continuous families are quantized at generation and
// land strictly inside (0, den).  Deterministic function of (spec, T, seed).
Instance sample_iid(const DistributionSpec& spec, std::int64_t T, std::uint64_t seed);

// Fixed finite population for the random-permutation model, kept ascending.
struct GroundSet {
  Instance items;
};

GroundSet make_ground_set(Instance items);  // sorts ascending, validates

// Uniformly random arrival order of the full ground set.
Instance sample_permutation(const GroundSet& ground, std::uint64_t seed);

// Empirical frequencies over `support` of the first t entries of history
// (prefix INCLUDES the current item by the caller passing t accordingly).
// Exact rationals count/t; throws UnknownSize for an item outside support.
std::vector<Rational> empirical_pmf(const std::vector<Size>& history, std::size_t t,
                                    const std::vector<Size>& support);

// Text format, first meaningful line selects the family:
//   discrete <den>        followed by lines "<value> <num/den>"
//   uniform
//   twopoint <num/den>
// Blank lines and '#' comments are ignored.
DistributionSpec load_distribution(std::istream& in);
void save_distribution(const DistributionSpec& spec, std::ostream& out);
DistributionSpec load_distribution_file(const std::string& path);

}  // namespace binpack
