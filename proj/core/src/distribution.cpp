#include "binpack/distribution.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "binpack/errors.hpp"

namespace binpack {
namespace {

using u128 = unsigned __int128;

std::string default_name(const DistributionSpec& spec) {
  if (std::holds_alternative<UniformSpec>(spec.family)) return "uniform01";
  if (const auto* tp = std::get_if<TwoPointSpec>(&spec.family)) {
    return "twopoint-" + std::to_string(tp->epsilon.num) + "-" + std::to_string(tp->epsilon.den);
  }
  const auto& d = std::get<DiscreteSpec>(spec.family);
  return "discrete-B" + std::to_string(d.den) + "-J" + std::to_string(d.support.size());
}

void check_discrete(const DiscreteSpec& d) {
  if (d.den < 2) throw ParseError("discrete distribution needs capacity >= 2");
  if (d.support.empty()) throw ParseError("discrete distribution needs at least one atom");
  if (d.support.size() != d.probs.size()) throw ParseError("support/probability length mismatch");
  Rational sum;
  for (std::size_t j = 0; j < d.support.size(); ++j) {
    const std::int64_t v = d.support[j].value;
    if (v <= 0 || v >= d.den) throw ParseError("atom value must lie strictly inside (0, capacity)");
    if (j > 0 && !(d.support[j - 1].value < v)) throw ParseError("support must be strictly ascending");
    if (!(Rational() < d.probs[j])) throw ParseError("atom probabilities must be positive");
    sum += d.probs[j];
  }
  if (!(sum == Rational::integer(1))) {
    throw ParseError("atom probabilities must sum to exactly 1, got " + to_string(sum));
  }
}

// Exact comparison draw/2^64 < cum without any rounding of the rational.
bool below_threshold(std::uint64_t draw, const Rational& cum) {
  if (cum.num <= 0) return false;
  if (cum.num >= cum.den) return true;
  return static_cast<u128>(draw) * static_cast<u128>(cum.den) <
         static_cast<u128>(cum.num) << 64;
}

std::int64_t sample_discrete(const DiscreteSpec& d, Rng& rng) {
  const std::uint64_t draw = rng.next_u64();
  Rational cum;
  for (std::size_t j = 0; j < d.support.size(); ++j) {
    cum += d.probs[j];
    if (below_threshold(draw, cum)) return d.support[j].value;
  }
  return d.support.back().value;
}

}  // namespace

std::int64_t DistributionSpec::den() const {
  return std::visit([](const auto& f) { return f.den; }, family);
}

DistributionSpec make_discrete(std::int64_t den, std::vector<std::int64_t> values,
                               std::vector<Rational> probs, std::string name) {
  DiscreteSpec d;
  d.den = den;
  d.support.reserve(values.size());
  for (std::int64_t v : values) d.support.push_back(Size{v});
  d.probs = std::move(probs);
  check_discrete(d);
  DistributionSpec spec{d, std::move(name)};
  if (spec.name.empty()) spec.name = default_name(spec);
  return spec;
}

DistributionSpec make_uniform() {
  DistributionSpec spec{UniformSpec{}, ""};
  spec.name = default_name(spec);
  return spec;
}

DistributionSpec make_two_point(Rational epsilon) {
  if (!(Rational() < epsilon) || !(epsilon < Rational(1, 2))) {
    throw ParseError("twopoint epsilon must lie in (0, 1/2)");
  }
  DistributionSpec spec{TwoPointSpec{epsilon, kContinuousDen}, ""};
  spec.name = default_name(spec);
  two_point_atoms(std::get<TwoPointSpec>(spec.family));  // validate grid fit eagerly
  return spec;
}

DiscreteSpec two_point_atoms(const TwoPointSpec& spec) {
  const Rational half(1, 2);
  const Rational lo = (half - spec.epsilon) * Rational::integer(spec.den);
  const Rational hi = (half + spec.epsilon) * Rational::integer(spec.den);
  if (!lo.is_integer() || !hi.is_integer()) {
    throw ParseError("twopoint atoms 1/2 +- " + to_string(spec.epsilon) +
                     " do not land on the 1/" + std::to_string(spec.den) + " grid");
  }
  DiscreteSpec d;
  d.den = spec.den;
  d.support = {Size{lo.num}, Size{hi.num}};
  d.probs = {half, half};
  check_discrete(d);
  return d;
}

std::int64_t quantile(const DistributionSpec& spec, const Rational& alpha) {
  if (alpha < Rational() || Rational::integer(1) < alpha) {
    throw std::invalid_argument("quantile probe outside [0, 1]");
  }
  if (alpha == Rational()) return 0;
  if (alpha == Rational::integer(1)) return spec.den();
  if (const auto* u = std::get_if<UniformSpec>(&spec.family)) {
    // F(y) = y, so the smallest grid point y with F(y) >= alpha is
    // ceil(alpha * den) / den.
    const u128 num = static_cast<u128>(alpha.num);
    const u128 scaled = num * static_cast<u128>(u->den);
    return static_cast<std::int64_t>((scaled + static_cast<u128>(alpha.den) - 1) /
                                     static_cast<u128>(alpha.den));
  }
  const DiscreteSpec atoms = std::holds_alternative<DiscreteSpec>(spec.family)
                                 ? std::get<DiscreteSpec>(spec.family)
                                 : two_point_atoms(std::get<TwoPointSpec>(spec.family));
  Rational cum;
  for (std::size_t j = 0; j < atoms.support.size(); ++j) {
    cum += atoms.probs[j];
    if (alpha <= cum) return atoms.support[j].value;
  }
  return atoms.support.back().value;  // unreachable: cum ends at exactly 1
}

Instance quantile_instance(const DistributionSpec& spec, std::int64_t T, bool shifted) {
  if (T < 1) throw std::invalid_argument("quantile instance needs T >= 1");
  Instance inst;
  inst.den = spec.den();
  inst.sizes.reserve(static_cast<std::size_t>(T));
  for (std::int64_t t = shifted ? 1 : 0; t < (shifted ? T + 1 : T); ++t) {
    const std::int64_t q = quantile(spec, Rational(t, T));
    if (q == 0) continue;
    inst.sizes.push_back(Size{q});
  }
  return inst;
}

Instance sample_iid(const DistributionSpec& spec, std::int64_t T, std::uint64_t seed) {
  if (T < 0) throw std::invalid_argument("negative horizon");
  Instance inst;
  inst.den = spec.den();
  inst.sizes.reserve(static_cast<std::size_t>(T));
  Rng rng(seed);
  if (const auto* u = std::get_if<UniformSpec>(&spec.family)) {
    for (std::int64_t t = 0; t < T; ++t) {
      inst.sizes.push_back(Size{1 + static_cast<std::int64_t>(
                                     rng.bounded(static_cast<std::uint64_t>(u->den - 1)))});
    }
    return inst;
  }
  const DiscreteSpec atoms = std::holds_alternative<DiscreteSpec>(spec.family)
                                 ? std::get<DiscreteSpec>(spec.family)
                                 : two_point_atoms(std::get<TwoPointSpec>(spec.family));
  for (std::int64_t t = 0; t < T; ++t) inst.sizes.push_back(Size{sample_discrete(atoms, rng)});
  return inst;
}

GroundSet make_ground_set(Instance items) {
  if (auto bad = validate_instance(items)) throw ParseError("invalid ground set: " + *bad);
  std::sort(items.sizes.begin(), items.sizes.end());
  return GroundSet{std::move(items)};
}

Instance sample_permutation(const GroundSet& ground, std::uint64_t seed) {
  Instance inst = ground.items;
  Rng rng(seed);
  for (std::size_t i = inst.sizes.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.bounded(i));
    std::swap(inst.sizes[i - 1], inst.sizes[j]);
  }
  return inst;
}

std::vector<Rational> empirical_pmf(const std::vector<Size>& history, std::size_t t,
                                    const std::vector<Size>& support) {
  if (t == 0 || t > history.size()) throw std::invalid_argument("empirical_pmf prefix out of range");
  std::vector<std::int64_t> counts(support.size(), 0);
  for (std::size_t i = 0; i < t; ++i) {
    const auto it = std::lower_bound(support.begin(), support.end(), history[i]);
    if (it == support.end() || !(*it == history[i])) {
      throw UnknownSize("observed size " + std::to_string(history[i].value) +
                        " is not in the declared support");
    }
    ++counts[static_cast<std::size_t>(it - support.begin())];
  }
  std::vector<Rational> pmf;
  pmf.reserve(support.size());
  for (std::int64_t c : counts) pmf.emplace_back(c, static_cast<std::int64_t>(t));
  return pmf;
}

DistributionSpec load_distribution(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  DistributionSpec spec = make_uniform();
  bool saw_header = false;
  std::int64_t discrete_den = 0;
  std::vector<std::int64_t> values;
  std::vector<Rational> probs;
  bool is_discrete = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!saw_header) {
      std::string family;
      ls >> family;
      if (family == "uniform") {
        spec = make_uniform();
      } else if (family == "twopoint") {
        std::string eps;
        if (!(ls >> eps)) throw ParseError("twopoint needs an epsilon rational");
        spec = make_two_point(parse_rational(eps));
      } else if (family == "discrete") {
        if (!(ls >> discrete_den)) throw ParseError("discrete needs a capacity denominator");
        is_discrete = true;
      } else {
        throw ParseError("unknown distribution family '" + family + "'");
      }
      saw_header = true;
      continue;
    }
    if (!is_discrete) throw ParseError("unexpected extra line " + std::to_string(line_no));
    std::int64_t value = 0;
    std::string prob;
    if (!(ls >> value >> prob)) {
      throw ParseError("discrete atom line " + std::to_string(line_no) +
                       ": expected '<value> <num/den>'");
    }
    values.push_back(value);
    probs.push_back(parse_rational(prob));
  }
  if (!saw_header) throw ParseError("distribution file has no family line");
  if (is_discrete) spec = make_discrete(discrete_den, std::move(values), std::move(probs));
  return spec;
}

void save_distribution(const DistributionSpec& spec, std::ostream& out) {
  if (std::holds_alternative<UniformSpec>(spec.family)) {
    out << "uniform\n";
    return;
  }
  if (const auto* tp = std::get_if<TwoPointSpec>(&spec.family)) {
    out << "twopoint " << to_string(tp->epsilon) << "\n";
    return;
  }
  const auto& d = std::get<DiscreteSpec>(spec.family);
  out << "discrete " << d.den << "\n";
  for (std::size_t j = 0; j < d.support.size(); ++j) {
    out << d.support[j].value << " " << to_string(d.probs[j]) << "\n";
  }
}

DistributionSpec load_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open distribution file: " + path);
  DistributionSpec spec = load_distribution(in);
  std::string base = path;
  if (auto pos = base.find_last_of('/'); pos != std::string::npos) base = base.substr(pos + 1);
  if (auto pos = base.find_last_of('.'); pos != std::string::npos) base = base.substr(0, pos);
  if (!base.empty()) spec.name = base;
  return spec;
}

}  // namespace binpack
