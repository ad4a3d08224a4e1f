#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "binpack/distribution.hpp"
#include "binpack/errors.hpp"
#include "binpack/instance.hpp"
#include "binpack/oracle.hpp"
#include "binpack/packing_state.hpp"
#include "binpack/rational.hpp"
#include "binpack/rng.hpp"
#include "support/brute.hpp"

using namespace binpack;

namespace {

Instance inst_of(std::int64_t den, std::vector<std::int64_t> vals) {
  Instance inst;
  inst.den = den;
  for (auto v : vals) inst.sizes.push_back(Size{v});
  return inst;
}

}  // namespace

TEST_CASE("rational parse and normalize") {
  CHECK(parse_rational("7/48") == Rational(7, 48));
  CHECK(parse_rational("3") == Rational::integer(3));
  CHECK(parse_rational("-1/2") == Rational(-1, 2));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));  // sign moves to the numerator
  CHECK(Rational(0, 7) == Rational::integer(0));
  CHECK(to_string(Rational(7, 48)) == "7/48");
  CHECK(to_string(Rational::integer(5)) == "5");
  CHECK(to_string(Rational(-1, 2)) == "-1/2");
  CHECK_THROWS_AS(parse_rational("1/0"), std::exception);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/2/3"), std::invalid_argument);
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational::integer(2));
  CHECK(Rational(35, 48) + Rational(13, 48) == Rational::integer(1));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(0, 1));
  CHECK(Rational(1, 2).to_double() == doctest::Approx(0.5));
  CHECK(Rational(1, 2) >= Rational(1, 2));
  Rational acc;
  for (int i = 0; i < 48; ++i) acc += Rational(1, 48);
  CHECK(acc == Rational::integer(1));
}

TEST_CASE("instance validation") {
  CHECK(!validate_instance(inst_of(10, {1, 5, 10})));  // value == den is legal
  CHECK(validate_instance(inst_of(0, {})).has_value());
  CHECK(validate_instance(inst_of(10, {0})).has_value());
  CHECK(validate_instance(inst_of(10, {11})).has_value());
  CHECK(validate_instance(inst_of(10, {-3})).has_value());
  CHECK(!validate_instance(inst_of(1, {1})));
}

TEST_CASE("instance io round trip") {
  const Instance inst = inst_of(48, {7, 7, 13, 48, 1});
  std::stringstream ss;
  save_instance(inst, ss);
  const Instance back = load_instance(ss);
  CHECK(back.den == inst.den);
  REQUIRE(back.sizes.size() == inst.sizes.size());
  for (std::size_t i = 0; i < inst.sizes.size(); ++i) CHECK(back.sizes[i] == inst.sizes[i]);
}

TEST_CASE("instance io comments and errors") {
  {
    std::stringstream ss("# header\n\ncapacity 10\n7\n# mid comment\n3\n");
    const Instance inst = load_instance(ss);
    CHECK(inst.den == 10);
    REQUIRE(inst.sizes.size() == 2);
    CHECK(inst.sizes[0].value == 7);
    CHECK(inst.sizes[1].value == 3);
  }
  {
    std::stringstream ss("7\n3\n");  // capacity line missing
    CHECK_THROWS_AS(load_instance(ss), ParseError);
  }
  {
    std::stringstream ss("capacity 10\nseven\n");
    CHECK_THROWS_AS(load_instance(ss), ParseError);
  }
  {
    std::stringstream ss("capacity 10\n12\n");  // value > den
    CHECK_THROWS_AS(load_instance(ss), ParseError);
  }
}

TEST_CASE("volume lower bound") {
  CHECK(volume_lower_bound(inst_of(10, {})) == 0);
  CHECK(volume_lower_bound(inst_of(10, {1})) == 1);
  CHECK(volume_lower_bound(inst_of(10, {5, 5})) == 1);
  CHECK(volume_lower_bound(inst_of(10, {5, 5, 1})) == 2);
  CHECK(volume_lower_bound(inst_of(10, {10, 10, 10})) == 3);
  CHECK(volume_lower_bound(inst_of(3, {2, 2})) == 2);
}

TEST_CASE("place_item basics") {
  PackingState state(10);
  const auto id0 = place_item(state, Size{7}, Placement::new_bin());
  CHECK(id0 == 0);
  CHECK(bins_used(state) == 1);
  CHECK(state.bins[0].load == 7);
  CHECK(state.level_histogram.at(7) == 1);

  // load 6 bin plus a 4 fills it exactly; full bins leave the histogram
  const auto id1 = place_item(state, Size{6}, Placement::new_bin());
  CHECK(id1 == 1);
  place_item(state, Size{4}, Placement::existing(1));
  CHECK(state.bins[1].load == 10);
  CHECK(state.level_histogram.count(6) == 0);
  CHECK(state.level_histogram.count(10) == 0);
  CHECK(bins_used(state) == 2);
  CHECK(!validate_state(state));
}

TEST_CASE("place_item rejections") {
  PackingState state(10);
  place_item(state, Size{6}, Placement::new_bin());
  CHECK_THROWS_AS(place_item(state, Size{5}, Placement::existing(0)), CapacityExceeded);
  CHECK_THROWS_AS(place_item(state, Size{1}, Placement::existing(5)), BadIndex);
  CHECK_THROWS_AS(place_item(state, Size{1}, Placement::existing(-2)), BadIndex);
  CHECK_THROWS_AS(place_item(state, Size{0}, Placement::new_bin()), Error);
  CHECK_THROWS_AS(place_item(state, Size{11}, Placement::new_bin()), CapacityExceeded);
  // failed placements change nothing
  CHECK(bins_used(state) == 1);
  CHECK(state.bins[0].load == 6);
  CHECK(!validate_state(state));
}

TEST_CASE("validate_state catches corruption") {
  PackingState state(10);
  place_item(state, Size{4}, Placement::new_bin());
  place_item(state, Size{3}, Placement::existing(0));
  REQUIRE(!validate_state(state));
  SUBCASE("load drift") {
    state.bins[0].load = 8;
    CHECK(validate_state(state).has_value());
  }
  SUBCASE("histogram drift") {
    state.level_histogram[3] = 1;
    CHECK(validate_state(state).has_value());
  }
  SUBCASE("opened_total drift") {
    state.opened_total = 2;
    CHECK(validate_state(state).has_value());
  }
  SUBCASE("duplicate item id") {
    state.bins[0].items[1].id = 0;
    CHECK(validate_state(state).has_value());
  }
  SUBCASE("overfull bin") {
    state.bins[0].items.push_back({2, 9});
    state.bins[0].load = 16;
    CHECK(validate_state(state).has_value());
  }
}

TEST_CASE("packing stress run") {
  const std::int64_t den = 100;
  PackingState state(den);
  Rng rng(20240817);
  std::int64_t placed_value = 0;
  std::int64_t placed_items = 0;
  for (int step = 0; step < 100'000; ++step) {
    const Size x{1 + static_cast<std::int64_t>(rng.bounded(den))};
    Placement where = Placement::new_bin();
    if (!state.bins.empty() && rng.bounded(2) == 0) {
      const auto idx = static_cast<std::int32_t>(rng.bounded(state.bins.size()));
      if (state.bins[idx].load + x.value <= den) where = Placement::existing(idx);
    }
    const auto id = place_item(state, x, where);
    CHECK(id == placed_items);
    placed_value += x.value;
    ++placed_items;
    if (step % 20'000 == 19'999) {
      REQUIRE(!validate_state(state));
    }
  }
  REQUIRE(!validate_state(state));
  // conservation and the volume bound
  std::int64_t load_sum = 0;
  for (const auto& bin : state.bins) load_sum += bin.load;
  CHECK(load_sum == placed_value);
  CHECK(bins_used(state) == static_cast<std::int64_t>(state.bins.size()));
  CHECK(bins_used(state) * den >= placed_value);
  // histogram covers exactly the partially filled bins
  std::map<std::int64_t, std::int64_t> expect;
  for (const auto& bin : state.bins)
    if (bin.load > 0 && bin.load < den) ++expect[bin.load];
  CHECK(state.level_histogram == expect);
}

TEST_CASE("quantile examples") {
  const auto uniform = make_uniform();
  CHECK(quantile(uniform, Rational(1, 2)) == kContinuousDen / 2);
  CHECK(quantile(uniform, Rational(0, 1)) == 0);
  CHECK(quantile(uniform, Rational(1, 1)) == kContinuousDen);
  CHECK(quantile(uniform, Rational(1, 4)) == kContinuousDen / 4);

  const auto bw = make_discrete(9, {2, 3}, {Rational(35, 48), Rational(13, 48)});
  CHECK(quantile(bw, Rational(1, 2)) == 2);
  CHECK(quantile(bw, Rational(35, 48)) == 2);   // F(2/9) = 35/48 exactly
  CHECK(quantile(bw, Rational(36, 48)) == 3);
  CHECK(quantile(bw, Rational(0, 1)) == 0);
  CHECK(quantile(bw, Rational(1, 1)) == 9);     // full-bin convention at alpha = 1

  const auto tp = make_two_point(Rational(1, 10));
  const std::int64_t den = tp.den();
  CHECK(quantile(tp, Rational(1, 2)) == den / 2 - den / 10);
  CHECK(quantile(tp, Rational(3, 4)) == den / 2 + den / 10);
}

TEST_CASE("quantile monotone in alpha") {
  const std::vector<DistributionSpec> specs = {
      make_uniform(), make_two_point(Rational(1, 10)),
      make_discrete(9, {2, 3}, {Rational(35, 48), Rational(13, 48)})};
  for (const auto& spec : specs) {
    std::int64_t prev = -1;
    for (int i = 0; i <= 40; ++i) {
      const auto q = quantile(spec, Rational(i, 40));
      CHECK(q >= prev);
      prev = q;
    }
    CHECK(prev == spec.den());
  }
}

TEST_CASE("quantile instance grids") {
  {
    const auto inst = quantile_instance(make_uniform(), 4, true);
    REQUIRE(inst.sizes.size() == 4);
    CHECK(inst.sizes[0].value == kContinuousDen / 4);
    CHECK(inst.sizes[1].value == kContinuousDen / 2);
    CHECK(inst.sizes[2].value == 3 * (kContinuousDen / 4));
    CHECK(inst.sizes[3].value == kContinuousDen);
  }
  {
    // unshifted grid drops the t=0 zero quantile
    const auto inst = quantile_instance(make_uniform(), 4, false);
    REQUIRE(inst.sizes.size() == 3);
    CHECK(inst.sizes[0].value == kContinuousDen / 4);
    CHECK(inst.sizes[2].value == 3 * (kContinuousDen / 4));
  }
  {
    const auto tp = make_two_point(Rational(1, 10));
    const auto den = tp.den();
    const auto inst = quantile_instance(tp, 2, true);
    REQUIRE(inst.sizes.size() == 2);
    CHECK(inst.sizes[0].value == den / 2 - den / 10);
    CHECK(inst.sizes[1].value == den);  // alpha = 1 is the full-bin point
  }
  {
    const auto inst = quantile_instance(make_uniform(), 1, false);
    CHECK(inst.sizes.empty());
  }
}

TEST_CASE("sample_iid determinism and support") {
  const auto bw = make_discrete(9, {2, 3}, {Rational(35, 48), Rational(13, 48)});
  const auto a = sample_iid(bw, 64, 7);
  const auto b = sample_iid(bw, 64, 7);
  const auto c = sample_iid(bw, 64, 8);
  REQUIRE(a.sizes.size() == 64);
  CHECK(a.den == 9);
  bool same = true;
  for (std::size_t i = 0; i < 64; ++i) same = same && a.sizes[i] == b.sizes[i];
  CHECK(same);
  bool differs = false;
  for (std::size_t i = 0; i < 64; ++i) differs = differs || a.sizes[i] != c.sizes[i];
  CHECK(differs);
  for (const auto& s : a.sizes) CHECK((s.value == 2 || s.value == 3));

  const auto u = sample_iid(make_uniform(), 256, 11);
  CHECK(u.den == kContinuousDen);
  for (const auto& s : u.sizes) {
    CHECK(s.value > 0);
    CHECK(s.value < kContinuousDen);
  }
}

TEST_CASE("sample_iid two point frequencies") {
  const auto tp = make_two_point(Rational(1, 10));
  const auto den = tp.den();
  const std::int64_t small = den / 2 - den / 10;
  const std::int64_t big = den / 2 + den / 10;
  const auto inst = sample_iid(tp, 10'000, 3);
  std::int64_t n_small = 0;
  for (const auto& s : inst.sizes) {
    REQUIRE((s.value == small || s.value == big));
    if (s.value == small) ++n_small;
  }
  CHECK(n_small > 4500);
  CHECK(n_small < 5500);
}

TEST_CASE("ground sets and permutations") {
  GroundSet ground = make_ground_set(inst_of(10, {7, 3, 5}));
  REQUIRE(ground.items.sizes.size() == 3);
  CHECK(ground.items.sizes[0].value == 3);  // kept ascending
  CHECK(ground.items.sizes[2].value == 7);

  const auto p1 = sample_permutation(ground, 1);
  const auto p2 = sample_permutation(ground, 1);
  REQUIRE(p1.sizes.size() == 3);
  CHECK(p1.den == 10);
  for (std::size_t i = 0; i < 3; ++i) CHECK(p1.sizes[i] == p2.sizes[i]);
  std::multiset<std::int64_t> got, want{3, 5, 7};
  for (const auto& s : p1.sizes) got.insert(s.value);
  CHECK(got == want);

  // a two-item set should lead with either item about half the time
  GroundSet pair = make_ground_set(inst_of(10, {4, 6}));
  int first_small = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed)
    if (sample_permutation(pair, seed).sizes[0].value == 4) ++first_small;
  CHECK(first_small > 850);
  CHECK(first_small < 1150);
}

TEST_CASE("empirical pmf") {
  const std::vector<Size> support{{2}, {3}};
  const std::vector<Size> history{{2}, {3}, {2}};
  {
    const auto pmf = empirical_pmf(history, 3, support);
    REQUIRE(pmf.size() == 2);
    CHECK(pmf[0] == Rational(2, 3));
    CHECK(pmf[1] == Rational(1, 3));
  }
  {
    const auto pmf = empirical_pmf(history, 2, support);
    CHECK(pmf[0] == Rational(1, 2));
    CHECK(pmf[1] == Rational(1, 2));
  }
  {
    const std::vector<Size> alien{{2}, {5}};
    CHECK_THROWS_AS(empirical_pmf(alien, 2, support), UnknownSize);
  }
}

TEST_CASE("distribution io round trip") {
  std::vector<DistributionSpec> specs = {
      make_discrete(9, {2, 3}, {Rational(35, 48), Rational(13, 48)}, "bw"),
      make_uniform(), make_two_point(Rational(1, 10))};
  for (const auto& spec : specs) {
    std::stringstream ss;
    save_distribution(spec, ss);
    const auto back = load_distribution(ss);
    CHECK(back.den() == spec.den());
    CHECK(back.family.index() == spec.family.index());
    for (int i = 0; i <= 16; ++i)
      CHECK(quantile(back, Rational(i, 16)) == quantile(spec, Rational(i, 16)));
  }
  {
    std::stringstream ss("frobnicate 3\n");
    CHECK_THROWS_AS(load_distribution(ss), ParseError);
  }
  {
    std::stringstream ss("discrete 9\n2 35/48\n3 12/48\n");  // probs sum below one
    CHECK_THROWS_AS(load_distribution(ss), ParseError);
  }
}

TEST_CASE("make_discrete rejects malformed specs") {
  CHECK_THROWS(make_discrete(9, {3, 2}, {Rational(1, 2), Rational(1, 2)}));   // not ascending
  CHECK_THROWS(make_discrete(9, {2, 3}, {Rational(1, 2), Rational(1, 3)}));   // sum != 1
  CHECK_THROWS(make_discrete(9, {2}, {Rational(1, 2), Rational(1, 2)}));      // length mismatch
  CHECK_THROWS(make_discrete(9, {0}, {Rational(1, 1)}));                      // zero atom
}

TEST_CASE("shifted quantile dominates unshifted by at most one bin") {
  // exact OPT comparison on small discrete grids
  const std::vector<DistributionSpec> specs = {
      make_discrete(9, {2, 3}, {Rational(35, 48), Rational(13, 48)}),
      make_discrete(10, {3, 4, 5, 8},
                    {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}),
      make_two_point(Rational(1, 10))};
  for (const auto& spec : specs) {
    for (std::int64_t T = 1; T <= 20; ++T) {
      const auto lo = quantile_instance(spec, T, false);
      const auto hi = quantile_instance(spec, T, true);
      const auto opt_lo = solve_exact(lo);
      const auto opt_hi = solve_exact(hi);
      REQUIRE(opt_lo.proven_optimal);
      REQUIRE(opt_hi.proven_optimal);
      CHECK(opt_lo.bins <= opt_hi.bins);
      CHECK(opt_hi.bins <= opt_lo.bins + 1);
    }
  }
}
