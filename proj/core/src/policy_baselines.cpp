#include "binpack/policy_baselines.hpp"

#include <cstddef>
#include <vector>

#include "binpack/errors.hpp"

namespace binpack {

Placement best_fit_step(const PackingState& state, Size x) {
  std::int32_t best = -1;
  std::int64_t best_load = -1;
  for (std::size_t b = 0; b < state.bins.size(); ++b) {
    const std::int64_t load = state.bins[b].load;
    if (load + x.value <= state.den && load > best_load) {
      best_load = load;
      best = static_cast<std::int32_t>(b);
    }
  }
  return best < 0 ? Placement::new_bin() : Placement::existing(best);
}

Placement first_fit_step(const PackingState& state, Size x) {
  for (std::size_t b = 0; b < state.bins.size(); ++b) {
    if (state.bins[b].load + x.value <= state.den) {
      return Placement::existing(static_cast<std::int32_t>(b));
    }
  }
  return Placement::new_bin();
}

Placement next_fit_step(const PackingState& state, Size x) {
  if (!state.bins.empty()) {
    const std::size_t last = state.bins.size() - 1;
    if (state.bins[last].load + x.value <= state.den) {
      return Placement::existing(static_cast<std::int32_t>(last));
    }
  }
  return Placement::new_bin();
}

namespace {

std::int64_t histogram_count(const PackingState& state, std::int64_t level) {
  const auto it = state.level_histogram.find(level);
  return it == state.level_histogram.end() ? 0 : it->second;
}

// Change in sum N(h)^2 when one bin moves from level `from` (0 = fresh bin)
// to level `to` (capacity = leaves the histogram).
std::int64_t ssq_delta(const PackingState& state, std::int64_t from, std::int64_t to) {
  std::int64_t delta = 0;
  if (from > 0) {
    const std::int64_t n = histogram_count(state, from);
    delta += (n - 1) * (n - 1) - n * n;
  }
  if (to < state.den) {
    const std::int64_t n = histogram_count(state, to);
    delta += (n + 1) * (n + 1) - n * n;
  }
  return delta;
}

}  // namespace

Placement sum_of_squares_step(const PackingState& state, Size x) {
  // candidates: (delta, resulting level, source level, bin)
  std::int64_t best_delta = ssq_delta(state, 0, x.value);
  std::int64_t best_result = x.value;
  std::int64_t best_source = 0;
  std::int32_t best_bin = -1;
  for (const auto& [level, count] : state.level_histogram) {
    if (count <= 0 || level + x.value > state.den) continue;
    const std::int64_t delta = ssq_delta(state, level, level + x.value);
    const std::int64_t result = level + x.value;
    const bool better = delta < best_delta ||
                        (delta == best_delta &&
                         (result > best_result || (result == best_result && level < best_source)));
    if (!better) continue;
    std::int32_t bin = -1;
    for (std::size_t b = 0; b < state.bins.size(); ++b) {
      if (state.bins[b].load == level) {
        bin = static_cast<std::int32_t>(b);
        break;
      }
    }
    if (bin < 0) throw BadIndex("level histogram names a level with no bin");
    best_delta = delta;
    best_result = result;
    best_source = level;
    best_bin = bin;
  }
  return best_bin < 0 ? Placement::new_bin() : Placement::existing(best_bin);
}

BaselineRunResult run_baseline_policy(const Instance& arrivals, BaselinePolicy policy) {
  BaselineRunResult result;
  result.state = PackingState(arrivals.den);
  for (const Size& x : arrivals.sizes) {
    Placement where;
    switch (policy) {
      case BaselinePolicy::BestFit: where = best_fit_step(result.state, x); break;
      case BaselinePolicy::FirstFit: where = first_fit_step(result.state, x); break;
      case BaselinePolicy::NextFit: where = next_fit_step(result.state, x); break;
      case BaselinePolicy::SumOfSquares: where = sum_of_squares_step(result.state, x); break;
    }
    place_item(result.state, x, where);
  }
  result.bins = bins_used(result.state);
  return result;
}

}  // namespace binpack
