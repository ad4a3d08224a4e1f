#include "binpack/policy_overflow.hpp"

#include <algorithm>
#include <limits>

#include "binpack/errors.hpp"

namespace binpack {

PhaseSchedule phase_boundaries(std::int64_t T) {
  if (T < 1) throw HorizonMismatch("horizon must be at least 1, got " + std::to_string(T));
  PhaseSchedule sched;
  sched.T = T;
  int K = 0;
  while ((std::int64_t{1} << K) < T) ++K;
  sched.K = K;
  sched.boundaries.resize(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    const std::int64_t pow = std::int64_t{1} << (K - k);
    sched.boundaries[static_cast<std::size_t>(k)] = (T + pow - 1) / pow;
  }
  return sched;
}

SlotBook build_slot_book(const Instance& history, const IntegralPlan& plan) {
  if (const auto err = validate_plan(plan, history)) {
    throw PlanMismatch("plan does not cover the history: " + *err);
  }
  const std::size_t n = history.sizes.size();
  std::vector<std::int32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::int32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    const std::int64_t sa = history.sizes[static_cast<std::size_t>(a)].value;
    const std::int64_t sb = history.sizes[static_cast<std::size_t>(b)].value;
    if (sa != sb) return sa < sb;
    return a < b;  // ties by arrival index
  });
  SlotBook book;
  book.sizes.resize(n);
  book.slot_bin.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    book.sizes[s] = history.sizes[static_cast<std::size_t>(order[s])].value;
    book.slot_bin[s] = plan.bin_of[static_cast<std::size_t>(order[s])];
    book.vacant.emplace(book.sizes[s], static_cast<std::int32_t>(s));
  }
  return book;
}

std::int32_t vacancy_search(const SlotBook& book, Size x) {
  const auto it =
      book.vacant.lower_bound({x.value, std::numeric_limits<std::int32_t>::min()});
  if (it == book.vacant.end()) return -1;
  return it->second;
}

OverflowRunResult run_overflow_policy(const Instance& arrivals, std::int64_t T,
                                      const OverflowOptions& options, std::uint64_t seed) {
  (void)seed;  // the policy is deterministic
  if (static_cast<std::int64_t>(arrivals.sizes.size()) != T) {
    throw HorizonMismatch("arrival stream has " + std::to_string(arrivals.sizes.size()) +
                          " items but T = " + std::to_string(T));
  }
  const PhaseSchedule sched = phase_boundaries(T);
  const std::int64_t stop = options.stop_at > 0 ? std::min(options.stop_at, T) : T;
  OverflowRunResult result;
  result.T = T;
  result.stopped_at = stop;
  result.state = PackingState(arrivals.den);

  // first item: fresh bin, no plan yet
  place_item(result.state, arrivals.sizes[0], Placement::new_bin());

  for (int k = 1; k <= sched.K; ++k) {
    const std::int64_t hist_end = sched.boundaries[static_cast<std::size_t>(k - 1)];
    const std::int64_t t_begin = hist_end + 1;
    const std::int64_t t_end = std::min(sched.boundaries[static_cast<std::size_t>(k)], stop);
    if (t_begin > stop) break;
    if (t_end < t_begin) continue;

    Instance history;
    history.den = arrivals.den;
    history.sizes.assign(arrivals.sizes.begin(), arrivals.sizes.begin() + hist_end);

    PhaseTrace trace;
    trace.k = k;
    trace.t_begin = t_begin;
    trace.t_end = t_end;

    IntegralPlan plan;
    if (options.oracle == OracleMode::Exact) {
      try {
        plan = solve_exact(history, options.exact_budget);
        trace.oracle = plan.proven_optimal ? "exact" : "exact(budget)";
        trace.oracle_value = static_cast<double>(plan.bins);
        trace.oracle_proven = plan.proven_optimal;
      } catch (const BudgetExceeded&) {
        const FractionalPlan frac = solve_fractional(history, options.fractional);
        plan = round_plan(frac, history);
        trace.oracle = "exact->approx";
        trace.oracle_value = frac.value;
        trace.oracle_proven = false;
      }
    } else {
      const FractionalPlan frac = solve_fractional(history, options.fractional);
      plan = round_plan(frac, history);
      trace.oracle = "approx";
      trace.oracle_value = frac.value;
      trace.oracle_proven = false;
    }
    trace.plan_bins = plan.bins;

    SlotBook book = build_slot_book(history, plan);
    trace.history_sizes = book.sizes;

    std::vector<std::int32_t> global_bin(static_cast<std::size_t>(plan.bins), -1);
    for (std::int64_t t = t_begin; t <= t_end; ++t) {
      const Size x = arrivals.sizes[static_cast<std::size_t>(t - 1)];
      trace.online_sizes.push_back(x.value);
      const std::int32_t slot = vacancy_search(book, x);
      if (slot >= 0) {
        book.vacant.erase({book.sizes[static_cast<std::size_t>(slot)], slot});
        std::int32_t& g = global_bin[static_cast<std::size_t>(book.slot_bin[static_cast<std::size_t>(slot)])];
        if (g < 0) {
          place_item(result.state, x, Placement::new_bin());
          g = static_cast<std::int32_t>(result.state.bins.size() - 1);
          ++trace.opened_plan_bins;
        } else {
          place_item(result.state, x, Placement::existing(g));
        }
      } else {
        place_item(result.state, x, Placement::new_bin());
        ++trace.overflow_bins;
      }
    }
    result.phases.push_back(std::move(trace));
  }
  result.bins = bins_used(result.state);
  return result;
}

}  // namespace binpack
