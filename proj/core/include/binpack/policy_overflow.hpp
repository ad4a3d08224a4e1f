#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "binpack/instance.hpp"
#include "binpack/oracle.hpp"
#include "binpack/packing_state.hpp"

namespace binpack {

// Geometric phase grid for a known horizon: K = ceil(log2 T) and
// T_k = ceil(T / 2^(K-k)), so T_0 = 1 and T_K = T.  Phase k (k >= 1) covers
// arrivals t in (T_{k-1}, T_k] and re-plans against the first T_{k-1} items.
struct PhaseSchedule {
  std::int64_t T{0};
  int K{0};
  std::vector<std::int64_t> boundaries;  // T_0..T_K
};

PhaseSchedule phase_boundaries(std::int64_t T);

// One phase's offline plan viewed as slots: the history items sorted
// ascending (ties by arrival index), each slot remembering its plan bin.
// Vacant slots live in an ordered set keyed by (size, slot) so the least
// vacant slot of sufficient size is one lower_bound away.
struct SlotBook {
  std::vector<std::int64_t> sizes;      // ascending; index = slot
  std::vector<std::int32_t> slot_bin;   // slot -> bin index within the plan
  std::set<std::pair<std::int64_t, std::int32_t>> vacant;
};

// Throws PlanMismatch unless the plan covers exactly the history items.
SlotBook build_slot_book(const Instance& history, const IntegralPlan& plan);

// Least vacant slot with size >= x.value, or -1 when none exists.
std::int32_t vacancy_search(const SlotBook& book, Size x);

enum class OracleMode { Exact, Approximate };

struct PhaseTrace {
  int k{0};
  std::int64_t t_begin{0};  // first arrival of the phase, 1-based
  std::int64_t t_end{0};    // last arrival, inclusive
  std::int64_t plan_bins{0};         // bins the offline plan prepares
  std::int64_t opened_plan_bins{0};  // plan bins that received an online item
  std::int64_t overflow_bins{0};
  std::string oracle;       // "exact", "exact(budget)" or "approx"
  double oracle_value{0.0};  // plan bin count (exact) or OPT_f (approx)
  bool oracle_proven{false};
  std::vector<std::int64_t> history_sizes;  // slot sizes, ascending
  std::vector<std::int64_t> online_sizes;   // in arrival order
};

struct OverflowRunResult {
  std::int64_t T{0};
  std::int64_t stopped_at{0};  // last arrival actually served
  std::int64_t bins{0};
  PackingState state;
  std::vector<PhaseTrace> phases;
};

struct OverflowOptions {
  OracleMode oracle{OracleMode::Approximate};
  ExactBudget exact_budget;
  FractionalOptions fractional;
  // 0 = serve all T arrivals.  Otherwise the run is cut off after arrival
  // stop_at; phases are still planned against the full horizon T.  No regret
  // bound is claimed for truncated runs.
  std::int64_t stop_at{0};
};

// Algorithm: first item into a fresh bin; then per phase k solve the offline
// problem on the observed prefix, lay its plan out as a slot book, and serve
// each arrival from the least sufficient vacant slot, overflowing to a new
// bin when no slot fits.  Plan bins are opened lazily (first online item
// materializes the bin).  Deterministic given (arrivals, options); the seed
// parameter is accepted for interface symmetry with the randomized policies
// and ignored.
OverflowRunResult run_overflow_policy(const Instance& arrivals, std::int64_t T,
                                      const OverflowOptions& options = {},
                                      std::uint64_t seed = 0);

}  // namespace binpack
