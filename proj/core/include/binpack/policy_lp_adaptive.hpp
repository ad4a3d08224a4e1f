#pragma once

#include <cstdint>
#include <vector>

#include "binpack/instance.hpp"
#include "binpack/packing_state.hpp"
#include "binpack/rational.hpp"
#include "binpack/rng.hpp"
#include "binpack/simplex.hpp"

namespace binpack {

// Variable grid of the per-arrival level LP: v(j,h) for every type size j
// and level h with h + j <= B.  v(j,h) counts (scaled) type-j items placed
// onto bins currently at level h; h = 0 is a fresh bin.
struct LevelLpLayout {
  std::int64_t B{0};
  std::vector<std::int64_t> types;           // ascending sizes, 1..B-1
  std::vector<std::vector<int>> var_of;      // [type index][h] -> LP column
  int num_vars{0};

  int type_index(std::int64_t size) const;   // -1 when size is not a type
};

// Types default to every integer size 1..B-1; unseen types simply carry a
// zero empirical mass.
LevelLpLayout make_level_layout(std::int64_t B);

// Occupied levels {0} union {h : N_t(h) > 0}, ascending.
std::vector<std::int64_t> occupied_levels(const PackingState& state);

// The per-arrival LP: minimize fresh-bin mass sum_j v(j,0) subject to
//   no-floating rows, h = 1..B-1:
//     N_t(h) + sum_{j<=h} v(j,h-j) >= sum_{j<=B-h} v(j,h)
//   arrival row: sum_{h in H_t} v(j(x),h) >= 1/T
//   balance rows: sum_h v(j,h) = (T-t+1) * pmf_j
// pmf is the empirical distribution over layout.types of the first t
// arrivals, current item included.
LinearProgram build_level_lp(const LevelLpLayout& layout, const PackingState& state, Size x,
                             const std::vector<Rational>& pmf, std::int64_t T, std::int64_t t);

// The stationary variant: balance mass pmf_j per type, empty state, no
// arrival row.  Its objective value is the per-item fresh-bin rate of the
// distribution.
LinearProgram build_static_level_lp(const LevelLpLayout& layout, const std::vector<Rational>& pmf);

struct LevelChoice {
  std::int64_t level{0};   // 0 = fresh bin
  bool degenerate{false};  // mass below tolerance, fell back to a fresh bin
  double mass{0.0};
};

// Normalizes (v*(j(x),h))_{h in H, h+x <= B} into a distribution and samples
// a level from it; mass below 1e-9 falls back to level 0 and is flagged.
LevelChoice select_level(const LevelLpLayout& layout, const LpSolution& solution, Size x,
                         const std::vector<std::int64_t>& occupied, Rng& rng);

struct LpAdaptiveStepTrace {
  double objective{0.0};
  std::int64_t level{0};
  bool degenerate{false};
  bool warm{false};  // solved starting from the previous basis
};

struct LpAdaptiveRunResult {
  std::int64_t T{0};
  std::int64_t stopped_at{0};
  std::int64_t bins{0};
  PackingState state;
  std::vector<LpAdaptiveStepTrace> steps;
};

struct LpAdaptiveOptions {
  std::int64_t stop_at{0};  // 0 = run to T
  bool warm_start{true};
};

// One LP solve per arrival; placement at the sampled level goes to the
// lowest-indexed bin currently at that level.  Deterministic given
// (arrivals, T, seed, options).
LpAdaptiveRunResult run_lp_adaptive_policy(const Instance& arrivals, std::int64_t T,
                                           std::uint64_t seed,
                                           const LpAdaptiveOptions& options = {});

}  // namespace binpack
