#pragma once

#include <cstdint>

#include "binpack/instance.hpp"
#include "binpack/packing_state.hpp"

namespace binpack {

// Fullest bin that still fits x; ties toward the lower index; NewBin when
// nothing fits.
Placement best_fit_step(const PackingState& state, Size x);

// Lowest-indexed bin that fits x, else NewBin.
Placement first_fit_step(const PackingState& state, Size x);

// The most recently opened bin if it fits x, else NewBin (earlier bins are
// never revisited).
Placement next_fit_step(const PackingState& state, Size x);

// Integer-size rule: among NewBin and one bin per occupied level that fits x,
// minimize sum over levels h of N(h)^2 after the placement, where N excludes
// empty and full bins.  Ties prefer the fuller resulting bin, then the lower
// source level.  Within a level the lowest-indexed bin stands in for the
// level.
Placement sum_of_squares_step(const PackingState& state, Size x);

enum class BaselinePolicy { BestFit, FirstFit, NextFit, SumOfSquares };

struct BaselineRunResult {
  std::int64_t bins{0};
  PackingState state;
};

BaselineRunResult run_baseline_policy(const Instance& arrivals, BaselinePolicy policy);

}  // namespace binpack
