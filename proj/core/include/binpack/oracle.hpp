#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "binpack/instance.hpp"

namespace binpack {

// Distinct sizes of an instance (ascending) with their multiplicities, plus
// the item ids behind each class (ascending id).  Every oracle works on this
// grouped view; ids flow back out through IntegralPlan::bin_of.
struct SizeClasses {
  std::int64_t den{0};
  std::vector<std::int64_t> sizes;                 // distinct, ascending
  std::vector<std::int64_t> demand;                // items per class
  std::vector<std::vector<std::int32_t>> ids;      // item ids per class, ascending
};

SizeClasses group_sizes(const Instance& inst);

// Multiplicity vector over the distinct sizes of a SizeClasses: counts[i]
// items of sizes[i] in one bin, with total value <= den.
struct Configuration {
  std::vector<std::int64_t> counts;
};

// Complete enumeration of the maximal feasible configurations (no further
// item of any class fits).  Non-maximal tuples are dominated under the
// >=-coverage constraints, so restricting to maximal ones changes no
// optimum.  Throws TooManyConfigurations past max_count.
std::vector<Configuration> enumerate_configurations(const std::vector<std::int64_t>& sizes,
                                                    std::int64_t capacity,
                                                    std::size_t max_count = 1'000'000);

// Solution of the covering relaxation min sum z_j, sum_j a_ij z_j >= b_i,
// z >= 0 over configurations of the instance's distinct sizes.
struct FractionalPlan {
  std::int64_t den{0};
  std::vector<std::int64_t> sizes;            // distinct sizes, ascending
  std::vector<Configuration> configurations;  // support of the solution and more
  std::vector<double> weights;                // z_j, aligned with configurations
  double value{0.0};                          // objective = OPT_f
  bool converged{true};   // false when pricing could not certify optimality
  long lp_iterations{0};
  long pricing_rounds{0};
};

struct FractionalOptions {
  // Switch from direct enumeration to column generation when the enumerated
  // configuration count would exceed this.
  std::size_t direct_enumeration_cap{20'000};
  // Node cap for one continuous knapsack pricing call.
  long pricing_node_cap{5'000'000};
  long lp_max_iterations{200'000};
  long max_pricing_rounds{20'000};
};

FractionalPlan solve_fractional(const Instance& inst, const FractionalOptions& opt = {});

// Concrete packing: items assigned to bins by id.
struct IntegralPlan {
  std::int64_t bins{0};
  std::vector<std::vector<std::int32_t>> bin_items;  // item ids per bin
  std::vector<std::int32_t> bin_of;                  // item id -> bin index
  bool proven_optimal{false};
};

struct ExactBudget {
  long node_limit{5'000'000};
  // The item-assignment path is exponential in the worst case; refuse
  // instances with more than this many items unless overridden.
  int item_path_max_items{30};
  bool override_item_guard{false};
};

// Provably optimal packing when the budget allows (proven_optimal = true);
// otherwise the best incumbent found, flagged.  Integer-friendly instances
// go through branch-and-bound on configuration counts; instances whose
// configuration space is too large fall back to branch-and-bound over
// item-to-bin assignments.
IntegralPlan solve_exact(const Instance& inst, const ExactBudget& budget = {});

// First-fit decreasing: sort by size descending (ties: lower id first),
// first fit.  Valid plan, no optimality claim.
IntegralPlan solve_ffd(const Instance& inst);

// Integral plan from a fractional one: snap near-integer weights, floor,
// instantiate those bins config-by-config (larger sizes first inside a
// config, ascending ids inside a class), then first-fit-decreasing the
// uncovered residual items over all bins.  Excess slots stay empty; bins
// that end up empty are dropped.
IntegralPlan round_plan(const FractionalPlan& fractional, const Instance& inst);

// Lower bound on OPT: max over the capacity-split family of counting bounds,
// always >= the volume bound.
std::int64_t lower_bound_l2(const Instance& inst);

// nullopt when the plan covers exactly the instance's items, every bin
// respects capacity, and bin_of agrees with bin_items.
std::optional<std::string> validate_plan(const IntegralPlan& plan, const Instance& inst);

}  // namespace binpack
