#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "binpack/distribution.hpp"
#include "binpack/oracle.hpp"
#include "binpack/policy_overflow.hpp"

namespace binpack {

// Stable ids: they feed the per-policy seed stream, so reordering the enum
// would silently change every seeded experiment.
enum class PolicyKind {
  Overflow = 1,
  LpAdaptive = 2,
  BestFit = 3,
  FirstFit = 4,
  NextFit = 5,
  SumOfSquares = 6,
};

const char* policy_name(PolicyKind kind);
PolicyKind parse_policy(const std::string& name);  // throws ParseError

// Arrival stream source: iid draws from a distribution, or a uniformly
// random permutation of a horizon-sized ground set.
struct SourceSpec {
  enum class Kind { Iid, Permutation };
  Kind kind{Kind::Iid};
  DistributionSpec dist;                          // Iid
  std::function<GroundSet(std::int64_t)> ground;  // Permutation: T -> population
  std::string name;                               // CSV "dist" column
};

SourceSpec iid_source(DistributionSpec dist);
// The fixed set must match the requested horizon exactly.
SourceSpec fixed_ground_source(GroundSet ground, std::string name);
// "half-heavy": ceil(T/2) items of 0.6 and floor(T/2) of 0.4 (continuous den).
// "three-atom": sizes {7,5,4}/12 in as-even-as-possible counts.
SourceSpec builtin_ground_source(const std::string& name);

// "bounded-waste", "perfectly-packable", "linear-waste", "uniform",
// "two-point" (epsilon 1/10), "uniform-int-<B>" (uniform on 1..B-1),
// "uniform-int-<B>-<J>" (J evenly spaced integer sizes below B).
DistributionSpec builtin_distribution(const std::string& name);

Instance draw_arrivals(const SourceSpec& source, std::int64_t T, std::uint64_t seed);

// What the regret column is measured against.  Fractional and Volume are
// lower bounds on OPT, so the recorded regret is conservative (never smaller
// than the true regret).
enum class OptReference { Exact, Fractional, Volume };

struct ExperimentGrid {
  std::vector<PolicyKind> policies;
  SourceSpec source;
  std::vector<std::int64_t> T_values;  // ascending
  std::int64_t trials{1};
  std::uint64_t base_seed{0};
  OracleMode oracle_mode{OracleMode::Approximate};  // overflow's offline oracle
  OptReference opt_reference{OptReference::Exact};
  ExactBudget exact_budget;
  FractionalOptions fractional;
  std::int64_t stop_at{0};  // 0 = full runs; else regret over the served prefix
  int workers{1};
  bool timing{false};  // wall-clock runtime_ms; off keeps the CSV byte-stable
};

struct TrialRecord {
  std::string policy;
  std::string dist;
  std::int64_t T{0};
  std::int64_t trial{0};
  std::uint64_t seed{0};  // arrival seed (shared across policies)
  std::int64_t bins{0};
  std::int64_t opt{0};
  double opt_f{0.0};
  std::int64_t regret{0};
  double runtime_ms{0.0};
};

struct RunBenchResult {
  std::vector<TrialRecord> records;   // (T, trial, policy) order
  std::vector<std::string> failures;  // one line per failed cell; CSV stays clean
};

// Every policy in a cell sees the identical arrival sequence
// (arrival_seed = mix(base, T, trial)); the opt reference is computed once
// per cell and shared.  Oracle failures become failure lines, not throws.
RunBenchResult run_bench(const ExperimentGrid& grid);

void write_csv(const std::vector<TrialRecord>& records, std::ostream& out);
void write_csv_file(const std::vector<TrialRecord>& records, const std::string& path);
std::vector<TrialRecord> read_csv(std::istream& in);       // throws ParseError
std::vector<TrialRecord> read_csv_file(const std::string& path);

// Columnar text: "x policy mean stderr n" per group, sorted by (x, policy).
// GroupBy::T puts the horizon on x; GroupBy::Dist the distribution label
// (that is the axis for capacity / category sweeps, which vary the label).
enum class GroupBy { T, Dist };
void emit_plot_data(const std::vector<TrialRecord>& records, GroupBy group_by,
                    std::ostream& out);

}  // namespace binpack
