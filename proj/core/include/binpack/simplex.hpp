#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

namespace binpack {

enum class Relation { LessEq, GreaterEq, Eq };

struct LpRow {
  std::vector<double> coeffs;  // dense, one per structural variable
  Relation rel{Relation::LessEq};
  double rhs{0.0};
};

// min objective . x  subject to rows, x >= 0.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LpRow> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status{LpStatus::Optimal};
  double value{0.0};
  std::vector<double> primal;  // structural variables (base columns, then generated ones)
  std::vector<double> dual;    // one per row, signed w.r.t. the original relation
  long iterations{0};
  double max_primal_residual{0.0};
  double max_comp_slack_residual{0.0};
  // False only when a caller opted out of throw_on_iteration_limit and the
  // pivot budget ran out: the primal is feasible but not proven optimal.
  bool optimal_certified{true};
  // Basis snapshot usable as a warm-start hint for a later solve of an LP
  // with identical dimensions: entries are structural indices (0..n-1) or
  // n + row for the slack of that row; -1 marks a basis position held by an
  // artificial (such a snapshot is not reusable).
  std::vector<int> basis;
};

struct SolverOptions {
  // Per-row feasibility tolerance is feas_tol_scale * (1 + |rhs|).
  double feas_tol_scale{1e-9};
  double reduced_cost_tol{1e-7};
  double comp_slack_tol{1e-7};
  // 0 means the default 10*m + 1000 pivots, m = number of rows.
  long max_iterations{0};
  // Degenerate pivots tolerated before switching Dantzig -> Bland;
  // 0 means the default 5 * (rows + columns).
  long degenerate_switch{0};
  bool throw_on_iteration_limit{true};
};

// Two-phase primal revised simplex (dense basis inverse, sparse columns).
// Deterministic: Dantzig pricing with lowest-index tie breaks, switching to
// Bland's rule after the degenerate-pivot threshold.  Throws IterationLimit
// or NumericalFailure (see errors.hpp).
LpSolution solve_lp(const LinearProgram& lp, const SolverOptions& options = {},
                    const std::vector<int>* basis_hint = nullptr);

// One generated column for the restricted master: sparse row entries plus
// its objective cost.
struct SparseColumn {
  std::vector<std::pair<int, double>> entries;
  double cost{1.0};
};

// Given current row duals, return candidate columns (typically from a
// knapsack pricer).  Only columns with reduced cost < -reduced_cost_tol are
// added; returning no improving column ends the loop.
using PricingFn = std::function<std::vector<SparseColumn>(const std::vector<double>& duals)>;

struct ColumnGenOptions {
  long max_rounds{0};  // 0 means the default 10*m + 1000
  SolverOptions lp;
  bool throw_on_round_limit{false};
};

struct ColumnGenResult {
  LpSolution solution;  // primal covers base columns then generated columns, in order
  std::vector<SparseColumn> generated;
  long rounds{0};
  bool converged{false};
};

// Column generation driver: solves the base LP (caller supplies enough
// columns for feasibility, e.g. singletons), then alternates pricing and
// warm re-solves until no improving column remains or the round cap hits.
ColumnGenResult solve_lp_with_columns(const LinearProgram& base, const PricingFn& pricing,
                                      const ColumnGenOptions& options = {});

// Plain-text listing of an LP, for debugging by hand.
void dump_lp(const LinearProgram& lp, std::ostream& out);

}  // namespace binpack
