#include "binpack/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>

#include "binpack/errors.hpp"

namespace binpack {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-12;
constexpr double kZeroClamp = 1e-11;
constexpr long kPivotsBetweenRefactor = 2000;

struct Column {
  std::vector<std::pair<int, double>> entries;  // internal (sign-normalized) rows
  double cost{0.0};
  bool artificial{false};
};

enum class LoopEnd { Optimal, Unbounded, HitLimit };

// Two-phase primal revised simplex over sign-normalized rows (rhs >= 0).
// The basis inverse is kept explicitly and stored transposed
// (binvT_[r*m + i] = (B^-1)_{i,r}) so that the ftran, the dual computation
// and the pivot update all run over contiguous memory.  Every choice the
// solver makes is deterministic: Dantzig pricing breaks ties toward the
// lowest column index, the ratio test breaks exact ties toward the larger
// pivot element (then the lower basic variable index), and after the
// degenerate-pivot threshold trips, Bland's rule takes over entirely.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SolverOptions& opt) : opt_(opt) {
    m_ = static_cast<int>(lp.rows.size());
    const int n = static_cast<int>(lp.objective.size());
    sign_.assign(static_cast<std::size_t>(m_), 1);
    rhs_.resize(static_cast<std::size_t>(m_));
    rel_int_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      const LpRow& row = lp.rows[static_cast<std::size_t>(i)];
      if (static_cast<int>(row.coeffs.size()) != n) {
        throw NumericalFailure("row " + std::to_string(i) + " width disagrees with objective");
      }
      double b = row.rhs;
      Relation rel = row.rel;
      if (b < 0) {
        sign_[static_cast<std::size_t>(i)] = -1;
        b = -b;
        if (rel == Relation::LessEq) rel = Relation::GreaterEq;
        else if (rel == Relation::GreaterEq) rel = Relation::LessEq;
      }
      rhs_[static_cast<std::size_t>(i)] = b;
      rel_int_[static_cast<std::size_t>(i)] = rel;
    }
    cols_.reserve(static_cast<std::size_t>(n + m_));
    for (int j = 0; j < n; ++j) {
      Column c;
      c.cost = lp.objective[static_cast<std::size_t>(j)];
      for (int i = 0; i < m_; ++i) {
        const double v = lp.rows[static_cast<std::size_t>(i)].coeffs[static_cast<std::size_t>(j)];
        if (v != 0.0) c.entries.emplace_back(i, sign_[static_cast<std::size_t>(i)] * v);
      }
      struct_ids_.push_back(static_cast<int>(cols_.size()));
      cols_.push_back(std::move(c));
    }
    slack_of_row_.assign(static_cast<std::size_t>(m_), -1);
    for (int i = 0; i < m_; ++i) {
      if (rel_int_[static_cast<std::size_t>(i)] == Relation::Eq) continue;
      Column c;
      c.entries.emplace_back(i, rel_int_[static_cast<std::size_t>(i)] == Relation::LessEq ? 1.0 : -1.0);
      slack_of_row_[static_cast<std::size_t>(i)] = static_cast<int>(cols_.size());
      cols_.push_back(std::move(c));
    }
  }

  void add_column(const SparseColumn& col) {
    Column c;
    c.cost = col.cost;
    c.entries.reserve(col.entries.size());
    for (auto [r, v] : col.entries) {
      if (r < 0 || r >= m_) throw BadIndex("generated column touches row " + std::to_string(r));
      if (v != 0.0) c.entries.emplace_back(r, sign_[static_cast<std::size_t>(r)] * v);
    }
    std::sort(c.entries.begin(), c.entries.end());
    struct_ids_.push_back(static_cast<int>(cols_.size()));
    cols_.push_back(std::move(c));
    is_basic_.push_back(0);
  }

  LpSolution solve(const std::vector<int>* basis_hint) {
    if (m_ == 0) return no_rows_solution();
    if (basis_hint != nullptr && try_hint(*basis_hint)) {
      load_phase2_costs();
      return extract(run_loop());
    }
    if (!init_cold_basis()) {
      const LoopEnd p1 = run_phase1();
      if (p1 != LoopEnd::Optimal) return extract(p1);
      if (phase1_infeasible_) {
        LpSolution sol;
        sol.status = LpStatus::Infeasible;
        sol.iterations = iters_;
        return sol;
      }
    }
    load_phase2_costs();
    return extract(run_loop());
  }

  // Continue optimizing after add_column; the current basis stays feasible.
  LpSolution resolve() {
    if (m_ == 0) return no_rows_solution();
    load_phase2_costs();
    return extract(run_loop());
  }

 private:
  LpSolution no_rows_solution() const {
    LpSolution sol;
    sol.primal.assign(struct_ids_.size(), 0.0);
    for (int id : struct_ids_) {
      if (cols_[static_cast<std::size_t>(id)].cost < 0) {
        sol.status = LpStatus::Unbounded;
        return sol;
      }
    }
    sol.status = LpStatus::Optimal;
    return sol;
  }

  double feas_tol(int row) const {
    return opt_.feas_tol_scale * (1.0 + std::abs(rhs_[static_cast<std::size_t>(row)]));
  }

  long max_iters() const { return opt_.max_iterations > 0 ? opt_.max_iterations : 10L * m_ + 1000; }

  long degen_switch() const {
    return opt_.degenerate_switch > 0 ? opt_.degenerate_switch
                                      : 5L * (m_ + static_cast<long>(cols_.size()));
  }

  // Slack basis where possible, artificials elsewhere.  Returns true when no
  // artificial was needed (phase 1 can be skipped).
  bool init_cold_basis() {
    basic_.assign(static_cast<std::size_t>(m_), -1);
    is_basic_.assign(cols_.size(), 0);
    bool need_phase1 = false;
    for (int i = 0; i < m_; ++i) {
      const int s = slack_of_row_[static_cast<std::size_t>(i)];
      if (s >= 0 && cols_[static_cast<std::size_t>(s)].entries[0].second > 0) {
        basic_[static_cast<std::size_t>(i)] = s;
        is_basic_[static_cast<std::size_t>(s)] = 1;
      } else {
        Column art;
        art.artificial = true;
        art.entries.emplace_back(i, 1.0);
        const int id = static_cast<int>(cols_.size());
        cols_.push_back(std::move(art));
        is_basic_.push_back(1);
        basic_[static_cast<std::size_t>(i)] = id;
        need_phase1 = true;
      }
    }
    binvT_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
      binvT_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i)] = 1.0;
    }
    xb_ = rhs_;
    return !need_phase1;
  }

  bool try_hint(const std::vector<int>& hint) {
    if (static_cast<int>(hint.size()) != m_) return false;
    const int n_pub = static_cast<int>(struct_ids_.size());
    std::vector<int> cand(static_cast<std::size_t>(m_), -1);
    std::vector<char> used(cols_.size(), 0);
    for (int i = 0; i < m_; ++i) {
      const int h = hint[static_cast<std::size_t>(i)];
      int col = -1;
      if (h >= 0 && h < n_pub) col = struct_ids_[static_cast<std::size_t>(h)];
      else if (h >= n_pub && h < n_pub + m_) col = slack_of_row_[static_cast<std::size_t>(h - n_pub)];
      if (col < 0 || used[static_cast<std::size_t>(col)]) return false;
      used[static_cast<std::size_t>(col)] = 1;
      cand[static_cast<std::size_t>(i)] = col;
    }
    basic_ = cand;
    is_basic_.assign(cols_.size(), 0);
    for (int c : basic_) is_basic_[static_cast<std::size_t>(c)] = 1;
    if (!refactor(false)) return false;
    for (int i = 0; i < m_; ++i) {
      if (xb_[static_cast<std::size_t>(i)] < -feas_tol(i)) return false;
    }
    for (double& v : xb_) {
      if (v < 0) v = 0.0;
    }
    return true;
  }

  LoopEnd run_phase1() {
    in_phase1_ = true;
    phase1_infeasible_ = false;
    cost_now_.assign(cols_.size(), 0.0);
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (cols_[j].artificial) cost_now_[j] = 1.0;
    }
    const LoopEnd end = run_loop();
    if (end != LoopEnd::Optimal) {
      in_phase1_ = false;
      return end;
    }
    double infeas = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (cols_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])].artificial) {
        infeas += xb_[static_cast<std::size_t>(i)];
      }
    }
    double tol = 1e-12;
    for (int i = 0; i < m_; ++i) tol += 100.0 * feas_tol(i);
    if (infeas > tol) {
      phase1_infeasible_ = true;
    } else {
      pivot_out_artificials();
    }
    in_phase1_ = false;
    return LoopEnd::Optimal;
  }

  // Any artificial still basic after a feasible phase 1 sits at ~0.  Pivot it
  // out on any non-artificial column with a usable element in its row; when
  // none exists the row is linearly dependent and the artificial stays pinned
  // at zero (it never re-enters pricing).
  void pivot_out_artificials() {
    std::vector<double> w(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
      if (!cols_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])].artificial) continue;
      int enter = -1;
      for (std::size_t j = 0; j < cols_.size(); ++j) {
        if (cols_[j].artificial || is_basic_[j]) continue;
        double val = 0.0;
        for (auto [r, v] : cols_[j].entries) {
          val += binvT_[static_cast<std::size_t>(r) * static_cast<std::size_t>(m_) +
                        static_cast<std::size_t>(i)] * v;
        }
        if (std::abs(val) > kPivotTol) {
          enter = static_cast<int>(j);
          break;
        }
      }
      if (enter < 0) continue;
      ftran(enter, w);
      pivot(enter, i, w, 0.0);
    }
  }

  void load_phase2_costs() {
    cost_now_.assign(cols_.size(), 0.0);
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (!cols_[j].artificial) cost_now_[j] = cols_[j].cost;
    }
    in_phase1_ = false;
  }

  void compute_duals(std::vector<double>& y) const {
    y.assign(static_cast<std::size_t>(m_), 0.0);
    for (int r = 0; r < m_; ++r) {
      const double* row = &binvT_[static_cast<std::size_t>(r) * static_cast<std::size_t>(m_)];
      double acc = 0.0;
      for (int i = 0; i < m_; ++i) {
        acc += cost_now_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] * row[i];
      }
      y[static_cast<std::size_t>(r)] = acc;
    }
  }

  double reduced_cost(const std::vector<double>& y, std::size_t j) const {
    double rc = cost_now_[j];
    for (auto [r, v] : cols_[j].entries) rc -= y[static_cast<std::size_t>(r)] * v;
    return rc;
  }

  void ftran(int j, std::vector<double>& w) const {
    std::fill(w.begin(), w.end(), 0.0);
    for (auto [r, v] : cols_[static_cast<std::size_t>(j)].entries) {
      const double* row = &binvT_[static_cast<std::size_t>(r) * static_cast<std::size_t>(m_)];
      for (int i = 0; i < m_; ++i) w[static_cast<std::size_t>(i)] += row[i] * v;
    }
  }

  void pivot(int enter, int leave_row, const std::vector<double>& w, double theta) {
    const double pivot_elem = w[static_cast<std::size_t>(leave_row)];
    for (int r = 0; r < m_; ++r) {
      double* row = &binvT_[static_cast<std::size_t>(r) * static_cast<std::size_t>(m_)];
      const double t = row[leave_row] / pivot_elem;
      row[leave_row] = t;
      if (t == 0.0) continue;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_row) continue;
        const double wi = w[static_cast<std::size_t>(i)];
        if (wi != 0.0) row[i] -= wi * t;
      }
    }
    for (int i = 0; i < m_; ++i) {
      if (i == leave_row) continue;
      double& v = xb_[static_cast<std::size_t>(i)];
      v -= theta * w[static_cast<std::size_t>(i)];
      if (std::abs(v) < kZeroClamp) v = 0.0;
    }
    xb_[static_cast<std::size_t>(leave_row)] = theta;
    const int old = basic_[static_cast<std::size_t>(leave_row)];
    is_basic_[static_cast<std::size_t>(old)] = 0;
    basic_[static_cast<std::size_t>(leave_row)] = enter;
    is_basic_[static_cast<std::size_t>(enter)] = 1;
    ++iters_;
    ++pivots_since_refactor_;
    if (theta <= kDegenerateStep) ++degen_;
    if (!bland_ && degen_ > degen_switch()) bland_ = true;
    if (pivots_since_refactor_ >= kPivotsBetweenRefactor) refactor(true);
  }

  LoopEnd run_loop() {
    std::vector<double> y;
    std::vector<double> w(static_cast<std::size_t>(m_), 0.0);
    const long budget = max_iters();
    long spent = 0;
    while (true) {
      if (spent++ > budget) return LoopEnd::HitLimit;
      compute_duals(y);
      int enter = -1;
      double best = -opt_.reduced_cost_tol;
      for (std::size_t j = 0; j < cols_.size(); ++j) {
        if (is_basic_[j] || cols_[j].artificial) continue;
        const double rc = reduced_cost(y, j);
        if (bland_) {
          if (rc < -opt_.reduced_cost_tol) {
            enter = static_cast<int>(j);
            break;
          }
        } else if (rc < best) {
          best = rc;
          enter = static_cast<int>(j);
        }
      }
      if (enter < 0) return LoopEnd::Optimal;
      ftran(enter, w);
      int leave = -1;
      double theta = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double wi = w[static_cast<std::size_t>(i)];
        if (wi <= kPivotTol) continue;
        const double ratio = xb_[static_cast<std::size_t>(i)] / wi;
        if (leave < 0 || ratio < theta) {
          theta = ratio;
          leave = i;
        } else if (ratio == theta) {
          const int bi = basic_[static_cast<std::size_t>(i)];
          const int bl = basic_[static_cast<std::size_t>(leave)];
          if (bland_) {
            if (bi < bl) leave = i;
          } else if (wi > w[static_cast<std::size_t>(leave)] ||
                     (wi == w[static_cast<std::size_t>(leave)] && bi < bl)) {
            leave = i;
          }
        }
      }
      if (leave < 0) return LoopEnd::Unbounded;
      if (theta < 0) theta = 0;
      pivot(enter, leave, w, theta);
    }
  }

  // Rebuild the inverse from the basis columns (Gauss-Jordan with partial
  // pivoting); returns false on a singular basis, which only the hint path
  // tolerates.
  bool refactor(bool must_succeed) {
    const int m = m_;
    std::vector<double> mat(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> inv(static_cast<std::size_t>(m) * m, 0.0);
    for (int k = 0; k < m; ++k) {
      for (auto [r, v] : cols_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(k)])].entries) {
        mat[static_cast<std::size_t>(r) * m + k] = v;
      }
      inv[static_cast<std::size_t>(k) * m + k] = 1.0;
    }
    for (int col = 0; col < m; ++col) {
      int piv = -1;
      double best = kPivotTol;
      for (int r = col; r < m; ++r) {
        const double v = std::abs(mat[static_cast<std::size_t>(r) * m + col]);
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (piv < 0) {
        if (must_succeed) throw NumericalFailure("singular basis during refactorization");
        return false;
      }
      if (piv != col) {
        for (int c = 0; c < m; ++c) {
          std::swap(mat[static_cast<std::size_t>(piv) * m + c], mat[static_cast<std::size_t>(col) * m + c]);
          std::swap(inv[static_cast<std::size_t>(piv) * m + c], inv[static_cast<std::size_t>(col) * m + c]);
        }
      }
      const double d = mat[static_cast<std::size_t>(col) * m + col];
      for (int c = 0; c < m; ++c) {
        mat[static_cast<std::size_t>(col) * m + c] /= d;
        inv[static_cast<std::size_t>(col) * m + c] /= d;
      }
      for (int r = 0; r < m; ++r) {
        if (r == col) continue;
        const double f = mat[static_cast<std::size_t>(r) * m + col];
        if (f == 0.0) continue;
        for (int c = 0; c < m; ++c) {
          mat[static_cast<std::size_t>(r) * m + c] -= f * mat[static_cast<std::size_t>(col) * m + c];
          inv[static_cast<std::size_t>(r) * m + c] -= f * inv[static_cast<std::size_t>(col) * m + c];
        }
      }
    }
    // inv holds B^-1 row-major; keep the transposed layout
    binvT_.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
      for (int r = 0; r < m; ++r) {
        binvT_[static_cast<std::size_t>(r) * m + i] = inv[static_cast<std::size_t>(i) * m + r];
      }
    }
    xb_.assign(static_cast<std::size_t>(m), 0.0);
    for (int r = 0; r < m; ++r) {
      const double br = rhs_[static_cast<std::size_t>(r)];
      if (br == 0.0) continue;
      const double* row = &binvT_[static_cast<std::size_t>(r) * m];
      for (int i = 0; i < m; ++i) xb_[static_cast<std::size_t>(i)] += row[i] * br;
    }
    for (double& v : xb_) {
      if (v < 0 && v > -kZeroClamp) v = 0.0;
    }
    pivots_since_refactor_ = 0;
    return true;
  }

  double rhs_norm() const {
    double n = 0.0;
    for (double b : rhs_) n = std::max(n, std::abs(b));
    return n;
  }

  LpSolution extract(LoopEnd end) {
    if (end == LoopEnd::Unbounded) {
      LpSolution sol;
      sol.status = LpStatus::Unbounded;
      sol.iterations = iters_;
      return sol;
    }
    if (end == LoopEnd::HitLimit) {
      if (opt_.throw_on_iteration_limit) {
        throw IterationLimit("simplex hit its pivot budget (" + std::to_string(max_iters()) + ")");
      }
      LpSolution sol = build_solution();
      sol.optimal_certified = false;
      return sol;
    }
    LpSolution sol = build_solution();
    const double hard_tol = 1.0e3 * opt_.feas_tol_scale * (1.0 + rhs_norm());
    if (sol.max_primal_residual > hard_tol && retries_++ == 0) {
      refactor(true);
      return extract(run_loop());
    }
    if (sol.max_primal_residual > 1.0e6 * opt_.feas_tol_scale * (1.0 + rhs_norm())) {
      throw NumericalFailure("primal residual " + std::to_string(sol.max_primal_residual) +
                             " out of tolerance after refactorization");
    }
    return sol;
  }

  LpSolution build_solution() {
    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.iterations = iters_;
    sol.primal.assign(struct_ids_.size(), 0.0);
    std::vector<double> full(cols_.size(), 0.0);
    for (int i = 0; i < m_; ++i) {
      full[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] =
          xb_[static_cast<std::size_t>(i)];
    }
    double value = 0.0;
    for (std::size_t k = 0; k < struct_ids_.size(); ++k) {
      sol.primal[k] = full[static_cast<std::size_t>(struct_ids_[k])];
      value += cols_[static_cast<std::size_t>(struct_ids_[k])].cost * sol.primal[k];
    }
    sol.value = value;
    load_phase2_costs();
    std::vector<double> y;
    compute_duals(y);
    sol.dual.assign(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
      sol.dual[static_cast<std::size_t>(i)] =
          sign_[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    }
    std::vector<double> act(static_cast<std::size_t>(m_), 0.0);
    for (std::size_t k = 0; k < struct_ids_.size(); ++k) {
      const double x = sol.primal[k];
      if (x == 0.0) continue;
      for (auto [r, v] : cols_[static_cast<std::size_t>(struct_ids_[k])].entries) {
        act[static_cast<std::size_t>(r)] += v * x;
      }
    }
    double feas = 0.0;
    double comp = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double slackv = rhs_[static_cast<std::size_t>(i)] - act[static_cast<std::size_t>(i)];
      double viol = 0.0;
      switch (rel_int_[static_cast<std::size_t>(i)]) {
        case Relation::Eq: viol = std::abs(slackv); break;
        case Relation::LessEq: viol = std::max(0.0, -slackv); break;
        case Relation::GreaterEq: viol = std::max(0.0, slackv); break;
      }
      feas = std::max(feas, viol);
      comp = std::max(comp, std::abs(y[static_cast<std::size_t>(i)] * slackv));
    }
    for (std::size_t k = 0; k < struct_ids_.size(); ++k) {
      const double x = sol.primal[k];
      if (x == 0.0) continue;
      comp = std::max(comp, std::abs(reduced_cost(y, static_cast<std::size_t>(struct_ids_[k])) * x));
    }
    sol.max_primal_residual = feas;
    sol.max_comp_slack_residual = comp;
    // public basis snapshot
    sol.basis.assign(static_cast<std::size_t>(m_), -1);
    const int n_pub = static_cast<int>(struct_ids_.size());
    std::vector<int> pub_of_col(cols_.size(), -1);
    for (int k = 0; k < n_pub; ++k) {
      pub_of_col[static_cast<std::size_t>(struct_ids_[static_cast<std::size_t>(k)])] = k;
    }
    std::vector<int> row_of_slack(cols_.size(), -1);
    for (int r = 0; r < m_; ++r) {
      if (slack_of_row_[static_cast<std::size_t>(r)] >= 0) {
        row_of_slack[static_cast<std::size_t>(slack_of_row_[static_cast<std::size_t>(r)])] = r;
      }
    }
    for (int i = 0; i < m_; ++i) {
      const int c = basic_[static_cast<std::size_t>(i)];
      if (pub_of_col[static_cast<std::size_t>(c)] >= 0) {
        sol.basis[static_cast<std::size_t>(i)] = pub_of_col[static_cast<std::size_t>(c)];
      } else if (row_of_slack[static_cast<std::size_t>(c)] >= 0) {
        sol.basis[static_cast<std::size_t>(i)] = n_pub + row_of_slack[static_cast<std::size_t>(c)];
      }
    }
    return sol;
  }

  int m_{0};
  SolverOptions opt_;
  std::vector<Column> cols_;
  std::vector<int> struct_ids_;
  std::vector<int> slack_of_row_;
  std::vector<double> rhs_;
  std::vector<int> sign_;
  std::vector<Relation> rel_int_;

  std::vector<int> basic_;
  std::vector<char> is_basic_;
  std::vector<double> binvT_;
  std::vector<double> xb_;
  std::vector<double> cost_now_;
  long iters_{0};
  long degen_{0};
  long pivots_since_refactor_{0};
  int retries_{0};
  bool bland_{false};
  bool in_phase1_{false};
  bool phase1_infeasible_{false};
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SolverOptions& options,
                    const std::vector<int>* basis_hint) {
  Simplex s(lp, options);
  return s.solve(basis_hint);
}

ColumnGenResult solve_lp_with_columns(const LinearProgram& base, const PricingFn& pricing,
                                      const ColumnGenOptions& options) {
  Simplex solver(base, options.lp);
  ColumnGenResult result;
  result.solution = solver.solve(nullptr);
  if (result.solution.status != LpStatus::Optimal) return result;
  const long max_rounds =
      options.max_rounds > 0 ? options.max_rounds : 10L * static_cast<long>(base.rows.size()) + 1000;
  while (result.solution.optimal_certified) {
    std::vector<SparseColumn> cands = pricing(result.solution.dual);
    std::vector<SparseColumn> improving;
    for (SparseColumn& c : cands) {
      double rc = c.cost;
      for (auto [r, v] : c.entries) {
        if (r < 0 || r >= static_cast<int>(base.rows.size())) {
          throw BadIndex("pricing column touches row " + std::to_string(r));
        }
        rc -= result.solution.dual[static_cast<std::size_t>(r)] * v;
      }
      if (rc < -options.lp.reduced_cost_tol) improving.push_back(std::move(c));
    }
    if (improving.empty()) {
      result.converged = true;
      break;
    }
    if (result.rounds >= max_rounds) {
      if (options.throw_on_round_limit) {
        throw IterationLimit("column generation exceeded " + std::to_string(max_rounds) + " rounds");
      }
      break;
    }
    ++result.rounds;
    for (SparseColumn& c : improving) {
      solver.add_column(c);
      result.generated.push_back(std::move(c));
    }
    result.solution = solver.resolve();
    if (result.solution.status != LpStatus::Optimal) break;
  }
  return result;
}

void dump_lp(const LinearProgram& lp, std::ostream& out) {
  out << "min";
  for (std::size_t j = 0; j < lp.objective.size(); ++j) {
    out << (j ? " + " : " ") << lp.objective[j] << " x" << j;
  }
  out << "\n";
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const LpRow& row = lp.rows[i];
    out << "r" << i << ":";
    bool first = true;
    for (std::size_t j = 0; j < row.coeffs.size(); ++j) {
      if (row.coeffs[j] == 0.0) continue;
      out << (first ? " " : " + ") << row.coeffs[j] << " x" << j;
      first = false;
    }
    if (first) out << " 0";
    switch (row.rel) {
      case Relation::LessEq: out << " <= "; break;
      case Relation::GreaterEq: out << " >= "; break;
      case Relation::Eq: out << " == "; break;
    }
    out << row.rhs << "\n";
  }
}

}  // namespace binpack
