#include "binpack/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include "binpack/errors.hpp"
#include "binpack/simplex.hpp"

namespace binpack {
namespace {

constexpr double kIntegralSnap = 1e-7;

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// Nearest integer when within the snap window, otherwise floor.
std::int64_t snapped_floor(double z) {
  const double r = std::round(z);
  if (std::abs(z - r) < kIntegralSnap) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(z));
}

bool near_integer(double z) { return std::abs(z - std::round(z)) < kIntegralSnap; }

}  // namespace

SizeClasses group_sizes(const Instance& inst) {
  SizeClasses classes;
  classes.den = inst.den;
  std::map<std::int64_t, std::vector<std::int32_t>> by_size;
  for (std::size_t i = 0; i < inst.sizes.size(); ++i) {
    by_size[inst.sizes[i].value].push_back(static_cast<std::int32_t>(i));
  }
  for (auto& [size, ids] : by_size) {
    classes.sizes.push_back(size);
    classes.demand.push_back(static_cast<std::int64_t>(ids.size()));
    classes.ids.push_back(std::move(ids));
  }
  return classes;
}

std::vector<Configuration> enumerate_configurations(const std::vector<std::int64_t>& sizes,
                                                    std::int64_t capacity,
                                                    std::size_t max_count) {
  const int m = static_cast<int>(sizes.size());
  for (int i = 0; i + 1 < m; ++i) {
    if (sizes[static_cast<std::size_t>(i)] >= sizes[static_cast<std::size_t>(i + 1)]) {
      throw BadIndex("sizes must be distinct and ascending");
    }
  }
  std::vector<Configuration> out;
  if (m == 0) return out;
  for (std::int64_t s : sizes) {
    if (s <= 0 || s > capacity) return out;  // guarded upstream; nothing feasible here
  }
  // Walk classes from the largest size down; the smallest class is filled to
  // the brim, which makes every emitted tuple maximal and every maximal tuple
  // reachable.
  std::vector<std::int64_t> counts(static_cast<std::size_t>(m), 0);
  std::size_t nodes = 0;
  std::function<void(int, std::int64_t)> rec = [&](int i, std::int64_t cap) {
    if (++nodes > 40 * max_count) {
      throw TooManyConfigurations("configuration recursion exceeded the node guard");
    }
    if (i == 0) {
      counts[0] = cap / sizes[0];
      out.push_back(Configuration{counts});
      if (out.size() > max_count) {
        throw TooManyConfigurations("more than " + std::to_string(max_count) +
                                    " maximal configurations");
      }
      return;
    }
    const std::int64_t top = cap / sizes[static_cast<std::size_t>(i)];
    for (std::int64_t t = top; t >= 0; --t) {
      counts[static_cast<std::size_t>(i)] = t;
      rec(i - 1, cap - t * sizes[static_cast<std::size_t>(i)]);
    }
    counts[static_cast<std::size_t>(i)] = 0;
  };
  rec(m - 1, capacity);
  return out;
}

namespace {

// Coverage LP over an explicit configuration list: min sum z,
// sum_j counts[j][i] z_j >= demand_i.
LinearProgram coverage_lp(const std::vector<Configuration>& configs,
                          const std::vector<std::int64_t>& demand) {
  const std::size_t m = demand.size();
  const std::size_t n = configs.size();
  LinearProgram lp;
  lp.objective.assign(n, 1.0);
  lp.rows.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    lp.rows[i].coeffs.assign(n, 0.0);
    lp.rows[i].rel = Relation::GreaterEq;
    lp.rows[i].rhs = static_cast<double>(demand[i]);
    for (std::size_t j = 0; j < n; ++j) {
      lp.rows[i].coeffs[j] = static_cast<double>(configs[j].counts[i]);
    }
  }
  return lp;
}

Configuration ffd_bin_to_config(const std::vector<std::int64_t>& sizes,
                                const std::vector<std::int64_t>& bin_sizes) {
  Configuration cfg;
  cfg.counts.assign(sizes.size(), 0);
  for (std::int64_t s : bin_sizes) {
    const auto it = std::lower_bound(sizes.begin(), sizes.end(), s);
    cfg.counts[static_cast<std::size_t>(it - sizes.begin())] += 1;
  }
  return cfg;
}

// Exact unbounded-knapsack pricing by capacity DP; only for small integral
// capacities.
std::vector<std::int64_t> price_by_dp(const std::vector<std::int64_t>& sizes,
                                      const std::vector<double>& duals, std::int64_t capacity,
                                      double* best_value) {
  const std::size_t m = sizes.size();
  const std::size_t cap = static_cast<std::size_t>(capacity);
  std::vector<double> best(cap + 1, 0.0);
  // choice[c]: class whose copy attains best[c], or -1 when best[c] simply
  // carries over from c-1
  std::vector<std::int32_t> choice(cap + 1, -1);
  for (std::size_t c = 1; c <= cap; ++c) {
    best[c] = best[c - 1];
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t s = static_cast<std::size_t>(sizes[i]);
      if (s > c) continue;
      const double v = best[c - s] + duals[i];
      if (v > best[c] + 1e-12) {
        best[c] = v;
        choice[c] = static_cast<std::int32_t>(i);
      }
    }
  }
  *best_value = best[cap];
  std::vector<std::int64_t> counts(m, 0);
  std::size_t c = cap;
  while (c > 0) {
    const std::int32_t ch = choice[c];
    if (ch < 0) {
      --c;
      continue;
    }
    counts[static_cast<std::size_t>(ch)] += 1;
    c -= static_cast<std::size_t>(sizes[static_cast<std::size_t>(ch)]);
  }
  return counts;
}

// Depth-first unbounded-knapsack pricing with a greedy fractional bound, for
// large capacities.  Explores classes in descending dual/size ratio.  Sets
// *certified to false when the node cap cuts the search.
std::vector<std::int64_t> price_by_dfs(const std::vector<std::int64_t>& sizes,
                                       const std::vector<double>& duals, std::int64_t capacity,
                                       long node_cap, double* best_value, bool* certified) {
  const std::size_t m = sizes.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ra = duals[a] * static_cast<double>(sizes[b]);
    const double rb = duals[b] * static_cast<double>(sizes[a]);
    if (ra != rb) return ra > rb;
    return a < b;
  });
  std::vector<std::int64_t> best_counts(m, 0);
  std::vector<std::int64_t> counts(m, 0);
  double best = 0.0;
  long nodes = 0;
  *certified = true;
  std::function<void(std::size_t, std::int64_t, double)> rec = [&](std::size_t d, std::int64_t cap,
                                                                   double value) {
    if (nodes > node_cap) {
      *certified = false;
      return;
    }
    ++nodes;
    if (value > best) {
      best = value;
      best_counts = counts;
    }
    if (d == m || cap <= 0) return;
    const std::size_t cls = order[d];
    // remaining classes have ratio <= this one's; greedy fractional bound
    const double bound =
        value + static_cast<double>(cap) * duals[cls] / static_cast<double>(sizes[cls]);
    if (bound <= best + 1e-12) return;
    const std::int64_t top = cap / sizes[cls];
    for (std::int64_t t = top; t >= 0; --t) {
      if (duals[cls] <= 0.0 && t > 0) continue;  // zero-dual copies never help
      counts[cls] = t;
      rec(d + 1, cap - t * sizes[cls], value + static_cast<double>(t) * duals[cls]);
      if (nodes > node_cap) break;
    }
    counts[cls] = 0;
  };
  rec(0, capacity, 0.0);
  *best_value = best;
  return best_counts;
}

constexpr std::int64_t kDpCapacityCap = 200'000;

}  // namespace

FractionalPlan solve_fractional(const Instance& inst, const FractionalOptions& opt) {
  FractionalPlan plan;
  plan.den = inst.den;
  if (inst.sizes.empty()) return plan;
  SizeClasses classes = group_sizes(inst);
  plan.sizes = classes.sizes;
  const std::size_t m = classes.sizes.size();

  bool direct = true;
  std::vector<Configuration> configs;
  try {
    configs = enumerate_configurations(classes.sizes, inst.den, opt.direct_enumeration_cap);
  } catch (const TooManyConfigurations&) {
    direct = false;
  }

  SolverOptions lp_opt;
  lp_opt.max_iterations = opt.lp_max_iterations;

  if (direct) {
    const LinearProgram lp = coverage_lp(configs, classes.demand);
    const LpSolution sol = solve_lp(lp, lp_opt);
    if (sol.status != LpStatus::Optimal) {
      throw NumericalFailure("coverage LP not optimal on a feasible instance");
    }
    plan.configurations = std::move(configs);
    plan.weights = sol.primal;
    plan.value = sol.value;
    plan.lp_iterations = sol.iterations;
    plan.converged = true;
    return plan;
  }

  // Column generation.  Base columns: one maximal single-class config per
  // class (keeps every row coverable) plus the FFD bins as a warm start.
  std::vector<Configuration> base_configs;
  std::vector<std::vector<std::int64_t>> seen;
  auto push_config = [&](Configuration cfg) {
    if (std::find(seen.begin(), seen.end(), cfg.counts) != seen.end()) return;
    seen.push_back(cfg.counts);
    base_configs.push_back(std::move(cfg));
  };
  for (std::size_t i = 0; i < m; ++i) {
    Configuration cfg;
    cfg.counts.assign(m, 0);
    cfg.counts[i] = inst.den / classes.sizes[i];
    push_config(std::move(cfg));
  }
  {
    const IntegralPlan ffd = solve_ffd(inst);
    for (const auto& bin : ffd.bin_items) {
      std::vector<std::int64_t> bin_sizes;
      bin_sizes.reserve(bin.size());
      for (std::int32_t id : bin) bin_sizes.push_back(inst.sizes[static_cast<std::size_t>(id)].value);
      push_config(ffd_bin_to_config(classes.sizes, bin_sizes));
    }
  }

  const bool dp_pricing = inst.den <= kDpCapacityCap;
  bool last_call_certified = true;
  PricingFn pricing = [&](const std::vector<double>& duals) {
    std::vector<double> y(duals.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::max(0.0, duals[i]);
    double value = 0.0;
    std::vector<std::int64_t> counts;
    if (dp_pricing) {
      counts = price_by_dp(classes.sizes, y, inst.den, &value);
      last_call_certified = true;
    } else {
      counts =
          price_by_dfs(classes.sizes, y, inst.den, opt.pricing_node_cap, &value, &last_call_certified);
    }
    std::vector<SparseColumn> cols;
    if (value > 1.0 + 1e-7) {
      SparseColumn col;
      col.cost = 1.0;
      for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) col.entries.emplace_back(static_cast<int>(i), static_cast<double>(counts[i]));
      }
      cols.push_back(std::move(col));
    }
    return cols;
  };

  ColumnGenOptions cg;
  cg.lp = lp_opt;
  cg.max_rounds = opt.max_pricing_rounds;
  const ColumnGenResult res = solve_lp_with_columns(coverage_lp(base_configs, classes.demand), pricing, cg);
  if (res.solution.status != LpStatus::Optimal) {
    throw NumericalFailure("restricted master LP not optimal on a feasible instance");
  }
  plan.configurations = std::move(base_configs);
  for (const SparseColumn& col : res.generated) {
    Configuration cfg;
    cfg.counts.assign(m, 0);
    for (auto [row, v] : col.entries) {
      cfg.counts[static_cast<std::size_t>(row)] = static_cast<std::int64_t>(std::llround(v));
    }
    plan.configurations.push_back(std::move(cfg));
  }
  plan.weights = res.solution.primal;
  plan.value = res.solution.value;
  plan.lp_iterations = res.solution.iterations;
  plan.pricing_rounds = res.rounds;
  plan.converged = res.converged && last_call_certified && res.solution.optimal_certified;
  return plan;
}

namespace {

// Instantiates integral configuration counts with concrete items.  Consumes
// ids per class in ascending order; inside one bin the larger classes are
// filled first.  Returns leftover (uncovered) item ids through *residual.
std::vector<std::vector<std::int32_t>> instantiate_configs(
    const SizeClasses& classes, const std::vector<Configuration>& configs,
    const std::vector<std::int64_t>& copies, std::vector<std::int32_t>* residual) {
  const std::size_t m = classes.sizes.size();
  std::vector<std::size_t> next(m, 0);
  std::vector<std::vector<std::int32_t>> bins;
  for (std::size_t j = 0; j < configs.size(); ++j) {
    for (std::int64_t c = 0; c < copies[j]; ++c) {
      std::vector<std::int32_t> bin;
      for (std::size_t ii = m; ii-- > 0;) {
        const std::int64_t want = configs[j].counts[ii];
        for (std::int64_t k = 0; k < want && next[ii] < classes.ids[ii].size(); ++k) {
          bin.push_back(classes.ids[ii][next[ii]++]);
        }
      }
      if (!bin.empty()) bins.push_back(std::move(bin));
    }
  }
  residual->clear();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = next[i]; k < classes.ids[i].size(); ++k) {
      residual->push_back(classes.ids[i][k]);
    }
  }
  return bins;
}

IntegralPlan finish_plan(std::vector<std::vector<std::int32_t>> bins, std::size_t item_count) {
  IntegralPlan plan;
  plan.bin_items = std::move(bins);
  plan.bins = static_cast<std::int64_t>(plan.bin_items.size());
  plan.bin_of.assign(item_count, -1);
  for (std::size_t b = 0; b < plan.bin_items.size(); ++b) {
    for (std::int32_t id : plan.bin_items[b]) {
      plan.bin_of[static_cast<std::size_t>(id)] = static_cast<std::int32_t>(b);
    }
  }
  return plan;
}

// First-fit the given ids (sorted by size desc, id asc) over existing bins,
// then new ones.  loads must match bins on entry.
void first_fit_into(const Instance& inst, std::vector<std::int32_t> ids,
                    std::vector<std::vector<std::int32_t>>* bins, std::vector<std::int64_t>* loads) {
  std::sort(ids.begin(), ids.end(), [&](std::int32_t a, std::int32_t b) {
    const std::int64_t sa = inst.sizes[static_cast<std::size_t>(a)].value;
    const std::int64_t sb = inst.sizes[static_cast<std::size_t>(b)].value;
    if (sa != sb) return sa > sb;
    return a < b;
  });
  for (std::int32_t id : ids) {
    const std::int64_t s = inst.sizes[static_cast<std::size_t>(id)].value;
    bool placed = false;
    for (std::size_t b = 0; b < bins->size(); ++b) {
      if ((*loads)[b] + s <= inst.den) {
        (*bins)[b].push_back(id);
        (*loads)[b] += s;
        placed = true;
        break;
      }
    }
    if (!placed) {
      bins->push_back({id});
      loads->push_back(s);
    }
  }
}

}  // namespace

IntegralPlan solve_ffd(const Instance& inst) {
  std::vector<std::int32_t> ids(inst.sizes.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<std::vector<std::int32_t>> bins;
  std::vector<std::int64_t> loads;
  first_fit_into(inst, std::move(ids), &bins, &loads);
  IntegralPlan plan = finish_plan(std::move(bins), inst.sizes.size());
  plan.proven_optimal = inst.sizes.empty();
  return plan;
}

IntegralPlan round_plan(const FractionalPlan& fractional, const Instance& inst) {
  SizeClasses classes = group_sizes(inst);
  if (classes.sizes != fractional.sizes) {
    throw PlanMismatch("fractional plan size classes disagree with the instance");
  }
  std::vector<std::int64_t> copies(fractional.configurations.size(), 0);
  for (std::size_t j = 0; j < copies.size(); ++j) {
    copies[j] = std::max<std::int64_t>(0, snapped_floor(fractional.weights[j]));
  }
  std::vector<std::int32_t> residual;
  std::vector<std::vector<std::int32_t>> bins =
      instantiate_configs(classes, fractional.configurations, copies, &residual);
  std::vector<std::int64_t> loads(bins.size(), 0);
  for (std::size_t b = 0; b < bins.size(); ++b) {
    for (std::int32_t id : bins[b]) loads[b] += inst.sizes[static_cast<std::size_t>(id)].value;
  }
  first_fit_into(inst, std::move(residual), &bins, &loads);
  IntegralPlan plan = finish_plan(std::move(bins), inst.sizes.size());
  plan.proven_optimal = false;
  return plan;
}

std::int64_t lower_bound_l2(const Instance& inst) {
  if (inst.sizes.empty()) return 0;
  const std::int64_t C = inst.den;
  std::vector<std::int64_t> s;
  s.reserve(inst.sizes.size());
  for (const Size& x : inst.sizes) s.push_back(x.value);
  std::sort(s.begin(), s.end());
  std::vector<std::int64_t> alphas{0};
  for (std::int64_t v : s) {
    if (2 * v <= C) alphas.push_back(v);
    else if (2 * (C - v + 1) <= C) alphas.push_back(C - v + 1);
  }
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  std::int64_t best = volume_lower_bound(inst);
  for (std::int64_t a : alphas) {
    std::int64_t n1 = 0, n2 = 0, sum2 = 0, sum3 = 0;
    for (std::int64_t v : s) {
      if (v > C - a) {
        ++n1;
      } else if (2 * v > C) {
        ++n2;
        sum2 += v;
      } else if (v >= a) {
        sum3 += v;
      }
    }
    const std::int64_t free2 = n2 * C - sum2;
    const std::int64_t extra = sum3 > free2 ? ceil_div(sum3 - free2, C) : 0;
    best = std::max(best, n1 + n2 + extra);
  }
  return best;
}

namespace {

// ---- exact solver, configuration-count branch and bound ----

struct ConfigNode {
  std::vector<std::int64_t> lb;            // forced copies per config
  std::vector<std::pair<std::size_t, std::int64_t>> ubs;  // config -> cap on extra copies
};

class ConfigBnb {
 public:
  ConfigBnb(const Instance& inst, SizeClasses classes, std::vector<Configuration> configs,
            const ExactBudget& budget)
      : inst_(inst), classes_(std::move(classes)), configs_(std::move(configs)), budget_(budget) {}

  IntegralPlan run() {
    const std::size_t n = configs_.size();
    incumbent_ = solve_ffd(inst_);
    global_lb_ = std::max(lower_bound_l2(inst_), static_cast<std::int64_t>(0));

    ConfigNode root;
    root.lb.assign(n, 0);
    std::vector<ConfigNode> stack;
    stack.push_back(std::move(root));
    long nodes = 0;
    bool exhausted = false;
    while (!stack.empty()) {
      if (incumbent_.bins <= global_lb_) break;
      if (++nodes > budget_.node_limit) {
        exhausted = true;
        break;
      }
      ConfigNode node = std::move(stack.back());
      stack.pop_back();
      std::int64_t base = 0;
      for (std::int64_t c : node.lb) base += c;
      if (base >= incumbent_.bins) continue;

      const LpSolution sol = solve_node(node);
      if (sol.status != LpStatus::Optimal) continue;
      const double total = static_cast<double>(base) + sol.value;
      if (static_cast<std::int64_t>(std::ceil(total - 1e-6)) >= incumbent_.bins) continue;

      std::size_t frac_j = n;
      double frac_dist = kIntegralSnap;
      for (std::size_t j = 0; j < n; ++j) {
        const double z = sol.primal[j];
        const double d = std::abs(z - std::round(z));
        if (d > frac_dist) {
          frac_dist = d;
          frac_j = j;
        }
      }
      if (frac_j == n) {
        accept_integral(node, sol);
        continue;
      }
      const double z = sol.primal[frac_j];
      ConfigNode down = node;  // z_j <= floor(z)
      down.ubs.emplace_back(frac_j, static_cast<std::int64_t>(std::floor(z)));
      ConfigNode up = std::move(node);  // z_j >= ceil(z), folded into lb
      up.lb[frac_j] += static_cast<std::int64_t>(std::ceil(z));
      if (z - std::floor(z) >= 0.5) {
        stack.push_back(std::move(down));
        stack.push_back(std::move(up));  // explored first
      } else {
        stack.push_back(std::move(up));
        stack.push_back(std::move(down));
      }
    }
    incumbent_.proven_optimal = !exhausted;
    return incumbent_;
  }

 private:
  LpSolution solve_node(const ConfigNode& node) {
    const std::size_t m = classes_.sizes.size();
    const std::size_t n = configs_.size();
    LinearProgram lp;
    lp.objective.assign(n, 1.0);
    lp.rows.resize(m + node.ubs.size());
    for (std::size_t i = 0; i < m; ++i) {
      std::int64_t covered = 0;
      for (std::size_t j = 0; j < n; ++j) covered += node.lb[j] * configs_[j].counts[i];
      lp.rows[i].coeffs.assign(n, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        lp.rows[i].coeffs[j] = static_cast<double>(configs_[j].counts[i]);
      }
      lp.rows[i].rel = Relation::GreaterEq;
      lp.rows[i].rhs = static_cast<double>(std::max<std::int64_t>(0, classes_.demand[i] - covered));
    }
    for (std::size_t u = 0; u < node.ubs.size(); ++u) {
      LpRow& row = lp.rows[m + u];
      row.coeffs.assign(n, 0.0);
      row.coeffs[node.ubs[u].first] = 1.0;
      row.rel = Relation::LessEq;
      row.rhs = static_cast<double>(node.ubs[u].second);
    }
    SolverOptions opt;
    opt.max_iterations = 100'000;
    return solve_lp(lp, opt);
  }

  void accept_integral(const ConfigNode& node, const LpSolution& sol) {
    std::vector<std::int64_t> copies(configs_.size(), 0);
    std::int64_t total = 0;
    for (std::size_t j = 0; j < configs_.size(); ++j) {
      copies[j] = node.lb[j] + static_cast<std::int64_t>(std::llround(sol.primal[j]));
      total += copies[j];
    }
    if (total >= incumbent_.bins) return;
    std::vector<std::int32_t> residual;
    std::vector<std::vector<std::int32_t>> bins =
        instantiate_configs(classes_, configs_, copies, &residual);
    if (!residual.empty()) {
      // numerically-marginal coverage; repair keeps validity
      std::vector<std::int64_t> loads(bins.size(), 0);
      for (std::size_t b = 0; b < bins.size(); ++b) {
        for (std::int32_t id : bins[b]) loads[b] += inst_.sizes[static_cast<std::size_t>(id)].value;
      }
      first_fit_into(inst_, std::move(residual), &bins, &loads);
    }
    if (static_cast<std::int64_t>(bins.size()) < incumbent_.bins) {
      incumbent_ = finish_plan(std::move(bins), inst_.sizes.size());
    }
  }

  const Instance& inst_;
  SizeClasses classes_;
  std::vector<Configuration> configs_;
  ExactBudget budget_;
  IntegralPlan incumbent_;
  std::int64_t global_lb_{0};
};

// ---- exact solver, item-assignment depth-first search ----

class ItemBnb {
 public:
  ItemBnb(const Instance& inst, const ExactBudget& budget) : inst_(inst), budget_(budget) {
    order_.resize(inst.sizes.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](std::int32_t a, std::int32_t b) {
      const std::int64_t sa = inst.sizes[static_cast<std::size_t>(a)].value;
      const std::int64_t sb = inst.sizes[static_cast<std::size_t>(b)].value;
      if (sa != sb) return sa > sb;
      return a < b;
    });
    suffix_volume_.assign(order_.size() + 1, 0);
    for (std::size_t i = order_.size(); i-- > 0;) {
      suffix_volume_[i] =
          suffix_volume_[i + 1] + inst.sizes[static_cast<std::size_t>(order_[i])].value;
    }
  }

  IntegralPlan run() {
    incumbent_ = solve_ffd(inst_);
    lb_ = lower_bound_l2(inst_);
    if (incumbent_.bins > lb_) {
      assign_.assign(order_.size(), -1);
      dfs(0);
    }
    incumbent_.proven_optimal = !exhausted_;
    return incumbent_;
  }

 private:
  void dfs(std::size_t i) {
    if (exhausted_ || incumbent_.bins <= lb_) return;
    if (++nodes_ > budget_.node_limit) {
      exhausted_ = true;
      return;
    }
    const std::int64_t used = static_cast<std::int64_t>(residual_.size());
    if (i == order_.size()) {
      if (used < incumbent_.bins) record_incumbent();
      return;
    }
    std::int64_t free_total = 0;
    for (std::int64_t r : residual_) free_total += r;
    const std::int64_t extra =
        suffix_volume_[i] > free_total ? ceil_div(suffix_volume_[i] - free_total, inst_.den) : 0;
    if (used + extra >= incumbent_.bins) return;

    const std::int32_t id = order_[i];
    const std::int64_t s = inst_.sizes[static_cast<std::size_t>(id)].value;
    // equal-size symmetry: an item equal to its predecessor never goes into a
    // lower-indexed bin than the predecessor did
    std::int32_t min_bin = 0;
    if (i > 0 &&
        inst_.sizes[static_cast<std::size_t>(order_[i - 1])].value == s) {
      min_bin = assign_[i - 1];
    }
    // perfect fit dominates every alternative
    for (std::size_t b = static_cast<std::size_t>(min_bin); b < residual_.size(); ++b) {
      if (residual_[b] == s) {
        place(i, b, s);
        return;
      }
    }
    std::vector<std::int64_t> tried;
    for (std::size_t b = static_cast<std::size_t>(min_bin); b < residual_.size(); ++b) {
      if (residual_[b] < s) continue;
      if (std::find(tried.begin(), tried.end(), residual_[b]) != tried.end()) continue;
      tried.push_back(residual_[b]);
      place(i, b, s);
      if (exhausted_) return;
    }
    if (used + 1 < incumbent_.bins) {
      residual_.push_back(inst_.den - s);
      assign_[i] = static_cast<std::int32_t>(residual_.size() - 1);
      dfs(i + 1);
      residual_.pop_back();
      assign_[i] = -1;
    }
  }

  void place(std::size_t i, std::size_t b, std::int64_t s) {
    residual_[b] -= s;
    assign_[i] = static_cast<std::int32_t>(b);
    dfs(i + 1);
    residual_[b] += s;
    assign_[i] = -1;
  }

  void record_incumbent() {
    std::vector<std::vector<std::int32_t>> bins(residual_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) {
      bins[static_cast<std::size_t>(assign_[i])].push_back(order_[i]);
    }
    for (auto& bin : bins) std::sort(bin.begin(), bin.end());
    incumbent_ = finish_plan(std::move(bins), order_.size());
  }

  const Instance& inst_;
  ExactBudget budget_;
  std::vector<std::int32_t> order_;
  std::vector<std::int64_t> suffix_volume_;
  std::vector<std::int64_t> residual_;
  std::vector<std::int32_t> assign_;
  IntegralPlan incumbent_;
  std::int64_t lb_{0};
  long nodes_{0};
  bool exhausted_{false};
};

constexpr std::size_t kExactConfigCap = 50'000;

}  // namespace

IntegralPlan solve_exact(const Instance& inst, const ExactBudget& budget) {
  if (inst.sizes.empty()) {
    IntegralPlan plan;
    plan.proven_optimal = true;
    return plan;
  }
  SizeClasses classes = group_sizes(inst);
  try {
    std::vector<Configuration> configs =
        enumerate_configurations(classes.sizes, inst.den, kExactConfigCap);
    return ConfigBnb(inst, std::move(classes), std::move(configs), budget).run();
  } catch (const TooManyConfigurations&) {
    // fall through to the item-assignment search
  }
  if (static_cast<int>(inst.sizes.size()) > budget.item_path_max_items &&
      !budget.override_item_guard) {
    throw BudgetExceeded("exact search refused: " + std::to_string(inst.sizes.size()) +
                         " items on the item-assignment path (override to force)");
  }
  return ItemBnb(inst, budget).run();
}

std::optional<std::string> validate_plan(const IntegralPlan& plan, const Instance& inst) {
  const std::size_t n = inst.sizes.size();
  if (plan.bins != static_cast<std::int64_t>(plan.bin_items.size())) {
    return "bins field disagrees with bin_items size";
  }
  if (plan.bin_of.size() != n) return "bin_of size disagrees with the instance";
  std::vector<char> seen(n, 0);
  for (std::size_t b = 0; b < plan.bin_items.size(); ++b) {
    if (plan.bin_items[b].empty()) return "bin " + std::to_string(b) + " is empty";
    std::int64_t load = 0;
    for (std::int32_t id : plan.bin_items[b]) {
      if (id < 0 || static_cast<std::size_t>(id) >= n) {
        return "bin " + std::to_string(b) + " holds unknown item id " + std::to_string(id);
      }
      if (seen[static_cast<std::size_t>(id)]) {
        return "item " + std::to_string(id) + " assigned twice";
      }
      seen[static_cast<std::size_t>(id)] = 1;
      if (plan.bin_of[static_cast<std::size_t>(id)] != static_cast<std::int32_t>(b)) {
        return "bin_of disagrees for item " + std::to_string(id);
      }
      load += inst.sizes[static_cast<std::size_t>(id)].value;
    }
    if (load > inst.den) return "bin " + std::to_string(b) + " exceeds capacity";
  }
  for (std::size_t id = 0; id < n; ++id) {
    if (!seen[id]) return "item " + std::to_string(id) + " unassigned";
  }
  return std::nullopt;
}

}  // namespace binpack
