#include "binpack/policy_lp_adaptive.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "binpack/distribution.hpp"
#include "binpack/errors.hpp"

namespace binpack {

int LevelLpLayout::type_index(std::int64_t size) const {
  const auto it = std::lower_bound(types.begin(), types.end(), size);
  if (it == types.end() || *it != size) return -1;
  return static_cast<int>(it - types.begin());
}

LevelLpLayout make_level_layout(std::int64_t B) {
  if (B < 2) throw ParseError("level LP needs an integer capacity of at least 2");
  LevelLpLayout layout;
  layout.B = B;
  for (std::int64_t j = 1; j < B; ++j) layout.types.push_back(j);
  layout.var_of.resize(layout.types.size());
  int next = 0;
  for (std::size_t ji = 0; ji < layout.types.size(); ++ji) {
    const std::int64_t j = layout.types[ji];
    layout.var_of[ji].resize(static_cast<std::size_t>(B - j + 1));
    for (std::int64_t h = 0; h <= B - j; ++h) {
      layout.var_of[ji][static_cast<std::size_t>(h)] = next++;
    }
  }
  layout.num_vars = next;
  return layout;
}

std::vector<std::int64_t> occupied_levels(const PackingState& state) {
  std::vector<std::int64_t> levels{0};
  for (const auto& [level, count] : state.level_histogram) {
    if (count > 0) levels.push_back(level);
  }
  return levels;
}

namespace {

std::int64_t level_count(const PackingState& state, std::int64_t level) {
  const auto it = state.level_histogram.find(level);
  return it == state.level_histogram.end() ? 0 : it->second;
}

// rows shared by the adaptive and the static LP: no-floating rows first
// (h = 1..B-1), then one balance row per type.  The caller appends the
// arrival row in between for the adaptive variant.
void add_no_floating_rows(const LevelLpLayout& layout, const PackingState* state,
                          LinearProgram* lp) {
  const std::int64_t B = layout.B;
  for (std::int64_t h = 1; h <= B - 1; ++h) {
    LpRow row;
    row.coeffs.assign(static_cast<std::size_t>(layout.num_vars), 0.0);
    for (std::size_t ji = 0; ji < layout.types.size(); ++ji) {
      const std::int64_t j = layout.types[ji];
      if (j <= h) row.coeffs[static_cast<std::size_t>(layout.var_of[ji][static_cast<std::size_t>(h - j)])] += 1.0;
      if (j <= B - h) row.coeffs[static_cast<std::size_t>(layout.var_of[ji][static_cast<std::size_t>(h)])] -= 1.0;
    }
    row.rel = Relation::GreaterEq;
    row.rhs = state == nullptr ? 0.0 : -static_cast<double>(level_count(*state, h));
    lp->rows.push_back(std::move(row));
  }
}

void add_balance_rows(const LevelLpLayout& layout, const std::vector<Rational>& pmf, double scale,
                      LinearProgram* lp) {
  if (pmf.size() != layout.types.size()) {
    throw BadIndex("pmf length disagrees with the type grid");
  }
  for (std::size_t ji = 0; ji < layout.types.size(); ++ji) {
    LpRow row;
    row.coeffs.assign(static_cast<std::size_t>(layout.num_vars), 0.0);
    for (const int var : layout.var_of[ji]) row.coeffs[static_cast<std::size_t>(var)] = 1.0;
    row.rel = Relation::Eq;
    row.rhs = scale * static_cast<double>(pmf[ji].num) / static_cast<double>(pmf[ji].den);
    lp->rows.push_back(std::move(row));
  }
}

std::vector<double> fresh_bin_objective(const LevelLpLayout& layout) {
  std::vector<double> obj(static_cast<std::size_t>(layout.num_vars), 0.0);
  for (std::size_t ji = 0; ji < layout.types.size(); ++ji) {
    obj[static_cast<std::size_t>(layout.var_of[ji][0])] = 1.0;
  }
  return obj;
}

}  // namespace

LinearProgram build_level_lp(const LevelLpLayout& layout, const PackingState& state, Size x,
                             const std::vector<Rational>& pmf, std::int64_t T, std::int64_t t) {
  const int jx = layout.type_index(x.value);
  if (jx < 0) throw UnknownSize("arrival size " + std::to_string(x.value) + " is not a type");
  LinearProgram lp;
  lp.objective = fresh_bin_objective(layout);
  add_no_floating_rows(layout, &state, &lp);
  {
    LpRow row;
    row.coeffs.assign(static_cast<std::size_t>(layout.num_vars), 0.0);
    for (const std::int64_t h : occupied_levels(state)) {
      if (h + x.value > layout.B) continue;
      row.coeffs[static_cast<std::size_t>(layout.var_of[static_cast<std::size_t>(jx)][static_cast<std::size_t>(h)])] = 1.0;
    }
    row.rel = Relation::GreaterEq;
    row.rhs = 1.0 / static_cast<double>(T);
    lp.rows.push_back(std::move(row));
  }
  add_balance_rows(layout, pmf, static_cast<double>(T - t + 1), &lp);
  return lp;
}

LinearProgram build_static_level_lp(const LevelLpLayout& layout, const std::vector<Rational>& pmf) {
  LinearProgram lp;
  lp.objective = fresh_bin_objective(layout);
  add_no_floating_rows(layout, nullptr, &lp);
  add_balance_rows(layout, pmf, 1.0, &lp);
  return lp;
}

LevelChoice select_level(const LevelLpLayout& layout, const LpSolution& solution, Size x,
                         const std::vector<std::int64_t>& occupied, Rng& rng) {
  const int jx = layout.type_index(x.value);
  if (jx < 0) throw UnknownSize("arrival size " + std::to_string(x.value) + " is not a type");
  std::vector<std::pair<std::int64_t, double>> mass_at;
  double mass = 0.0;
  for (const std::int64_t h : occupied) {
    if (h + x.value > layout.B) continue;
    const int var = layout.var_of[static_cast<std::size_t>(jx)][static_cast<std::size_t>(h)];
    const double v = std::max(0.0, solution.primal[static_cast<std::size_t>(var)]);
    mass_at.emplace_back(h, v);
    mass += v;
  }
  LevelChoice choice;
  choice.mass = mass;
  if (mass < 1e-9) {
    choice.level = 0;
    choice.degenerate = true;
    return choice;
  }
  const double r = rng.next_unit() * mass;
  double acc = 0.0;
  choice.level = mass_at.back().first;
  for (const auto& [h, v] : mass_at) {
    acc += v;
    if (r < acc) {
      choice.level = h;
      break;
    }
  }
  return choice;
}

LpAdaptiveRunResult run_lp_adaptive_policy(const Instance& arrivals, std::int64_t T,
                                           std::uint64_t seed, const LpAdaptiveOptions& options) {
  if (static_cast<std::int64_t>(arrivals.sizes.size()) != T) {
    throw HorizonMismatch("arrival stream has " + std::to_string(arrivals.sizes.size()) +
                          " items but T = " + std::to_string(T));
  }
  const std::int64_t stop = options.stop_at > 0 ? std::min(options.stop_at, T) : T;
  const LevelLpLayout layout = make_level_layout(arrivals.den);
  std::vector<Size> type_sizes;
  type_sizes.reserve(layout.types.size());
  for (const std::int64_t j : layout.types) type_sizes.push_back(Size{j});

  LpAdaptiveRunResult result;
  result.T = T;
  result.stopped_at = stop;
  result.state = PackingState(arrivals.den);
  Rng rng(seed);

  // lowest-index bin per level, maintained alongside the state
  std::map<std::int64_t, std::set<std::int32_t>> bins_at;
  std::vector<int> warm_basis;

  for (std::int64_t t = 1; t <= stop; ++t) {
    const Size x = arrivals.sizes[static_cast<std::size_t>(t - 1)];
    const std::vector<Rational> pmf =
        empirical_pmf(arrivals.sizes, static_cast<std::size_t>(t), type_sizes);
    const std::vector<std::int64_t> occupied = occupied_levels(result.state);
    const LinearProgram lp = build_level_lp(layout, result.state, x, pmf, T, t);

    const bool try_warm = options.warm_start && !warm_basis.empty();
    const LpSolution sol = solve_lp(lp, {}, try_warm ? &warm_basis : nullptr);
    if (sol.status != LpStatus::Optimal) {
      throw NumericalFailure("level LP not optimal at t = " + std::to_string(t));
    }
    warm_basis = sol.basis;

    const LevelChoice choice = select_level(layout, sol, x, occupied, rng);
    std::int32_t placed_bin = -1;
    if (choice.level == 0) {
      place_item(result.state, x, Placement::new_bin());
      placed_bin = static_cast<std::int32_t>(result.state.bins.size() - 1);
    } else {
      const auto it = bins_at.find(choice.level);
      if (it == bins_at.end() || it->second.empty()) {
        throw BadIndex("no bin at chosen level " + std::to_string(choice.level));
      }
      placed_bin = *it->second.begin();
      it->second.erase(it->second.begin());
      if (it->second.empty()) bins_at.erase(it);
      place_item(result.state, x, Placement::existing(placed_bin));
    }
    const std::int64_t new_level = result.state.bins[static_cast<std::size_t>(placed_bin)].load;
    if (new_level < arrivals.den) bins_at[new_level].insert(placed_bin);

    result.steps.push_back(LpAdaptiveStepTrace{sol.value, choice.level, choice.degenerate, try_warm});
  }
  result.bins = bins_used(result.state);
  return result;
}

}  // namespace binpack
