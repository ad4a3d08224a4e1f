// Command-line front end: offline oracles, single policy runs, benchmark
// grids, bound verification, and per-item benchmark curves.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "binpack/errors.hpp"
#include "binpack/harness.hpp"
#include "binpack/oracle.hpp"
#include "binpack/policy_baselines.hpp"
#include "binpack/policy_lp_adaptive.hpp"
#include "binpack/policy_overflow.hpp"
#include "binpack/rng.hpp"
#include "binpack/theory_checks.hpp"

namespace {

using namespace binpack;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// --budget-ms maps to a node count at a fixed rate so budgeted runs stay
// bit-reproducible; no clock is consulted.
constexpr std::int64_t kNodesPerMs = 20'000;

ExactBudget budget_from_ms(std::int64_t budget_ms) {
  ExactBudget budget;
  if (budget_ms > 0) {
    const std::int64_t cap = std::numeric_limits<std::int64_t>::max() / kNodesPerMs;
    budget.node_limit = budget_ms >= cap ? std::numeric_limits<std::int64_t>::max()
                                         : budget_ms * kNodesPerMs;
  }
  return budget;
}

// Writes to --out when given, stdout otherwise.
struct Sink {
  std::ofstream file;
  std::ostream* os{&std::cout};
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw ParseError("cannot open \"" + path + "\" for writing");
      os = &file;
    }
  }
  std::ostream& out() { return *os; }
};

std::string base_label(const std::string& path) {
  std::string base = path;
  if (auto pos = base.find_last_of('/'); pos != std::string::npos) base = base.substr(pos + 1);
  if (auto pos = base.find_last_of('.'); pos != std::string::npos) base = base.substr(0, pos);
  return base.empty() ? path : base;
}

DistributionSpec resolve_distribution(const std::string& arg) {
  try {
    return builtin_distribution(arg);
  } catch (const ParseError&) {
    return load_distribution_file(arg);
  }
}

SourceSpec resolve_ground(const std::string& arg) {
  if (arg == "half-heavy" || arg == "three-atom") return builtin_ground_source(arg);
  GroundSet ground = make_ground_set(load_instance_file(arg));
  return fixed_ground_source(std::move(ground), base_label(arg));
}

SourceSpec resolve_source(const std::string& dist_arg, const std::string& ground_arg) {
  if (!dist_arg.empty() && !ground_arg.empty()) {
    throw ParseError("give either --dist or --ground-set, not both");
  }
  if (!dist_arg.empty()) return iid_source(resolve_distribution(dist_arg));
  if (!ground_arg.empty()) return resolve_ground(ground_arg);
  throw ParseError("need --dist or --ground-set");
}

void print_report(std::ostream& out, const CheckReport& report) {
  out << "check=" << report.name << " statistic=" << fixed6(report.statistic)
      << " bound=" << fixed6(report.bound) << " stderr=" << fixed6(report.std_error)
      << " trials=" << report.trials
      << " verdict=" << (report.violation ? "violation" : "ok");
  if (!report.detail.empty()) out << " detail=" << report.detail;
  out << '\n';
}

int run_oracle(const std::string& path, const std::string& mode, bool assign,
               std::int64_t budget_ms, const std::string& out_path) {
  Sink sink(out_path);
  const Instance inst = load_instance_file(path);
  if (mode == "fractional") {
    const FractionalPlan frac = solve_fractional(inst);
    sink.out() << "objective=" << fixed6(frac.value) << " converged=" << frac.converged
               << " configs=" << frac.configurations.size() << '\n';
    return 0;
  }
  IntegralPlan plan;
  if (mode == "exact") {
    plan = solve_exact(inst, budget_from_ms(budget_ms));
    sink.out() << "objective=" << plan.bins << " proven=" << plan.proven_optimal << '\n';
  } else if (mode == "ffd") {
    plan = solve_ffd(inst);
    sink.out() << "objective=" << plan.bins << '\n';
  } else {  // round
    const FractionalPlan frac = solve_fractional(inst);
    plan = round_plan(frac, inst);
    sink.out() << "objective=" << plan.bins << " fractional=" << fixed6(frac.value) << '\n';
  }
  if (assign) {
    for (std::size_t item = 0; item < plan.bin_of.size(); ++item) {
      sink.out() << item << " -> " << plan.bin_of[item] << '\n';
    }
  }
  return 0;
}

struct RunArgs {
  std::string policy;
  std::string dist;
  std::string ground;
  std::int64_t T{0};
  std::int64_t B{0};
  std::string oracle{"approx"};
  std::int64_t stop_at{0};
  std::string opt_ref{"none"};
  bool trace{false};
};

int run_single(const RunArgs& args, std::uint64_t seed, std::int64_t budget_ms,
               const std::string& out_path) {
  Sink sink(out_path);
  const PolicyKind kind = parse_policy(args.policy);
  std::string dist_arg = args.dist;
  if (kind == PolicyKind::LpAdaptive && args.B > 0 && dist_arg.empty() &&
      args.ground.empty()) {
    dist_arg = "uniform-int-" + std::to_string(args.B);
  }
  const SourceSpec source = resolve_source(dist_arg, args.ground);
  if (args.B > 0 && source.kind == SourceSpec::Kind::Iid &&
      source.dist.den() != args.B) {
    throw ParseError("--B " + std::to_string(args.B) + " conflicts with the distribution capacity " +
                     std::to_string(source.dist.den()));
  }
  const Instance arrivals = draw_arrivals(source, args.T, seed);
  const std::uint64_t policy_seed = mix_seed(seed, static_cast<std::uint64_t>(kind));
  const std::int64_t served =
      args.stop_at > 0 ? std::min(args.stop_at, args.T) : args.T;

  sink.out() << "run policy=" << policy_name(kind) << " dist=" << source.name
             << " T=" << args.T << " seed=" << seed;
  if (args.stop_at > 0) sink.out() << " stop_at=" << args.stop_at;

  std::int64_t bins = 0;
  if (kind == PolicyKind::Overflow) {
    OverflowOptions opts;
    opts.oracle = args.oracle == "exact" ? OracleMode::Exact : OracleMode::Approximate;
    opts.exact_budget = budget_from_ms(budget_ms);
    opts.stop_at = args.stop_at;
    sink.out() << " oracle=" << args.oracle << '\n';
    const OverflowRunResult res = run_overflow_policy(arrivals, args.T, opts, policy_seed);
    for (const PhaseTrace& ph : res.phases) {
      sink.out() << "phase k=" << ph.k << " range=[" << ph.t_begin << ',' << ph.t_end
                 << "] plan_bins=" << ph.plan_bins << " opened=" << ph.opened_plan_bins
                 << " overflow=" << ph.overflow_bins << " oracle=" << ph.oracle
                 << " value=" << fixed6(ph.oracle_value) << " proven=" << ph.oracle_proven
                 << '\n';
    }
    bins = res.bins;
  } else if (kind == PolicyKind::LpAdaptive) {
    sink.out() << '\n';
    LpAdaptiveOptions opts;
    opts.stop_at = args.stop_at;
    const LpAdaptiveRunResult res =
        run_lp_adaptive_policy(arrivals, args.T, policy_seed, opts);
    std::int64_t degenerate = 0;
    std::int64_t warm = 0;
    for (std::size_t i = 0; i < res.steps.size(); ++i) {
      const auto& st = res.steps[i];
      degenerate += st.degenerate ? 1 : 0;
      warm += st.warm ? 1 : 0;
      if (args.trace) {
        sink.out() << "step t=" << (i + 1) << " level=" << st.level
                   << " objective=" << fixed6(st.objective)
                   << " degenerate=" << st.degenerate << " warm=" << st.warm << '\n';
      }
    }
    sink.out() << "steps=" << res.steps.size() << " degenerate=" << degenerate
               << " warm=" << warm << '\n';
    bins = res.bins;
  } else {
    sink.out() << '\n';
    Instance prefix;
    prefix.den = arrivals.den;
    prefix.sizes.assign(arrivals.sizes.begin(), arrivals.sizes.begin() + served);
    BaselinePolicy base;
    switch (kind) {
      case PolicyKind::BestFit: base = BaselinePolicy::BestFit; break;
      case PolicyKind::FirstFit: base = BaselinePolicy::FirstFit; break;
      case PolicyKind::NextFit: base = BaselinePolicy::NextFit; break;
      default: base = BaselinePolicy::SumOfSquares; break;
    }
    bins = run_baseline_policy(prefix, base).bins;
  }

  sink.out() << "bins=" << bins << " stopped_at=" << served;
  if (args.opt_ref != "none") {
    Instance prefix;
    prefix.den = arrivals.den;
    prefix.sizes.assign(arrivals.sizes.begin(), arrivals.sizes.begin() + served);
    std::int64_t opt = 0;
    if (args.opt_ref == "exact") {
      opt = solve_exact(prefix, budget_from_ms(budget_ms)).bins;
    } else if (args.opt_ref == "fractional") {
      opt = static_cast<std::int64_t>(std::ceil(solve_fractional(prefix).value - 1e-6));
    } else {
      opt = volume_lower_bound(prefix);
    }
    sink.out() << " opt=" << opt << " regret=" << (bins - opt);
  }
  sink.out() << '\n';
  return 0;
}

struct BenchArgs {
  std::vector<std::string> policies;
  std::string dist;
  std::string ground;
  std::vector<std::int64_t> T_values;
  std::int64_t trials{1};
  std::string oracle{"approx"};
  std::string opt_ref{"exact"};
  std::int64_t stop_at{0};
  int workers{1};
  bool timing{false};
  std::string plot_by;
  std::string plot_out;
};

int run_bench_cmd(const BenchArgs& args, std::uint64_t seed, std::int64_t budget_ms,
                  const std::string& out_path) {
  ExperimentGrid grid;
  for (const std::string& p : args.policies) grid.policies.push_back(parse_policy(p));
  grid.source = resolve_source(args.dist, args.ground);
  grid.T_values = args.T_values;
  grid.trials = args.trials;
  grid.base_seed = seed;
  grid.oracle_mode = args.oracle == "exact" ? OracleMode::Exact : OracleMode::Approximate;
  if (args.opt_ref == "exact") {
    grid.opt_reference = OptReference::Exact;
  } else if (args.opt_ref == "fractional") {
    grid.opt_reference = OptReference::Fractional;
  } else {
    grid.opt_reference = OptReference::Volume;
  }
  grid.exact_budget = budget_from_ms(budget_ms);
  grid.stop_at = args.stop_at;
  grid.workers = args.workers;
  grid.timing = args.timing;

  const RunBenchResult result = run_bench(grid);
  for (const std::string& f : result.failures) std::cerr << "failure: " << f << '\n';

  {
    Sink sink(out_path);
    write_csv(result.records, sink.out());
  }
  if (!args.plot_by.empty()) {
    Sink plot_sink(args.plot_out);
    emit_plot_data(result.records,
                   args.plot_by == "dist" ? GroupBy::Dist : GroupBy::T, plot_sink.out());
  }
  if (!result.failures.empty()) {
    std::cerr << result.failures.size() << " of "
              << grid.T_values.size() * static_cast<std::size_t>(grid.trials) *
                     grid.policies.size()
              << " cells failed\n";
  }
  return 0;
}

struct VerifyArgs {
  std::string check;
  long trials{1000};
  std::int64_t N{200};
  std::vector<std::int64_t> T_values;
  int k{1};
  std::string dist;
  std::string ground;
};

// Proposition 1 sandwich on random instances: OPT_f <= OPT and
// OPT <= OPT_f + 4 log2^2 n + 17 log2 n + 11.
CheckReport check_prop1(long trials, std::uint64_t seed, const ExactBudget& budget) {
  CheckReport report;
  report.name = "prop1";
  report.trials = trials;
  report.bound = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  std::int64_t worst_n = 0;
  bool left_ok = true;
  const DistributionSpec discrete = builtin_distribution("uniform-int-12");
  const DistributionSpec uniform = make_uniform();
  for (long i = 0; i < trials; ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    const bool use_discrete = (i % 2) == 0;
    const std::int64_t n =
        2 + static_cast<std::int64_t>(rng.bounded(use_discrete ? 39 : 23));
    const Instance inst = sample_iid(use_discrete ? discrete : uniform, n,
                                     mix_seed(seed, static_cast<std::uint64_t>(i), 1));
    const IntegralPlan exact = solve_exact(inst, budget);
    if (!exact.proven_optimal) continue;
    const double opt_f = solve_fractional(inst).value;
    if (opt_f > static_cast<double>(exact.bins) + 1e-6) left_ok = false;
    const double lg = std::log2(static_cast<double>(n));
    const double slack = 4.0 * lg * lg + 17.0 * lg + 11.0;
    const double gap = static_cast<double>(exact.bins) - opt_f - slack;
    if (gap > worst) {
      worst = gap;
      worst_n = n;
    }
  }
  report.statistic = worst;
  report.violation = worst > 1e-6 || !left_ok;
  std::ostringstream detail;
  detail << "max(OPT-OPT_f-slack)@n=" << worst_n << " left=" << (left_ok ? "ok" : "violated");
  report.detail = detail.str();
  return report;
}

int run_verify(const VerifyArgs& args, std::uint64_t seed, std::int64_t budget_ms,
               const std::string& out_path) {
  Sink sink(out_path);
  const ExactBudget budget = budget_from_ms(budget_ms);
  if (args.check == "prop2") {
    print_report(sink.out(), verify_prop2(args.N, args.trials, seed));
    return 0;
  }
  if (args.check == "prop3") {
    const std::int64_t T = args.T_values.empty() ? 64 : args.T_values.front();
    const DistributionSpec F =
        resolve_distribution(args.dist.empty() ? "bounded-waste" : args.dist);
    print_report(sink.out(), verify_prop3(F, T, args.trials, seed));
    return 0;
  }
  if (args.check == "prop6") {
    const std::int64_t T = args.T_values.empty() ? 16 : args.T_values.front();
    const SourceSpec source = resolve_ground(args.ground.empty() ? "half-heavy" : args.ground);
    print_report(sink.out(), verify_prop6(source.ground(T), args.k, args.trials, seed));
    return 0;
  }
  if (args.check == "prop1") {
    print_report(sink.out(), check_prop1(args.trials, seed, budget));
    return 0;
  }
  if (args.check == "ce") {
    std::vector<std::int64_t> grid = args.T_values;
    if (grid.empty()) grid = {16, 64, 256, 1024, 4096};
    const DistributionSpec F =
        resolve_distribution(args.dist.empty() ? "two-point" : args.dist);
    const std::vector<CePoint> points = estimate_ce(F, grid);
    for (const CePoint& p : points) {
      sink.out() << "check=ce T=" << p.T << " ratio=" << fixed6(p.ratio)
                 << " opt_f=" << fixed6(p.opt_f) << " converged=" << p.converged << '\n';
    }
    // closed-form sanity: the two-point instance at even T packs to
    // T/2 + 1/2 fractional bins, ratio 1/2 + 1/(2T)
    std::int64_t sanity_T = 0;
    for (std::int64_t t : grid) {
      if (t % 2 == 0) sanity_T = std::max(sanity_T, t);
    }
    if (sanity_T > 0) {
      const DistributionSpec tp = builtin_distribution("two-point");
      const CePoint p = estimate_ce(tp, {sanity_T}).front();
      const double closed = 0.5 + 0.5 / static_cast<double>(sanity_T);
      CheckReport report;
      report.name = "ce";
      report.statistic = p.ratio;
      report.bound = closed;
      report.trials = static_cast<long>(grid.size());
      report.violation = std::abs(p.ratio - closed) > 1e-6;
      report.detail = "two-point-sanity@T=" + std::to_string(sanity_T);
      print_report(sink.out(), report);
    }
    return 0;
  }
  throw ParseError("unknown check \"" + args.check + "\"");
}

int run_ce(const std::string& dist_arg, std::vector<std::int64_t> grid,
           const std::string& out_path) {
  Sink sink(out_path);
  if (grid.empty()) grid = {16, 64, 256, 1024, 4096};
  const DistributionSpec F = resolve_distribution(dist_arg.empty() ? "two-point" : dist_arg);
  const std::vector<CePoint> points = estimate_ce(F, grid);
  for (const CePoint& p : points) {
    sink.out() << "T=" << p.T << " opt_f=" << fixed6(p.opt_f) << " ratio=" << fixed6(p.ratio)
               << " converged=" << p.converged << '\n';
  }
  std::int64_t sanity_T = 0;
  for (std::int64_t t : grid) {
    if (t % 2 == 0) sanity_T = std::max(sanity_T, t);
  }
  if (sanity_T > 0) {
    const CePoint p = estimate_ce(builtin_distribution("two-point"), {sanity_T}).front();
    sink.out() << "two-point sanity: T=" << sanity_T << " ratio=" << fixed6(p.ratio)
               << " closed_form=" << fixed6(0.5 + 0.5 / static_cast<double>(sanity_T)) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bin-packing experiments: offline oracles, online policies, bound checks"};
  app.require_subcommand(1);
  app.set_config("--config", "", "config file mirroring the flags (flags win)");

  std::uint64_t seed = 1;
  std::string out_path;
  std::int64_t budget_ms = 0;
  app.add_option("--seed", seed, "base seed (bench derives per-trial seeds from it)");
  app.add_option("--out", out_path, "write the primary output to this file");
  app.add_option("--budget-ms", budget_ms,
                 "exact-oracle budget, converted to a fixed node count (deterministic)");

  // oracle
  std::string oracle_instance;
  std::string oracle_mode = "exact";
  bool oracle_assign = false;
  auto* oracle_cmd = app.add_subcommand("oracle", "solve an instance file offline");
  oracle_cmd->fallthrough();
  oracle_cmd->add_option("instance", oracle_instance, "instance file")->required();
  oracle_cmd->add_option("--mode", oracle_mode, "exact|fractional|ffd|round")
      ->check(CLI::IsMember({"exact", "fractional", "ffd", "round"}));
  oracle_cmd->add_flag("--assign", oracle_assign, "print item -> bin lines");

  // run
  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "one seeded policy run with trace");
  run_cmd->fallthrough();
  run_cmd->add_option("--policy", run_args.policy, "policy name")->required();
  run_cmd->add_option("--T", run_args.T, "horizon")->required()->check(CLI::PositiveNumber);
  run_cmd->add_option("--dist", run_args.dist, "builtin name or distribution file");
  run_cmd->add_option("--ground-set", run_args.ground,
                      "half-heavy, three-atom, or an instance file");
  run_cmd->add_option("--B", run_args.B, "integer capacity (lp-adaptive shorthand)");
  run_cmd->add_option("--oracle", run_args.oracle, "overflow phase oracle")
      ->check(CLI::IsMember({"exact", "approx"}));
  run_cmd->add_option("--stop-at", run_args.stop_at, "serve only the first t arrivals");
  run_cmd->add_option("--opt-ref", run_args.opt_ref, "also report regret against this bound")
      ->check(CLI::IsMember({"none", "exact", "fractional", "volume"}));
  run_cmd->add_flag("--trace", run_args.trace, "per-step detail (lp-adaptive)");

  // bench
  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "seeded experiment grid, CSV out");
  bench_cmd->fallthrough();
  bench_cmd->add_option("--policies", bench_args.policies, "comma-separated policy names")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--T", bench_args.T_values, "comma-separated horizons, ascending")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--dist", bench_args.dist, "builtin name or distribution file");
  bench_cmd->add_option("--ground-set", bench_args.ground,
                        "half-heavy, three-atom, or an instance file");
  bench_cmd->add_option("--trials", bench_args.trials, "trials per horizon")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--oracle", bench_args.oracle, "overflow phase oracle")
      ->check(CLI::IsMember({"exact", "approx"}));
  bench_cmd->add_option("--opt-ref", bench_args.opt_ref, "regret reference")
      ->check(CLI::IsMember({"exact", "fractional", "volume"}));
  bench_cmd->add_option("--stop-at", bench_args.stop_at, "serve only the first t arrivals");
  bench_cmd->add_option("--workers", bench_args.workers, "worker threads")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--timing", bench_args.timing,
                      "record wall-clock runtime_ms (breaks byte-stable CSV)");
  bench_cmd->add_option("--plot-by", bench_args.plot_by, "emit plot data grouped by T or dist")
      ->check(CLI::IsMember({"T", "dist"}));
  bench_cmd->add_option("--plot-out", bench_args.plot_out, "plot data file (default stdout)");

  // verify
  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Monte-Carlo bound checks");
  verify_cmd->fallthrough();
  verify_cmd->add_option("--check", verify_args.check, "prop2|prop3|prop6|prop1|ce")
      ->required()
      ->check(CLI::IsMember({"prop2", "prop3", "prop6", "prop1", "ce"}));
  verify_cmd->add_option("--trials", verify_args.trials, "Monte-Carlo trials")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--N", verify_args.N, "queue half-length (prop2)")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--T", verify_args.T_values, "horizon (prop3/prop6) or grid (ce)")
      ->delimiter(',');
  verify_cmd->add_option("--k", verify_args.k, "prefix exponent (prop6)");
  verify_cmd->add_option("--dist", verify_args.dist, "distribution (prop3, ce)");
  verify_cmd->add_option("--ground-set", verify_args.ground, "ground set (prop6)");

  // ce
  std::string ce_dist;
  std::vector<std::int64_t> ce_grid;
  auto* ce_cmd = app.add_subcommand("ce", "per-item benchmark curve over a horizon grid");
  ce_cmd->fallthrough();
  ce_cmd->add_option("--dist", ce_dist, "builtin name or distribution file");
  ce_cmd->add_option("--T", ce_grid, "comma-separated horizons, ascending")->delimiter(',');

  try {
    app.parse(argc, argv);
    if (oracle_cmd->parsed()) {
      return run_oracle(oracle_instance, oracle_mode, oracle_assign, budget_ms, out_path);
    }
    if (run_cmd->parsed()) return run_single(run_args, seed, budget_ms, out_path);
    if (bench_cmd->parsed()) return run_bench_cmd(bench_args, seed, budget_ms, out_path);
    if (verify_cmd->parsed()) return run_verify(verify_args, seed, budget_ms, out_path);
    if (ce_cmd->parsed()) return run_ce(ce_dist, ce_grid, out_path);
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
