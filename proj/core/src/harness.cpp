#include "binpack/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "binpack/errors.hpp"
#include "binpack/policy_baselines.hpp"
#include "binpack/policy_lp_adaptive.hpp"
#include "binpack/rng.hpp"

namespace binpack {
namespace {

constexpr PolicyKind kAllPolicies[] = {
    PolicyKind::Overflow,  PolicyKind::LpAdaptive, PolicyKind::BestFit,
    PolicyKind::FirstFit, PolicyKind::NextFit,    PolicyKind::SumOfSquares,
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void check_csv_field(const std::string& s) {
  if (s.find(',') != std::string::npos || s.find('\n') != std::string::npos) {
    throw ParseError("CSV field contains a separator: \"" + s + "\"");
  }
}

std::int64_t parse_int_token(const std::string& tok, const char* what) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " in CSV: \"" + tok + "\"");
  }
}

std::uint64_t parse_u64_token(const std::string& tok, const char* what) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " in CSV: \"" + tok + "\"");
  }
}

double parse_double_token(const std::string& tok, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " in CSV: \"" + tok + "\"");
  }
}

constexpr const char* kCsvHeader = "policy,dist,T,trial,seed,bins,opt,opt_f,regret,runtime_ms";

struct MeanStderr {
  double mean{0.0};
  double stderr_{0.0};
  std::size_t n{0};
};

MeanStderr summarize(const std::vector<double>& xs) {
  MeanStderr out;
  out.n = xs.size();
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    const double var = ss / static_cast<double>(xs.size() - 1);
    out.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
  }
  return out;
}

}  // namespace

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Overflow: return "overflow";
    case PolicyKind::LpAdaptive: return "lp-adaptive";
    case PolicyKind::BestFit: return "best-fit";
    case PolicyKind::FirstFit: return "first-fit";
    case PolicyKind::NextFit: return "next-fit";
    case PolicyKind::SumOfSquares: return "sum-of-squares";
  }
  throw BadIndex("unknown policy id " + std::to_string(static_cast<int>(kind)));
}

PolicyKind parse_policy(const std::string& name) {
  for (PolicyKind kind : kAllPolicies) {
    if (name == policy_name(kind)) return kind;
  }
  throw ParseError("unknown policy \"" + name +
                   "\" (expected overflow, lp-adaptive, best-fit, first-fit, "
                   "next-fit or sum-of-squares)");
}

SourceSpec iid_source(DistributionSpec dist) {
  SourceSpec source;
  source.kind = SourceSpec::Kind::Iid;
  source.name = dist.name;
  source.dist = std::move(dist);
  return source;
}

SourceSpec fixed_ground_source(GroundSet ground, std::string name) {
  SourceSpec source;
  source.kind = SourceSpec::Kind::Permutation;
  source.name = std::move(name);
  const std::int64_t population = static_cast<std::int64_t>(ground.items.sizes.size());
  source.ground = [ground = std::move(ground), population](std::int64_t T) {
    if (T != population) {
      throw HorizonMismatch("fixed ground set has " + std::to_string(population) +
                            " items but T = " + std::to_string(T));
    }
    return ground;
  };
  return source;
}

SourceSpec builtin_ground_source(const std::string& name) {
  SourceSpec source;
  source.kind = SourceSpec::Kind::Permutation;
  source.name = name;
  if (name == "half-heavy") {
    source.ground = [](std::int64_t T) {
      Instance items;
      items.den = kContinuousDen;
      const std::int64_t heavy = (T + 1) / 2;
      const std::int64_t a = 6 * (kContinuousDen / 10);
      const std::int64_t b = 4 * (kContinuousDen / 10);
      for (std::int64_t i = 0; i < T; ++i) items.sizes.push_back({i < heavy ? a : b});
      return make_ground_set(std::move(items));
    };
  } else if (name == "three-atom") {
    source.ground = [](std::int64_t T) {
      Instance items;
      items.den = 12;
      const std::int64_t atoms[3] = {7, 5, 4};
      for (int i = 0; i < 3; ++i) {
        const std::int64_t count = T / 3 + (i < T % 3 ? 1 : 0);
        for (std::int64_t c = 0; c < count; ++c) items.sizes.push_back({atoms[i]});
      }
      return make_ground_set(std::move(items));
    };
  } else {
    throw ParseError("unknown ground set \"" + name +
                     "\" (expected half-heavy or three-atom)");
  }
  return source;
}

DistributionSpec builtin_distribution(const std::string& name) {
  if (name == "bounded-waste") {
    return make_discrete(9, {2, 3}, {{35, 48}, {13, 48}}, name);
  }
  if (name == "perfectly-packable") {
    return make_discrete(10, {1, 3, 4, 5, 8}, {{1, 4}, {1, 4}, {1, 8}, {1, 4}, {1, 8}},
                         name);
  }
  if (name == "linear-waste") {
    return make_discrete(10, {3, 4, 5, 8}, {{1, 4}, {1, 4}, {1, 4}, {1, 4}}, name);
  }
  if (name == "uniform") return make_uniform();
  if (name == "two-point") return make_two_point({1, 10});
  const std::string prefix = "uniform-int-";
  if (name.rfind(prefix, 0) == 0) {
    const std::string rest = name.substr(prefix.size());
    const std::size_t dash = rest.find('-');
    const std::int64_t B = parse_int_token(rest.substr(0, dash), "capacity");
    std::int64_t J = B - 1;
    if (dash != std::string::npos) {
      J = parse_int_token(rest.substr(dash + 1), "category count");
    }
    if (B < 2 || J < 1 || J > B - 1) {
      throw ParseError("uniform-int needs capacity >= 2 and 1 <= categories <= capacity-1");
    }
    std::vector<std::int64_t> values;
    for (std::int64_t i = 1; i <= J; ++i) values.push_back(i * (B - 1) / J);
    std::vector<Rational> probs(values.size(), Rational{1, J});
    return make_discrete(B, std::move(values), std::move(probs), name);
  }
  throw ParseError("unknown distribution \"" + name + "\"");
}

Instance draw_arrivals(const SourceSpec& source, std::int64_t T, std::uint64_t seed) {
  if (source.kind == SourceSpec::Kind::Iid) return sample_iid(source.dist, T, seed);
  if (!source.ground) throw ParseError("permutation source has no ground set");
  return sample_permutation(source.ground(T), seed);
}

namespace {

struct CellOpt {
  std::int64_t opt{0};
  double opt_f{0.0};
  bool proven{false};  // exact reference only: regret >= 0 is then asserted
};

CellOpt reference_opt(const Instance& prefix, const ExperimentGrid& grid) {
  CellOpt out;
  switch (grid.opt_reference) {
    case OptReference::Exact: {
      const IntegralPlan plan = solve_exact(prefix, grid.exact_budget);
      out.opt = plan.bins;
      out.proven = plan.proven_optimal;
      out.opt_f = solve_fractional(prefix, grid.fractional).value;
      break;
    }
    case OptReference::Fractional: {
      const FractionalPlan frac = solve_fractional(prefix, grid.fractional);
      out.opt_f = frac.value;
      out.opt = static_cast<std::int64_t>(std::ceil(frac.value - 1e-6));
      break;
    }
    case OptReference::Volume: {
      out.opt = volume_lower_bound(prefix);
      out.opt_f = static_cast<double>(prefix.total_value()) /
                  static_cast<double>(prefix.den);
      break;
    }
  }
  return out;
}

std::int64_t run_policy_bins(PolicyKind kind, const Instance& arrivals,
                             const Instance& prefix, std::int64_t T,
                             std::uint64_t policy_seed, const ExperimentGrid& grid) {
  switch (kind) {
    case PolicyKind::Overflow: {
      OverflowOptions opts;
      opts.oracle = grid.oracle_mode;
      opts.exact_budget = grid.exact_budget;
      opts.fractional = grid.fractional;
      opts.stop_at = grid.stop_at;
      return run_overflow_policy(arrivals, T, opts, policy_seed).bins;
    }
    case PolicyKind::LpAdaptive: {
      if (arrivals.den > 512) {
        throw ParseError("lp-adaptive needs the integer-size regime (den <= 512), got den " +
                         std::to_string(arrivals.den));
      }
      LpAdaptiveOptions opts;
      opts.stop_at = grid.stop_at;
      return run_lp_adaptive_policy(arrivals, T, policy_seed, opts).bins;
    }
    case PolicyKind::BestFit:
      return run_baseline_policy(prefix, BaselinePolicy::BestFit).bins;
    case PolicyKind::FirstFit:
      return run_baseline_policy(prefix, BaselinePolicy::FirstFit).bins;
    case PolicyKind::NextFit:
      return run_baseline_policy(prefix, BaselinePolicy::NextFit).bins;
    case PolicyKind::SumOfSquares:
      return run_baseline_policy(prefix, BaselinePolicy::SumOfSquares).bins;
  }
  throw BadIndex("unknown policy id " + std::to_string(static_cast<int>(kind)));
}

}  // namespace

RunBenchResult run_bench(const ExperimentGrid& grid) {
  if (grid.policies.empty()) throw ParseError("grid has no policies");
  if (grid.trials < 1) throw ParseError("grid needs trials >= 1");
  if (grid.T_values.empty()) throw ParseError("grid has no horizons");
  if (!std::is_sorted(grid.T_values.begin(), grid.T_values.end())) {
    throw ParseError("grid horizons must be ascending");
  }

  struct Cell {
    std::int64_t T;
    std::int64_t trial;
  };
  std::vector<Cell> cells;
  for (std::int64_t T : grid.T_values) {
    for (std::int64_t trial = 0; trial < grid.trials; ++trial) cells.push_back({T, trial});
  }
  const std::size_t width = grid.policies.size();
  std::vector<TrialRecord> slots(cells.size() * width);
  std::vector<char> filled(slots.size(), 0);
  std::vector<std::string> failures;
  std::mutex failures_mutex;
  std::atomic<std::size_t> next{0};

  auto process = [&](std::size_t ci) {
    const Cell cell = cells[ci];
    const std::uint64_t arrival_seed =
        mix_seed(grid.base_seed, static_cast<std::uint64_t>(cell.T),
                 static_cast<std::uint64_t>(cell.trial));
    Instance arrivals;
    Instance prefix;
    CellOpt ref;
    try {
      arrivals = draw_arrivals(grid.source, cell.T, arrival_seed);
      const std::int64_t served =
          grid.stop_at > 0 ? std::min(grid.stop_at, cell.T) : cell.T;
      prefix.den = arrivals.den;
      prefix.sizes.assign(arrivals.sizes.begin(), arrivals.sizes.begin() + served);
      ref = reference_opt(prefix, grid);
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(failures_mutex);
      failures.push_back("dist=" + grid.source.name + " T=" + std::to_string(cell.T) +
                         " trial=" + std::to_string(cell.trial) + ": " + e.what());
      return;
    }
    for (std::size_t pi = 0; pi < width; ++pi) {
      const PolicyKind kind = grid.policies[pi];
      const std::uint64_t policy_seed =
          mix_seed(arrival_seed, static_cast<std::uint64_t>(kind));
      TrialRecord rec;
      rec.policy = policy_name(kind);
      rec.dist = grid.source.name;
      rec.T = cell.T;
      rec.trial = cell.trial;
      rec.seed = arrival_seed;
      rec.opt = ref.opt;
      rec.opt_f = ref.opt_f;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        rec.bins = run_policy_bins(kind, arrivals, prefix, cell.T, policy_seed, grid);
        if (grid.timing) {
          const auto t1 = std::chrono::steady_clock::now();
          rec.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failures_mutex);
        failures.push_back(std::string("policy=") + policy_name(kind) +
                           " dist=" + grid.source.name + " T=" + std::to_string(cell.T) +
                           " trial=" + std::to_string(cell.trial) + ": " + e.what());
        continue;
      }
      rec.regret = rec.bins - rec.opt;
      if (ref.proven && rec.regret < 0) {
        std::lock_guard<std::mutex> lock(failures_mutex);
        failures.push_back(std::string("policy=") + policy_name(kind) +
                           " dist=" + grid.source.name + " T=" + std::to_string(cell.T) +
                           " trial=" + std::to_string(cell.trial) +
                           ": online beat proven OPT, packing bug");
        continue;
      }
      slots[ci * width + pi] = std::move(rec);
      filled[ci * width + pi] = 1;
    }
  };

  auto worker = [&] {
    for (;;) {
      const std::size_t ci = next.fetch_add(1);
      if (ci >= cells.size()) return;
      process(ci);
    }
  };

  const int workers = std::max(1, grid.workers);
  if (workers == 1 || cells.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(workers), cells.size()));
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  RunBenchResult result;
  result.records.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (filled[i]) result.records.push_back(std::move(slots[i]));
  }
  result.failures = std::move(failures);
  return result;
}

void write_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const TrialRecord& r : records) {
    check_csv_field(r.policy);
    check_csv_field(r.dist);
    out << r.policy << ',' << r.dist << ',' << r.T << ',' << r.trial << ',' << r.seed
        << ',' << r.bins << ',' << r.opt << ',' << fixed6(r.opt_f) << ',' << r.regret
        << ',' << fixed6(r.runtime_ms) << '\n';
  }
}

void write_csv_file(const std::vector<TrialRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open \"" + path + "\" for writing");
  write_csv(records, out);
  out.flush();
  if (!out) throw ParseError("write failed for \"" + path + "\"");
}

std::vector<TrialRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ParseError("unexpected CSV header: \"" + line + "\"");
  std::vector<TrialRecord> records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 10) {
      throw ParseError("CSV row has " + std::to_string(fields.size()) +
                       " fields, expected 10: \"" + line + "\"");
    }
    TrialRecord r;
    r.policy = fields[0];
    r.dist = fields[1];
    r.T = parse_int_token(fields[2], "T");
    r.trial = parse_int_token(fields[3], "trial");
    r.seed = parse_u64_token(fields[4], "seed");
    r.bins = parse_int_token(fields[5], "bins");
    r.opt = parse_int_token(fields[6], "opt");
    r.opt_f = parse_double_token(fields[7], "opt_f");
    r.regret = parse_int_token(fields[8], "regret");
    r.runtime_ms = parse_double_token(fields[9], "runtime_ms");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<TrialRecord> read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open \"" + path + "\"");
  return read_csv(in);
}

void emit_plot_data(const std::vector<TrialRecord>& records, GroupBy group_by,
                    std::ostream& out) {
  // key: (x label, policy) -> regrets.  T keys print numerically but sort
  // correctly via zero-padding-free numeric map on int64.
  if (group_by == GroupBy::T) {
    std::map<std::pair<std::int64_t, std::string>, std::vector<double>> groups;
    for (const TrialRecord& r : records) {
      groups[{r.T, r.policy}].push_back(static_cast<double>(r.regret));
    }
    out << "# x policy mean stderr n\n";
    for (const auto& [key, xs] : groups) {
      const MeanStderr s = summarize(xs);
      out << key.first << ' ' << key.second << ' ' << fixed6(s.mean) << ' '
          << fixed6(s.stderr_) << ' ' << s.n << '\n';
    }
  } else {
    std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
    for (const TrialRecord& r : records) {
      groups[{r.dist, r.policy}].push_back(static_cast<double>(r.regret));
    }
    out << "# x policy mean stderr n\n";
    for (const auto& [key, xs] : groups) {
      const MeanStderr s = summarize(xs);
      out << key.first << ' ' << key.second << ' ' << fixed6(s.mean) << ' '
          << fixed6(s.stderr_) << ' ' << s.n << '\n';
    }
  }
}

}  // namespace binpack
