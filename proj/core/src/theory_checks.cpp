#include "binpack/theory_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "binpack/errors.hpp"

namespace binpack {

TokenSequence make_sign_permutation(std::int64_t N, Rng& rng) {
  TokenSequence seq;
  seq.kind = TokenKind::SignPermutation;
  seq.tokens.assign(static_cast<std::size_t>(2 * N), -1);
  for (std::int64_t i = 0; i < N; ++i) seq.tokens[static_cast<std::size_t>(i)] = 1;
  // Fisher-Yates
  for (std::size_t i = seq.tokens.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.bounded(i));
    std::swap(seq.tokens[i - 1], seq.tokens[j]);
  }
  return seq;
}

TokenSequence make_multinomial_increments(std::int64_t T, Rng& rng) {
  TokenSequence seq;
  seq.kind = TokenKind::MultinomialIncrements;
  seq.tokens.assign(static_cast<std::size_t>(T), -1);
  for (std::int64_t i = 0; i < T; ++i) {
    seq.tokens[static_cast<std::size_t>(rng.bounded(static_cast<std::uint64_t>(T)))] += 1;
  }
  return seq;
}

TokenSequence make_hypergeometric_increments(std::int64_t tau, int k, Rng& rng) {
  TokenSequence seq;
  seq.kind = TokenKind::HypergeometricIncrements;
  seq.tokens.assign(static_cast<std::size_t>(tau), -1);
  const std::int64_t total = tau << k;
  std::vector<std::int64_t> positions(static_cast<std::size_t>(total));
  std::iota(positions.begin(), positions.end(), 0);
  for (std::int64_t i = 0; i < tau; ++i) {
    const std::int64_t j =
        i + static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(total - i)));
    std::swap(positions[static_cast<std::size_t>(i)], positions[static_cast<std::size_t>(j)]);
    seq.tokens[static_cast<std::size_t>(positions[static_cast<std::size_t>(i)] >> k)] += 1;
  }
  return seq;
}

LindleyResult lindley_queue(const std::vector<std::int64_t>& tokens) {
  LindleyResult res;
  res.trajectory.reserve(tokens.size() + 1);
  res.trajectory.push_back(0);
  std::int64_t q = 0;
  std::int64_t prefix = 0;
  std::int64_t max_neg = tokens.empty() ? 0 : std::numeric_limits<std::int64_t>::min();
  for (const std::int64_t xi : tokens) {
    q = std::max<std::int64_t>(0, q + xi);
    res.trajectory.push_back(q);
    prefix += xi;
    max_neg = std::max(max_neg, -prefix);
  }
  res.final_q = q;
  res.max_neg_prefix = tokens.empty() ? 0 : max_neg;
  if (prefix == 0 && res.final_q != res.max_neg_prefix) {
    throw Error("queue identity violated: final " + std::to_string(res.final_q) +
                " vs max negative prefix " + std::to_string(res.max_neg_prefix));
  }
  return res;
}

std::vector<std::int64_t> overflow_phase_tokens(const std::vector<std::int64_t>& history_sizes,
                                                const std::vector<std::int64_t>& online_sizes) {
  // (size, tag): tag 0 = online (+1), tag 1 = history slot (-1); sorting the
  // pairs realizes "ascending by size, +1 first on ties"
  std::vector<std::pair<std::int64_t, int>> events;
  events.reserve(history_sizes.size() + online_sizes.size());
  for (const std::int64_t s : online_sizes) events.emplace_back(s, 0);
  for (const std::int64_t s : history_sizes) events.emplace_back(s, 1);
  std::sort(events.begin(), events.end());
  std::vector<std::int64_t> tokens;
  tokens.reserve(events.size());
  for (const auto& [s, tag] : events) tokens.push_back(tag == 0 ? 1 : -1);
  return tokens;
}

namespace {

struct MonteCarlo {
  double mean{0.0};
  double std_error{0.0};
};

MonteCarlo summarize(const std::vector<double>& values) {
  MonteCarlo mc;
  if (values.empty()) return mc;
  const double n = static_cast<double>(values.size());
  for (const double v : values) mc.mean += v;
  mc.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - mc.mean) * (v - mc.mean);
    mc.std_error = std::sqrt(ss / (n - 1)) / std::sqrt(n);
  }
  return mc;
}

std::int64_t exact_opt_or_throw(const Instance& inst) {
  const IntegralPlan plan = solve_exact(inst);
  if (!plan.proven_optimal) {
    throw BudgetExceeded("exact oracle did not certify an instance of " +
                         std::to_string(inst.sizes.size()) + " items");
  }
  return plan.bins;
}

}  // namespace

CheckReport verify_prop2(std::int64_t N, long trials, std::uint64_t seed) {
  CheckReport report;
  report.name = "prop2";
  report.trials = trials;
  report.bound = 2.0 * std::sqrt(2.0 * static_cast<double>(N));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(trials));
  for (long t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    const TokenSequence seq = make_sign_permutation(N, rng);
    values.push_back(static_cast<double>(lindley_queue(seq.tokens).final_q));
  }
  const MonteCarlo mc = summarize(values);
  report.statistic = mc.mean;
  report.std_error = mc.std_error;
  report.violation = mc.mean > report.bound;
  report.detail = "N=" + std::to_string(N);
  return report;
}

CheckReport verify_prop3(const DistributionSpec& F, std::int64_t T, long trials,
                         std::uint64_t seed) {
  CheckReport report;
  report.name = "prop3";
  report.trials = trials;
  const Instance quant = quantile_instance(F, T, /*shifted=*/true);
  const std::int64_t opt_quant = exact_opt_or_throw(quant);
  report.bound = static_cast<double>(opt_quant) + 2.0 * std::sqrt(static_cast<double>(T));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(trials));
  for (long t = 0; t < trials; ++t) {
    const Instance sample = sample_iid(F, T, mix_seed(seed, static_cast<std::uint64_t>(t)));
    values.push_back(static_cast<double>(exact_opt_or_throw(sample)));
  }
  const MonteCarlo mc = summarize(values);
  report.statistic = mc.mean;
  report.std_error = mc.std_error;
  report.violation = mc.mean > report.bound + 3.0 * mc.std_error;
  report.detail = "T=" + std::to_string(T) + " quantile OPT=" + std::to_string(opt_quant);
  return report;
}

CheckReport verify_prop6(const GroundSet& ground, int k, long trials, std::uint64_t seed) {
  CheckReport report;
  report.name = "prop6";
  report.trials = trials;
  const std::int64_t T = static_cast<std::int64_t>(ground.items.sizes.size());
  const std::int64_t pow = std::int64_t{1} << k;
  const std::int64_t tau = (T + pow - 1) / pow;
  const std::int64_t opt_full = exact_opt_or_throw(ground.items);
  const double log_tau = tau > 1 ? std::log2(static_cast<double>(tau)) : 0.0;
  report.bound = static_cast<double>(opt_full) / static_cast<double>(pow) +
                 2.0 * std::sqrt(static_cast<double>(tau)) + 4.0 * log_tau * log_tau +
                 17.0 * log_tau + 13.0;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(trials));
  for (long t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    // first tau entries of a partial Fisher-Yates pass = sampling without
    // replacement
    std::vector<Size> pool = ground.items.sizes;
    Instance sample;
    sample.den = ground.items.den;
    for (std::int64_t i = 0; i < tau && i < T; ++i) {
      const std::size_t j = static_cast<std::size_t>(i) +
                            static_cast<std::size_t>(rng.bounded(static_cast<std::uint64_t>(T - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
      sample.sizes.push_back(pool[static_cast<std::size_t>(i)]);
    }
    values.push_back(static_cast<double>(exact_opt_or_throw(sample)));
  }
  const MonteCarlo mc = summarize(values);
  report.statistic = mc.mean;
  report.std_error = mc.std_error;
  report.violation = mc.mean > report.bound + 3.0 * mc.std_error;
  report.detail = "T=" + std::to_string(T) + " k=" + std::to_string(k) +
                  " tau=" + std::to_string(tau) + " OPT(ground)=" + std::to_string(opt_full);
  return report;
}

std::vector<CePoint> estimate_ce(const DistributionSpec& F, const std::vector<std::int64_t>& T_grid,
                                 const FractionalOptions& options) {
  std::vector<CePoint> points;
  points.reserve(T_grid.size());
  for (const std::int64_t T : T_grid) {
    const Instance quant = quantile_instance(F, T, /*shifted=*/true);
    const FractionalPlan frac = solve_fractional(quant, options);
    CePoint p;
    p.T = T;
    p.opt_f = frac.value;
    p.ratio = frac.value / static_cast<double>(T);
    p.converged = frac.converged;
    points.push_back(p);
  }
  return points;
}

double rademacher_diagnostic(const TokenSequence& seq, long trials, std::uint64_t seed) {
  if (trials <= 0) return 0.0;
  double acc = 0.0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    std::int64_t sum = 0;
    std::uint64_t bits = 0;
    int left = 0;
    for (const std::int64_t xi : seq.tokens) {
      if (left == 0) {
        bits = rng.next_u64();
        left = 64;
      }
      sum += (bits & 1) ? xi : -xi;
      bits >>= 1;
      --left;
    }
    acc += static_cast<double>(std::abs(sum));
  }
  return 2.0 * acc / static_cast<double>(trials);
}

}  // namespace binpack
