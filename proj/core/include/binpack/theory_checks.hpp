#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binpack/distribution.hpp"
#include "binpack/oracle.hpp"
#include "binpack/rng.hpp"

namespace binpack {

enum class TokenKind { SignPermutation, MultinomialIncrements, HypergeometricIncrements };

// One exchangeable +/- increment string driving the queue bounds.
struct TokenSequence {
  TokenKind kind{TokenKind::SignPermutation};
  std::vector<std::int64_t> tokens;
};

// Uniformly random arrangement of N entries +1 and N entries -1.
TokenSequence make_sign_permutation(std::int64_t N, Rng& rng);

// psi_t - 1 with (psi_1..psi_T) ~ Multinomial(T, uniform); sums to zero.
TokenSequence make_multinomial_increments(std::int64_t T, Rng& rng);

// eta_i - 1 with eta counting, per block of 2^k consecutive ground-set
// positions, how many of tau draws without replacement from 2^k * tau
// positions landed there; sums to zero.
TokenSequence make_hypergeometric_increments(std::int64_t tau, int k, Rng& rng);

struct LindleyResult {
  std::vector<std::int64_t> trajectory;  // Q_0..Q_n
  std::int64_t final_q{0};
  // max over nonempty prefixes of the negated partial sum; equals final_q
  // whenever the tokens sum to zero
  std::int64_t max_neg_prefix{0};
};

// Q_0 = 0, Q_n = max(0, Q_{n-1} + xi_n).
LindleyResult lindley_queue(const std::vector<std::int64_t>& tokens);

// The merged token string whose Lindley queue reproduces one overflow
// phase: +1 per online item, -1 per offline slot, ordered by size ascending
// with +1 before -1 at equal size.
std::vector<std::int64_t> overflow_phase_tokens(const std::vector<std::int64_t>& history_sizes,
                                                const std::vector<std::int64_t>& online_sizes);

struct CheckReport {
  std::string name;
  double statistic{0.0};  // Monte-Carlo estimate of the bounded quantity
  double bound{0.0};
  double std_error{0.0};
  long trials{0};
  bool violation{false};
  std::string detail;
};

// mean final queue over sign permutations vs 2 sqrt(2N); flags a violation
// when the plain mean exceeds the bound (the bound holds with wide slack).
CheckReport verify_prop2(std::int64_t N, long trials, std::uint64_t seed);

// mean exact OPT of T iid draws vs exact OPT of the shifted quantile
// instance + 2 sqrt(T); flags beyond three standard errors.
CheckReport verify_prop3(const DistributionSpec& F, std::int64_t T, long trials,
                         std::uint64_t seed);

// mean exact OPT of tau = ceil(T / 2^k) items sampled without replacement
// from the ground set vs OPT of the whole set / 2^k + 2 sqrt(tau)
// + 4 log2^2 tau + 17 log2 tau + 13; flags beyond three standard errors.
CheckReport verify_prop6(const GroundSet& ground, int k, long trials, std::uint64_t seed);

struct CePoint {
  std::int64_t T{0};
  double opt_f{0.0};
  double ratio{0.0};  // opt_f / T
  bool converged{true};
};

// Fractional optimum per item of the shifted quantile instance across the
// grid; the per-item benchmark of the distribution is its limit.
std::vector<CePoint> estimate_ce(const DistributionSpec& F, const std::vector<std::int64_t>& T_grid,
                                 const FractionalOptions& options = {});

// Optional diagnostic: Monte-Carlo estimate of 2 E_r |sum_i tokens_i r_i|
// over Rademacher signs r, the symmetrized majorant of E[final queue].  No
// tightness is claimed.
double rademacher_diagnostic(const TokenSequence& seq, long trials, std::uint64_t seed);

}  // namespace binpack
