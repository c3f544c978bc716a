#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bagcoins/core.hpp"
#include "bagcoins/random.hpp"

namespace bagcoins {

inline constexpr std::uint32_t kDefaultTrials = 100;

/// Upper binomial tail Pr(Binomial(trials, success_prob) >= wins).
///
/// Sums the pmf terms wins..trials in log space. Each log-pmf uses the
/// saddle-point form (Stirling remainders plus the deviance term bd0), which
/// keeps it accurate to a few ulps where a plain lgamma expansion would lose
/// digits to cancellation. Results below the double range underflow to 0.
///
/// Throws Error{InvalidArgument} unless wins <= trials and p is in [0, 1].
double binomial_sf(std::uint64_t wins, std::uint64_t trials, double success_prob);

// log Pr(Binomial(trials, p) = x); -inf where the mass is exactly zero.
double binomial_log_pmf(std::uint64_t x, std::uint64_t trials, double p);

enum class ProbeMode {
    Sampled,  // k Monte-Carlo contests against uniformly drawn competitors
    Exact,    // W = round(k * p_dom), no randomness
};

struct BoCResult {
    std::uint32_t trials = 0;
    std::uint32_t wins = 0;
    double p_val = 1.0;
    double score = 0.0;  // 1 - p_val
    double p_dom = 0.0;  // fraction of competitors strictly below the top logit
    std::size_t top_class = 0;
    double confidence = 0.0;

    friend bool operator==(const BoCResult&, const BoCResult&) = default;
};

// Fraction of the C-1 competitor logits strictly below z[argmax z].
double dominance_probability(std::span<const double> z);

// k contests: draw a competitor j != argmax uniformly with replacement and
// count a win iff z[top] > z[j]. Ties lose.
std::uint32_t run_trials(std::span<const double> z, std::uint32_t trials, Stream& stream);

// Monte-Carlo probe ("hard mode"): p_val = Pr(Bin(k, p_hat) >= W).
BoCResult boc_test(std::span<const double> z, std::uint32_t trials, Stream& stream);

// Seed-free companion: W = round(k * p_dom), half away from zero.
BoCResult boc_exact(std::span<const double> z, std::uint32_t trials);

struct BatchOptions {
    ProbeMode mode = ProbeMode::Sampled;
    // 0 selects std::thread::hardware_concurrency().
    unsigned threads = 0;
    // Record i draws from Stream(seed, first_index + i). Lets two datasets
    // probed under one seed behave like a single concatenated one.
    std::uint64_t first_index = 0;
};

// Record i uses Stream(seed, first_index + i); output is independent of the
// thread count and of the order records are visited.
std::vector<BoCResult> boc_batch(const LogitDataset& dataset, std::uint32_t trials,
                                 std::uint64_t seed, const BatchOptions& options = {});

}  // namespace bagcoins
