#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "bagcoins/probe.hpp"

namespace bagcoins {
namespace {

constexpr double kLn2Pi = 1.8378770664093454835606594728112;  // log(2 pi)

// stirlerr(n) = log(n!) - [(n + 1/2) log n - n + log sqrt(2 pi)].
// Asymptotic series for n > 15; below that, a downward recurrence from 16
//   stirlerr(n) = stirlerr(n + 1) + (n + 1/2) log1p(1/n) - 1.
double stirling_series(double n) {
    constexpr double s0 = 1.0 / 12.0;
    constexpr double s1 = 1.0 / 360.0;
    constexpr double s2 = 1.0 / 1260.0;
    constexpr double s3 = 1.0 / 1680.0;
    constexpr double s4 = 1.0 / 1188.0;
    const double nn = n * n;
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

const std::array<double, 17>& small_stirlerr_table() {
    static const std::array<double, 17> table = [] {
        std::array<double, 17> t{};
        t[16] = stirling_series(16.0);
        for (int n = 15; n >= 1; --n) {
            const double x = static_cast<double>(n);
            t[n] = t[n + 1] + (x + 0.5) * std::log1p(1.0 / x) - 1.0;
        }
        t[0] = 0.0;
        return t;
    }();
    return table;
}

double stirlerr(std::uint64_t n) {
    if (n <= 16) return small_stirlerr_table()[n];
    return stirling_series(static_cast<double>(n));
}

// Deviance term x log(x / mean) + mean - x, with a series near x == mean
// where the direct form cancels.
double bd0(double x, double mean) {
    if (std::abs(x - mean) < 0.1 * (x + mean)) {
        const double v = (x - mean) / (x + mean);
        double s = (x - mean) * v;
        double ej = 2.0 * x * v;
        const double v2 = v * v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v2;
            const double next = s + ej / (2 * j + 1);
            if (next == s) return next;
            s = next;
        }
        return s;
    }
    return x * std::log(x / mean) + mean - x;
}

}  // namespace

double binomial_log_pmf(std::uint64_t x, std::uint64_t trials, double p) {
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    if (x > trials) return neg_inf;
    const double q = 1.0 - p;
    if (p == 0.0) return x == 0 ? 0.0 : neg_inf;
    if (q == 0.0) return x == trials ? 0.0 : neg_inf;
    if (trials == 0) return 0.0;

    const double n = static_cast<double>(trials);
    // log(q) without the rounding of 1 - p when p is small.
    const double log_q = p < 0.5 ? std::log1p(-p) : std::log(q);
    if (x == 0) {
        return p < 0.1 ? -bd0(n, n * q) - n * p : n * log_q;
    }
    if (x == trials) {
        return q < 0.1 ? -bd0(n, n * p) - n * q : n * std::log(p);
    }
    const double k = static_cast<double>(x);
    const double lc = stirlerr(trials) - stirlerr(x) - stirlerr(trials - x) - bd0(k, n * p) -
                      bd0(n - k, n * q);
    const double lf = kLn2Pi + std::log(k) + std::log1p(-k / n);
    return lc - 0.5 * lf;
}

double binomial_sf(std::uint64_t wins, std::uint64_t trials, double success_prob) {
    if (wins > trials) {
        throw Error(ErrorCode::InvalidArgument,
                    "wins (" + std::to_string(wins) + ") exceed trials (" +
                        std::to_string(trials) + ")");
    }
    if (!(success_prob >= 0.0 && success_prob <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "success probability outside [0, 1]");
    }
    if (wins == 0) return 1.0;
    if (success_prob == 0.0) return 0.0;
    if (success_prob == 1.0) return 1.0;

    // Terms decrease monotonically away from the mode, so anchor the scale at
    // the largest term in range and stop once the remainder cannot matter.
    const auto mode = std::min<std::uint64_t>(
        trials, static_cast<std::uint64_t>(std::floor(static_cast<double>(trials + 1) * success_prob)));
    const std::uint64_t peak = std::max(wins, mode);
    const double log_peak = binomial_log_pmf(peak, trials, success_prob);

    double sum = 0.0;
    for (std::uint64_t w = wins; w <= trials; ++w) {
        const double term = std::exp(binomial_log_pmf(w, trials, success_prob) - log_peak);
        sum += term;
        if (w > peak && static_cast<double>(trials - w) * term < 0x1.0p-60 * sum) break;
    }

    double tail = std::exp(log_peak) * sum;
    if (tail < std::numeric_limits<double>::min()) {
        tail = std::exp(log_peak + std::log(sum));
    }
    return std::min(tail, 1.0);
}

}  // namespace bagcoins
