#include "bagcoins/rum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bagcoins {
namespace {

constexpr double kUniformFloor = 0x1.0p-53;
constexpr double kUniformCeil = 1.0 - 0x1.0p-53;

void require_draws(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "draw count must be at least 1");
}

// Inverse-CDF draw from a categorical distribution.
std::size_t sample_categorical(std::span<const double> probs, Stream& stream) {
    const double u = stream.uniform();
    double cumulative = 0.0;
    for (std::size_t c = 0; c + 1 < probs.size(); ++c) {
        cumulative += probs[c];
        if (u < cumulative) return c;
    }
    return probs.size() - 1;
}

LogitDataset generate(std::size_t n, std::size_t num_classes, double spread, double peak,
                      std::uint64_t seed, std::string name) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be at least 1");
    if (num_classes < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 classes");
    if (!(spread >= 0.0) || !std::isfinite(spread)) {
        throw Error(ErrorCode::InvalidArgument, "spread must be finite and non-negative");
    }
    if (!(peak > 0.0) || !std::isfinite(peak)) {
        throw Error(ErrorCode::InvalidArgument, "peak must be finite and positive");
    }

    Matrix logits(n, num_classes);
    std::vector<std::int64_t> labels(n);
    std::vector<double> utilities(num_classes);
    for (std::size_t i = 0; i < n; ++i) {
        Stream stream(seed, i);
        for (double& u : utilities) u = spread * stream.normal();
        const std::vector<double> probs = stable_softmax(utilities);
        labels[i] = static_cast<std::int64_t>(sample_categorical(probs, stream));
        auto row = logits.row(i);
        for (std::size_t c = 0; c < num_classes; ++c) row[c] = peak * utilities[c];
    }
    return validate_dataset(std::move(logits), std::move(labels), std::move(name));
}

}  // namespace

double gumbel_from_uniform(double u) noexcept {
    const double clamped = std::clamp(u, kUniformFloor, kUniformCeil);
    return -std::log(-std::log(clamped));
}

double sample_gumbel(Stream& stream) noexcept {
    return gumbel_from_uniform(stream.uniform());
}

std::vector<double> gumbel_argmax_freq(const UtilityVector& u, std::size_t n, std::uint64_t seed) {
    check_logits(u.utilities);
    require_draws(n);
    if (!(u.noise_scale > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "noise scale must be positive");
    }
    const std::size_t num_classes = u.utilities.size();
    std::vector<std::size_t> counts(num_classes, 0);
    std::vector<double> z(num_classes);
    Stream stream(seed, 0);
    for (std::size_t draw = 0; draw < n; ++draw) {
        for (std::size_t c = 0; c < num_classes; ++c) {
            z[c] = u.utilities[c] + u.noise_scale * sample_gumbel(stream);
        }
        ++counts[argmax(z)];
    }
    std::vector<double> freq(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
        freq[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
    }
    return freq;
}

double pairwise_dominance_freq(double u_i, double u_j, std::size_t n, std::uint64_t seed) {
    if (!std::isfinite(u_i) || !std::isfinite(u_j)) {
        throw Error(ErrorCode::NonFinite, "utilities must be finite");
    }
    require_draws(n);
    Stream stream(seed, 0);
    std::size_t wins = 0;
    for (std::size_t draw = 0; draw < n; ++draw) {
        const double z_i = u_i + sample_gumbel(stream);
        const double z_j = u_j + sample_gumbel(stream);
        if (z_i > z_j) ++wins;
    }
    return static_cast<double>(wins) / static_cast<double>(n);
}

LogitDataset generate_calibrated_dataset(std::size_t n, std::size_t num_classes, double spread,
                                         std::uint64_t seed) {
    return generate(n, num_classes, spread, 1.0, seed, "calibrated");
}

LogitDataset generate_delusional_dataset(std::size_t n, std::size_t num_classes, double spread,
                                         double peak, std::uint64_t seed) {
    return generate(n, num_classes, spread, peak, seed, "delusional");
}

}  // namespace bagcoins
