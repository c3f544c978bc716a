#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bagcoins/core.hpp"
#include "bagcoins/random.hpp"

namespace bagcoins {

// Deterministic utilities plus i.i.d. Gumbel(0, noise_scale) noise.
struct UtilityVector {
    std::vector<double> utilities;
    double noise_scale = 1.0;
};

// -log(-log(u)) with u clamped to [2^-53, 1 - 2^-53].
double gumbel_from_uniform(double u) noexcept;

// Standard Gumbel draw.
double sample_gumbel(Stream& stream) noexcept;

// Empirical argmax frequencies of u + Gumbel noise over n draws; converges to
// stable_softmax(u / noise_scale).
std::vector<double> gumbel_argmax_freq(const UtilityVector& u, std::size_t n, std::uint64_t seed);

// Empirical Pr(u_i + g_i > u_j + g_j); converges to 1 / (1 + exp(u_j - u_i)).
double pairwise_dominance_freq(double u_i, double u_j, std::size_t n, std::uint64_t seed);

/// Synthetic labelled logits whose maximum softmax probability is calibrated
/// by construction: logits z ~ N(0, spread^2) per entry, label ~ softmax(z).
///
/// Sample i draws from Stream(seed, i), so the output is reproducible and
/// independent of generation order.
LogitDataset generate_calibrated_dataset(std::size_t n, std::size_t num_classes, double spread,
                                         std::uint64_t seed);

/// Same draws as generate_calibrated_dataset, but the emitted logits are
/// multiplied by `peak` while labels still follow the unscaled softmax. For
/// peak > 1 the MSP is overconfident; peak == 1 reproduces the calibrated
/// dataset bit for bit.
LogitDataset generate_delusional_dataset(std::size_t n, std::size_t num_classes, double spread,
                                         double peak, std::uint64_t seed);

}  // namespace bagcoins
