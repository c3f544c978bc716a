#include <cmath>

#include "bagcoins/probe.hpp"
#include "parallel.hpp"

namespace bagcoins {
namespace {

BoCResult finish(const Prediction& prediction, double p_dom, std::uint32_t trials,
                 std::uint32_t wins) {
    BoCResult result;
    result.trials = trials;
    result.wins = wins;
    result.top_class = prediction.top_class;
    result.confidence = prediction.confidence;
    result.p_dom = p_dom;
    result.p_val = binomial_sf(wins, trials, prediction.confidence);
    result.score = 1.0 - result.p_val;
    return result;
}

void require_trials(std::uint32_t trials) {
    if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trial count must be at least 1");
}

}  // namespace

double dominance_probability(std::span<const double> z) {
    check_logits(z);
    const std::size_t top = argmax(z);
    std::size_t below = 0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (j != top && z[top] > z[j]) ++below;
    }
    return static_cast<double>(below) / static_cast<double>(z.size() - 1);
}

std::uint32_t run_trials(std::span<const double> z, std::uint32_t trials, Stream& stream) {
    check_logits(z);
    const std::size_t top = argmax(z);
    const std::uint64_t competitors = z.size() - 1;
    std::uint32_t wins = 0;
    for (std::uint32_t t = 0; t < trials; ++t) {
        // Draw from {0..C-2} and skip over the top class.
        auto j = static_cast<std::size_t>(stream.below(competitors));
        if (j >= top) ++j;
        if (z[top] > z[j]) ++wins;
    }
    return wins;
}

BoCResult boc_test(std::span<const double> z, std::uint32_t trials, Stream& stream) {
    require_trials(trials);
    const Prediction prediction = predict(z);
    const std::uint32_t wins = run_trials(z, trials, stream);
    return finish(prediction, dominance_probability(z), trials, wins);
}

BoCResult boc_exact(std::span<const double> z, std::uint32_t trials) {
    require_trials(trials);
    const Prediction prediction = predict(z);
    const double p_dom = dominance_probability(z);
    const auto wins = static_cast<std::uint32_t>(std::llround(trials * p_dom));
    return finish(prediction, p_dom, trials, wins);
}

std::vector<BoCResult> boc_batch(const LogitDataset& dataset, std::uint32_t trials,
                                 std::uint64_t seed, const BatchOptions& options) {
    require_trials(trials);
    std::vector<BoCResult> results(dataset.size());
    detail::parallel_for(dataset.size(), options.threads, [&](std::size_t i) {
        if (options.mode == ProbeMode::Exact) {
            results[i] = boc_exact(dataset.logits(i), trials);
        } else {
            Stream stream(seed, options.first_index + i);
            results[i] = boc_test(dataset.logits(i), trials, stream);
        }
    });
    return results;
}

}  // namespace bagcoins
