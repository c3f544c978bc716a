#include <cmath>
#include <numbers>
#include <vector>

#include "bagcoins/metrics.hpp"
#include "bagcoins/rum.hpp"
#include "doctest.h"

using namespace bagcoins;

namespace {

double msp_ece(const LogitDataset& ds, std::size_t bins = 15) {
    std::vector<double> scores(ds.size());
    std::vector<bool> correct(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto pred = predict(ds.logits(i));
        scores[i] = pred.confidence;
        correct[i] = static_cast<std::int64_t>(pred.top_class) == ds.labels()[i];
    }
    return reliability(scores, correct, bins).ece;
}

}  // namespace

TEST_CASE("gumbel inverse CDF") {
    CHECK(gumbel_from_uniform(std::exp(-1.0)) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::isfinite(gumbel_from_uniform(0.0)));
    CHECK(std::isfinite(gumbel_from_uniform(1.0)));
    CHECK(gumbel_from_uniform(0.0) == gumbel_from_uniform(0x1.0p-53));
}

TEST_CASE("gumbel moments over 10^6 draws") {
    Stream s(77);
    constexpr int n = 1000000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = sample_gumbel(s);
        sum += g;
        sum_sq += g * g;
    }
    const double mean = sum / n;
    const double variance = sum_sq / n - mean * mean;
    CHECK(std::abs(mean - std::numbers::egamma) <= 0.01);
    CHECK(std::abs(variance - std::numbers::pi * std::numbers::pi / 6.0) <= 0.02);
}

TEST_CASE("gumbel_argmax_freq converges to softmax") {
    const auto even = gumbel_argmax_freq({{0.0, 0.0}}, 200000, 1);
    CHECK(std::abs(even[0] - 0.5) <= 0.01);

    const UtilityVector logs{{std::log(1.0), std::log(2.0), std::log(3.0)}};
    const auto freq = gumbel_argmax_freq(logs, 200000, 2);
    CHECK(std::abs(freq[0] - 1.0 / 6.0) <= 0.01);
    CHECK(std::abs(freq[1] - 2.0 / 6.0) <= 0.01);
    CHECK(std::abs(freq[2] - 3.0 / 6.0) <= 0.01);

    const auto one = gumbel_argmax_freq(logs, 1, 3);
    int ones = 0;
    for (double f : one) {
        CHECK((f == 0.0 || f == 1.0));
        ones += f == 1.0;
    }
    CHECK(ones == 1);

    CHECK_THROWS_AS(gumbel_argmax_freq(logs, 0, 3), Error);
}

TEST_CASE("gumbel-max consistency on random utilities (property)") {
    Stream rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        UtilityVector u;
        u.utilities.resize(2 + rng.below(6));
        for (double& v : u.utilities) v = 6.0 * rng.uniform() - 3.0;
        const auto freq = gumbel_argmax_freq(u, 200000, rng());
        const auto probs = stable_softmax(u.utilities);
        for (std::size_t c = 0; c < probs.size(); ++c) CHECK(std::abs(freq[c] - probs[c]) <= 0.01);
    }
}

TEST_CASE("pairwise dominance is logistic in the utility gap") {
    CHECK(std::abs(pairwise_dominance_freq(0.0, 0.0, 200000, 4) - 0.5) <= 0.01);
    CHECK(std::abs(pairwise_dominance_freq(std::log(3.0), 0.0, 200000, 5) - 0.75) <= 0.01);
    CHECK(pairwise_dominance_freq(10.0, 0.0, 200000, 6) >= 0.999);

    Stream rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        const double a = 6.0 * rng.uniform() - 3.0;
        const double b = 6.0 * rng.uniform() - 3.0;
        const double logistic = 1.0 / (1.0 + std::exp(b - a));
        CHECK(std::abs(pairwise_dominance_freq(a, b, 200000, rng()) - logistic) <= 0.01);
    }
}

TEST_CASE("calibrated generator") {
    SUBCASE("zero spread gives uniform logits and labels") {
        const auto ds = generate_calibrated_dataset(20000, 4, 0.0, 1);
        std::vector<int> counts(4, 0);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            for (double v : ds.logits(i)) CHECK(v == 0.0);
            ++counts[static_cast<std::size_t>(ds.labels()[i])];
        }
        for (int c : counts) CHECK(std::abs(c / 20000.0 - 0.25) <= 0.015);
        CHECK(predict(ds.logits(0)).confidence == 0.25);
    }
    SUBCASE("MSP ECE is small at n = 100,000") {
        const auto ds = generate_calibrated_dataset(100000, 10, 2.0, 0);
        CHECK(msp_ece(ds) <= 0.01);
    }
    SUBCASE("fixed seed reproduces the dataset") {
        const auto a = generate_calibrated_dataset(300, 7, 1.0, 42);
        const auto b = generate_calibrated_dataset(300, 7, 1.0, 42);
        CHECK(a.logits() == b.logits());
        CHECK(a.labels() == b.labels());
        const auto c = generate_calibrated_dataset(300, 7, 1.0, 43);
        CHECK_FALSE(a.logits() == c.logits());
    }
    SUBCASE("parameter checks") {
        CHECK_THROWS_AS(generate_calibrated_dataset(0, 3, 1.0, 0), Error);
        CHECK_THROWS_AS(generate_calibrated_dataset(5, 1, 1.0, 0), Error);
        CHECK_THROWS_AS(generate_calibrated_dataset(5, 3, -1.0, 0), Error);
        CHECK_THROWS_AS(generate_delusional_dataset(5, 3, 1.0, 0.0, 0), Error);
    }
}

TEST_CASE("delusional generator") {
    const auto calibrated = generate_calibrated_dataset(100000, 10, 2.0, 5);
    const auto same = generate_delusional_dataset(100000, 10, 2.0, 1.0, 5);
    CHECK(same.logits() == calibrated.logits());
    CHECK(same.labels() == calibrated.labels());

    const auto sharp = generate_delusional_dataset(100000, 10, 2.0, 3.0, 5);
    CHECK(sharp.labels() == calibrated.labels());
    for (std::size_t i = 0; i < sharp.size(); ++i) {
        if (argmax(sharp.logits(i)) != argmax(calibrated.logits(i))) {
            FAIL("argmax changed at row " << i);
        }
    }
    CHECK(msp_ece(sharp) > msp_ece(calibrated));
}
