#include <cmath>
#include <vector>

#include "bagcoins/metrics.hpp"
#include "bagcoins/rum.hpp"
#include "doctest.h"

using namespace bagcoins;

TEST_CASE("default grid spans 0.05..10 in 0.05 steps") {
    const auto grid = default_temperature_grid();
    REQUIRE(grid.size() == 200);
    CHECK(grid.front() == 0.05);
    CHECK(grid.back() == 10.0);
    CHECK(grid[19] == 1.0);
}

TEST_CASE("fit_temperature on calibrated data lands near 1") {
    const auto ds = generate_calibrated_dataset(20000, 10, 2.0, 3);
    const auto grid = default_temperature_grid();
    const double t = fit_temperature(ds, grid);
    CHECK(mean_nll(ds, t) <= mean_nll(ds, 1.0));
    CHECK(std::abs(t - 1.0) <= 0.1);
}

TEST_CASE("fit_temperature follows a rescaling of the logits") {
    // NLL(2z, 2T) == NLL(z, T), so the optimum moves with the scale.
    const auto ds = generate_calibrated_dataset(5000, 5, 1.5, 8);
    Matrix doubled = ds.logits();
    for (std::size_t r = 0; r < doubled.rows(); ++r) {
        for (double& v : doubled.row(r)) v *= 2.0;
    }
    const auto scaled = validate_dataset(doubled, ds.labels());
    const double t = fit_temperature(ds);
    const double t2 = fit_temperature(scaled);
    CHECK(std::abs(t2 - 2.0 * t) <= 0.05 + 1e-12);
}

TEST_CASE("fit_temperature picks the grid minimum for a confident correct sample") {
    Matrix z(1, 2);
    z(0, 0) = 10.0;
    const auto ds = validate_dataset(z, std::vector<std::int64_t>{0});
    CHECK(fit_temperature(ds) == 0.05);
}

TEST_CASE("fit_temperature errors") {
    Matrix z(2, 2, 0.0);
    CHECK_THROWS_AS(fit_temperature(validate_dataset(z)), Error);
    const auto labelled = validate_dataset(z, std::vector<std::int64_t>{0, 1});
    CHECK_THROWS_AS(fit_temperature(labelled, std::vector<double>{}), Error);
    // Flat NLL everywhere: ties resolve to the smallest temperature.
    CHECK(fit_temperature(labelled, std::vector<double>{3.0, 0.5, 2.0}) == 0.5);
}

TEST_CASE("tempered_softmax matches manual division") {
    const std::vector<double> z{2.0, 0.0, -1.0};
    const auto p = tempered_softmax(z, 2.0);
    const std::vector<double> halved{1.0, 0.0, -0.5};
    CHECK(p == stable_softmax(halved));
    CHECK_THROWS_AS(tempered_softmax(z, 0.0), Error);
}
