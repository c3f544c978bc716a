#include <algorithm>
#include <cmath>

#include "bagcoins/metrics.hpp"

namespace bagcoins {

double mean_nll(const LogitDataset& dataset, double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw Error(ErrorCode::InvalidArgument, "temperature must be positive and finite");
    }
    const auto& labels = dataset.labels();
    double total = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto z = dataset.logits(i);
        const double top = *std::max_element(z.begin(), z.end()) / temperature;
        double mass = 0.0;
        for (double v : z) mass += std::exp(v / temperature - top);
        const double log_normalizer = top + std::log(mass);
        total += log_normalizer - z[static_cast<std::size_t>(labels[i])] / temperature;
    }
    return total / static_cast<double>(dataset.size());
}

std::vector<double> default_temperature_grid() {
    std::vector<double> grid;
    grid.reserve(200);
    for (int i = 1; i <= 200; ++i) grid.push_back(i / 20.0);
    return grid;
}

double fit_temperature(const LogitDataset& dataset, std::span<const double> grid) {
    if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "temperature grid is empty");
    if (!dataset.has_labels()) {
        throw Error(ErrorCode::MissingLabels, "temperature fitting needs labels");
    }
    std::vector<double> sorted(grid.begin(), grid.end());
    std::sort(sorted.begin(), sorted.end());
    double best_t = sorted.front();
    double best_nll = mean_nll(dataset, best_t);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const double nll = mean_nll(dataset, sorted[i]);
        if (nll < best_nll) {
            best_nll = nll;
            best_t = sorted[i];
        }
    }
    return best_t;
}

double fit_temperature(const LogitDataset& dataset) {
    return fit_temperature(dataset, default_temperature_grid());
}

}  // namespace bagcoins
