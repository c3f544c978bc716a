#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bagcoins/core.hpp"

namespace bagcoins {

inline constexpr std::size_t kDefaultBins = 15;

// ---------------------------------------------------------------------------
// Calibration

struct BinStat {
    std::size_t index = 0;  // 1-based
    double lower = 0.0;     // bin covers (lower, upper]; bin 1 also holds 0
    double upper = 0.0;
    std::size_t count = 0;
    // Meaningless when empty() and excluded from the ECE sum.
    double mean_confidence = 0.0;
    double accuracy = 0.0;

    bool empty() const noexcept { return count == 0; }
};

struct CalibrationReport {
    std::vector<BinStat> bins;
    double ece = 0.0;
    std::size_t total = 0;
    std::string score_name;
};

// Equal-width, right-closed bins: m covers ((m-1)/M, m/M], 0 lands in bin 1.
std::size_t bin_index(double confidence, std::size_t num_bins);

CalibrationReport reliability(std::span<const double> scores, const std::vector<bool>& correct,
                              std::size_t num_bins = kDefaultBins, std::string score_name = {});

// sum_m |B_m|/N * |acc(B_m) - conf(B_m)| over the non-empty bins.
double expected_calibration_error(std::span<const BinStat> bins, std::size_t total);

// ---------------------------------------------------------------------------
// OOD detection. In-distribution samples are the positive class.

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0;  // score >= threshold is called positive
};

struct CorrectedAuroc {
    double value = 0.0;
    bool inverted = false;
};

struct OODReport {
    std::vector<RocPoint> roc_points;
    double auroc_raw = 0.0;
    double auroc_corrected = 0.0;
    bool inverted = false;
    std::size_t num_positive = 0;
    std::size_t num_negative = 0;
    std::string score_name;
};

// Mann-Whitney estimate of Pr(pos > neg) with half credit for ties.
// auroc(a, b) + auroc(b, a) == 1 holds exactly in floating point.
double auroc(std::span<const double> pos_scores, std::span<const double> neg_scores);

// One point per distinct score, swept in descending order, starting at (0,0)
// with a +inf threshold and ending at (1,1).
std::vector<RocPoint> roc_curve(std::span<const double> pos_scores,
                                std::span<const double> neg_scores);

double trapezoid_area(std::span<const RocPoint> points);

// max(raw, 1 - raw); flags signals that rank OOD above ID.
CorrectedAuroc corrected(double auroc_raw);

OODReport ood_report(std::span<const double> pos_scores, std::span<const double> neg_scores,
                     std::string score_name = {});

// ---------------------------------------------------------------------------
// Temperature scaling baseline

// Mean negative log-likelihood of softmax(z / T) against the labels.
double mean_nll(const LogitDataset& dataset, double temperature);

// 0.05, 0.10, ..., 10.00
std::vector<double> default_temperature_grid();

// Grid point minimizing mean_nll; ties go to the smallest temperature.
// Throws Error{MissingLabels} on unlabeled data.
double fit_temperature(const LogitDataset& dataset, std::span<const double> grid);
double fit_temperature(const LogitDataset& dataset);

}  // namespace bagcoins
