#include "bagcoins/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

namespace bagcoins {
namespace {

void require_scores(std::span<const double> scores, const char* what) {
    if (scores.empty()) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " scores are empty");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (std::isnan(scores[i])) {
            throw Error(ErrorCode::NonFinite,
                        std::string(what) + " score " + std::to_string(i) + " is NaN", i);
        }
    }
}

}  // namespace

std::size_t bin_index(double confidence, std::size_t num_bins) {
    if (num_bins == 0) throw Error(ErrorCode::InvalidArgument, "bin count must be at least 1");
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "confidence " + std::to_string(confidence) + " outside [0, 1]");
    }
    const double scaled = std::ceil(confidence * static_cast<double>(num_bins));
    const auto m = static_cast<std::size_t>(scaled);
    return std::clamp<std::size_t>(m, 1, num_bins);
}

double expected_calibration_error(std::span<const BinStat> bins, std::size_t total) {
    if (total == 0) return 0.0;
    double ece = 0.0;
    for (const BinStat& bin : bins) {
        if (bin.empty()) continue;
        ece += static_cast<double>(bin.count) / static_cast<double>(total) *
               std::abs(bin.accuracy - bin.mean_confidence);
    }
    return ece;
}

CalibrationReport reliability(std::span<const double> scores, const std::vector<bool>& correct,
                              std::size_t num_bins, std::string score_name) {
    if (num_bins == 0) throw Error(ErrorCode::InvalidArgument, "bin count must be at least 1");
    if (scores.size() != correct.size()) {
        throw Error(ErrorCode::ShapeMismatch,
                    "got " + std::to_string(scores.size()) + " scores but " +
                        std::to_string(correct.size()) + " correctness flags");
    }
    if (scores.empty()) throw Error(ErrorCode::EmptyArray, "no samples to bin");

    std::vector<double> confidence_sum(num_bins, 0.0);
    std::vector<std::size_t> hits(num_bins, 0);
    CalibrationReport report;
    report.bins.resize(num_bins);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!(scores[i] >= 0.0 && scores[i] <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument,
                        "score at row " + std::to_string(i) + " outside [0, 1]", i);
        }
        const std::size_t b = bin_index(scores[i], num_bins) - 1;
        ++report.bins[b].count;
        confidence_sum[b] += scores[i];
        if (correct[i]) ++hits[b];
    }
    for (std::size_t b = 0; b < num_bins; ++b) {
        BinStat& bin = report.bins[b];
        bin.index = b + 1;
        bin.lower = static_cast<double>(b) / static_cast<double>(num_bins);
        bin.upper = static_cast<double>(b + 1) / static_cast<double>(num_bins);
        if (bin.count > 0) {
            bin.mean_confidence = confidence_sum[b] / static_cast<double>(bin.count);
            bin.accuracy = static_cast<double>(hits[b]) / static_cast<double>(bin.count);
        }
    }
    report.total = scores.size();
    report.ece = expected_calibration_error(report.bins, report.total);
    report.score_name = std::move(score_name);
    return report;
}

double auroc(std::span<const double> pos_scores, std::span<const double> neg_scores) {
    require_scores(pos_scores, "positive");
    require_scores(neg_scores, "negative");

    std::vector<double> neg(neg_scores.begin(), neg_scores.end());
    std::sort(neg.begin(), neg.end());
    // Twice the Mann-Whitney U: 2 per win, 1 per tie. Kept integral so the
    // complementary statistic is exactly pairs - u2.
    std::uint64_t u2 = 0;
    for (double x : pos_scores) {
        const auto lo = std::lower_bound(neg.begin(), neg.end(), x);
        const auto hi = std::upper_bound(lo, neg.end(), x);
        u2 += 2 * static_cast<std::uint64_t>(lo - neg.begin()) + static_cast<std::uint64_t>(hi - lo);
    }
    const std::uint64_t pairs2 = 2 * static_cast<std::uint64_t>(pos_scores.size()) * neg.size();
    // Round the smaller share and take the complement of it, so that
    // swapping the two sides produces 1 - value exactly.
    if (2 * u2 > pairs2) {
        return 1.0 - static_cast<double>(pairs2 - u2) / static_cast<double>(pairs2);
    }
    return static_cast<double>(u2) / static_cast<double>(pairs2);
}

std::vector<RocPoint> roc_curve(std::span<const double> pos_scores,
                                std::span<const double> neg_scores) {
    require_scores(pos_scores, "positive");
    require_scores(neg_scores, "negative");

    std::vector<std::pair<double, bool>> scored;
    scored.reserve(pos_scores.size() + neg_scores.size());
    for (double s : pos_scores) scored.emplace_back(s, true);
    for (double s : neg_scores) scored.emplace_back(s, false);
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    const auto n_pos = static_cast<double>(pos_scores.size());
    const auto n_neg = static_cast<double>(neg_scores.size());
    std::vector<RocPoint> points;
    points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < scored.size();) {
        const double threshold = scored[i].first;
        for (; i < scored.size() && scored[i].first == threshold; ++i) {
            if (scored[i].second) ++tp; else ++fp;
        }
        points.push_back({static_cast<double>(fp) / n_neg, static_cast<double>(tp) / n_pos,
                          threshold});
    }
    return points;
}

double trapezoid_area(std::span<const RocPoint> points) {
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) * 0.5;
    }
    return area;
}

CorrectedAuroc corrected(double auroc_raw) {
    if (!(auroc_raw >= 0.0 && auroc_raw <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "AUROC outside [0, 1]");
    }
    return {std::max(auroc_raw, 1.0 - auroc_raw), auroc_raw < 0.5};
}

OODReport ood_report(std::span<const double> pos_scores, std::span<const double> neg_scores,
                     std::string score_name) {
    OODReport report;
    report.roc_points = roc_curve(pos_scores, neg_scores);
    report.auroc_raw = auroc(pos_scores, neg_scores);
    const CorrectedAuroc fixed = corrected(report.auroc_raw);
    report.auroc_corrected = fixed.value;
    report.inverted = fixed.inverted;
    report.num_positive = pos_scores.size();
    report.num_negative = neg_scores.size();
    report.score_name = std::move(score_name);
    return report;
}

}  // namespace bagcoins
