#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bagcoins/error.hpp"

namespace bagcoins {

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// N x C logits with optional labels. Only constructible through
// validate_dataset, so every instance satisfies:
//   N >= 1, C >= 2, all logits finite, labels (if any) of length N in [0, C).
class LogitDataset {
public:
    std::size_t size() const noexcept { return logits_.rows(); }
    std::size_t num_classes() const noexcept { return logits_.cols(); }
    const Matrix& logits() const noexcept { return logits_; }
    std::span<const double> logits(std::size_t i) const { return logits_.row(i); }
    bool has_labels() const noexcept { return labels_.has_value(); }
    // Throws Error{MissingLabels} when the dataset is unlabeled.
    const std::vector<std::int64_t>& labels() const;
    const std::string& name() const noexcept { return name_; }

private:
    friend LogitDataset validate_dataset(Matrix, std::optional<std::vector<std::int64_t>>,
                                         std::string);
    LogitDataset() = default;

    Matrix logits_;
    std::optional<std::vector<std::int64_t>> labels_;
    std::string name_;
};

LogitDataset validate_dataset(Matrix logits,
                              std::optional<std::vector<std::int64_t>> labels = std::nullopt,
                              std::string name = {});

struct Prediction {
    std::size_t top_class = 0;
    double confidence = 0.0;
    std::vector<double> probs;
};

// Throws Error{NonFinite} naming the column of the first non-finite entry,
// or Error{InvalidArgument} when fewer than two classes are given.
void check_logits(std::span<const double> z);

// Index of the largest entry; the lowest index wins exact ties.
std::size_t argmax(std::span<const double> z);

// exp(z_c - max z) / sum_i exp(z_i - max z). Gaps beyond ~745 underflow to 0.
std::vector<double> stable_softmax(std::span<const double> z);

Prediction predict(std::span<const double> z);

// Logits divided by a temperature T > 0, then softmax.
std::vector<double> tempered_softmax(std::span<const double> z, double temperature);

}  // namespace bagcoins
