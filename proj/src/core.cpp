#include "bagcoins/core.hpp"

#include <algorithm>
#include <cmath>

namespace bagcoins {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::NonFinite: return "non-finite value";
        case ErrorCode::ShapeMismatch: return "shape mismatch";
        case ErrorCode::LabelOutOfRange: return "label out of range";
        case ErrorCode::MissingLabels: return "missing labels";
        case ErrorCode::EmptyArray: return "empty array";
        case ErrorCode::BadMagic: return "bad magic";
        case ErrorCode::UnsupportedVersion: return "unsupported format version";
        case ErrorCode::UnsupportedDtype: return "unsupported dtype";
        case ErrorCode::UnsupportedLayout: return "unsupported layout";
        case ErrorCode::MalformedHeader: return "malformed header";
        case ErrorCode::TruncatedPayload: return "truncated payload";
        case ErrorCode::MalformedCsv: return "malformed csv";
        case ErrorCode::Io: return "i/o error";
    }
    return "unknown error";
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw Error(ErrorCode::ShapeMismatch,
                    "matrix data has " + std::to_string(data_.size()) + " elements, expected " +
                        std::to_string(rows) + "x" + std::to_string(cols));
    }
}

const std::vector<std::int64_t>& LogitDataset::labels() const {
    if (!labels_) {
        throw Error(ErrorCode::MissingLabels,
                    "dataset '" + name_ + "' has no labels");
    }
    return *labels_;
}

LogitDataset validate_dataset(Matrix logits, std::optional<std::vector<std::int64_t>> labels,
                              std::string name) {
    if (logits.rows() == 0) {
        throw Error(ErrorCode::EmptyArray, "logit matrix has no rows");
    }
    if (logits.cols() < 2) {
        throw Error(ErrorCode::ShapeMismatch,
                    "logit matrix needs at least 2 classes, got " + std::to_string(logits.cols()));
    }
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        for (std::size_t c = 0; c < logits.cols(); ++c) {
            if (!std::isfinite(logits(r, c))) {
                throw Error(ErrorCode::NonFinite,
                            "non-finite logit at (" + std::to_string(r) + ", " +
                                std::to_string(c) + ")",
                            r, c);
            }
        }
    }
    if (labels) {
        if (labels->size() != logits.rows()) {
            throw Error(ErrorCode::ShapeMismatch,
                        "labels have length " + std::to_string(labels->size()) + " but logits have " +
                            std::to_string(logits.rows()) + " rows");
        }
        const auto num_classes = static_cast<std::int64_t>(logits.cols());
        for (std::size_t r = 0; r < labels->size(); ++r) {
            const auto label = (*labels)[r];
            if (label < 0 || label >= num_classes) {
                throw Error(ErrorCode::LabelOutOfRange,
                            "label " + std::to_string(label) + " at row " + std::to_string(r) +
                                " outside [0, " + std::to_string(num_classes) + ")",
                            r);
            }
        }
    }

    LogitDataset dataset;
    dataset.logits_ = std::move(logits);
    dataset.labels_ = std::move(labels);
    dataset.name_ = std::move(name);
    return dataset;
}

void check_logits(std::span<const double> z) {
    if (z.size() < 2) {
        throw Error(ErrorCode::InvalidArgument,
                    "logit vector needs at least 2 classes, got " + std::to_string(z.size()));
    }
    for (std::size_t c = 0; c < z.size(); ++c) {
        if (!std::isfinite(z[c])) {
            throw Error(ErrorCode::NonFinite, "non-finite logit at index " + std::to_string(c),
                        std::nullopt, c);
        }
    }
}

std::size_t argmax(std::span<const double> z) {
    // max_element returns the first maximum.
    return static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
}

std::vector<double> stable_softmax(std::span<const double> z) {
    check_logits(z);
    const double top = z[argmax(z)];
    std::vector<double> out(z.size());
    double total = 0.0;
    for (std::size_t c = 0; c < z.size(); ++c) {
        out[c] = std::exp(z[c] - top);
        total += out[c];
    }
    for (double& p : out) p /= total;
    return out;
}

Prediction predict(std::span<const double> z) {
    Prediction prediction;
    prediction.probs = stable_softmax(z);
    prediction.top_class = argmax(z);
    prediction.confidence = prediction.probs[prediction.top_class];
    return prediction;
}

std::vector<double> tempered_softmax(std::span<const double> z, double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw Error(ErrorCode::InvalidArgument, "temperature must be positive and finite");
    }
    std::vector<double> scaled(z.begin(), z.end());
    for (double& v : scaled) v /= temperature;
    return stable_softmax(scaled);
}

}  // namespace bagcoins
