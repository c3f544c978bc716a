#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bagcoins/core.hpp"
#include "bagcoins/metrics.hpp"
#include "bagcoins/probe.hpp"

namespace bagcoins {

enum class Dtype { Float32, Float64, Int64 };

// ".csv" selects Csv; everything else is read and written as NPY.
enum class ArrayFormat { Npy, Csv };

std::string_view descr(Dtype dtype) noexcept;  // "<f4", "<f8", "<i8"
ArrayFormat format_for(const std::filesystem::path& path);

// A 1-D or 2-D array as stored on disk. Float32 payloads are held upcast to
// double (exactly), and are narrowed back on write, so a float32 file
// round-trips bit for bit.
struct Array {
    Dtype dtype = Dtype::Float64;
    std::vector<std::size_t> shape;
    std::variant<std::vector<double>, std::vector<std::int64_t>> data;

    std::size_t size() const noexcept;
    std::size_t rows() const noexcept { return shape.empty() ? 0 : shape[0]; }
    std::size_t cols() const noexcept { return shape.size() == 2 ? shape[1] : 1; }

    friend bool operator==(const Array&, const Array&) = default;
};

Array make_array(const Matrix& matrix, Dtype dtype = Dtype::Float64);
Array make_array(std::span<const std::int64_t> values);

// Reads NPY version 1.0 (little-endian <f4/<f8/<i8, C order, 1-D or 2-D) or
// headerless numeric CSV. Malformed input raises an Error whose code names
// the failure: BadMagic, UnsupportedVersion, UnsupportedDtype,
// UnsupportedLayout, MalformedHeader, TruncatedPayload, MalformedCsv, Io.
Array read_array(const std::filesystem::path& path);
Array parse_npy(std::span<const char> bytes);
Array parse_csv(std::string_view text);

// Empty arrays are rejected with Error{EmptyArray}.
void write_array(const Array& array, const std::filesystem::path& path, ArrayFormat format);
void write_array(const Matrix& matrix, const std::filesystem::path& path, ArrayFormat format);
void write_array(std::span<const std::int64_t> labels, const std::filesystem::path& path,
                 ArrayFormat format);
std::string encode_npy(const Array& array);
std::string encode_csv(const Array& array);

// 2-D array (1-D is read as a single row) as doubles.
Matrix to_matrix(const Array& array);
// 1-D, N x 1 or 1 x N array of integral values.
std::vector<std::int64_t> to_labels(const Array& array);

LogitDataset load_dataset(const std::filesystem::path& logits_path,
                          const std::optional<std::filesystem::path>& labels_path = std::nullopt);

// ---------------------------------------------------------------------------
// Reports

enum class ReportFormat { Json, Csv };

// Run parameters echoed at the top of every report.
struct Provenance {
    std::string command;
    std::string score;
    std::uint32_t trials = kDefaultTrials;
    std::uint64_t seed = 0;
    std::size_t bins = kDefaultBins;
    std::optional<double> temperature;
};

// 17 significant digits, or "inf"/"-inf"/"nan".
std::string format_number(double value);

std::string render_report(const CalibrationReport& report, ReportFormat format,
                          const Provenance& provenance);
std::string render_report(const OODReport& report, ReportFormat format,
                          const Provenance& provenance);
std::string render_report(std::span<const BoCResult> results, ReportFormat format,
                          const Provenance& provenance);
// Two reliability tables over the same bins, one row per bin.
std::string render_reliability_table(const CalibrationReport& msp, const CalibrationReport& boc,
                                     ReportFormat format, const Provenance& provenance);

void write_text(const std::string& text, const std::filesystem::path& path);

template <typename Report>
void write_report(const Report& report, const std::filesystem::path& path, ReportFormat format,
                  const Provenance& provenance) {
    write_text(render_report(report, format, provenance), path);
}

}  // namespace bagcoins
