#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bagcoins {

enum class ErrorCode {
    InvalidArgument,
    NonFinite,
    ShapeMismatch,
    LabelOutOfRange,
    MissingLabels,
    EmptyArray,
    BadMagic,
    UnsupportedVersion,
    UnsupportedDtype,
    UnsupportedLayout,
    MalformedHeader,
    TruncatedPayload,
    MalformedCsv,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure surfaced by the library. `row`/`col` locate the offending
// element when the error refers to a matrix entry.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<std::size_t> row = std::nullopt,
          std::optional<std::size_t> col = std::nullopt)
        : std::runtime_error(message), code_(code), row_(row), col_(col) {}

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> row() const noexcept { return row_; }
    std::optional<std::size_t> col() const noexcept { return col_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> row_;
    std::optional<std::size_t> col_;
};

}  // namespace bagcoins
