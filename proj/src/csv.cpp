#include <charconv>
#include <cmath>

#include "bagcoins/io.hpp"

namespace bagcoins {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_field(std::string_view field, std::size_t row, std::size_t col) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || end != field.data() + field.size()) {
        throw Error(ErrorCode::MalformedCsv,
                    "cannot parse '" + std::string(field) + "' as a number at (" +
                        std::to_string(row) + ", " + std::to_string(col) + ")",
                    row, col);
    }
    return value;
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

// Numeric CSV without a header row. Blank lines and lines starting with '#'
// are skipped; every remaining row must have the same number of fields.
Array parse_csv(std::string_view text) {
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t line_start = 0;
    while (line_start < text.size()) {
        auto line_end = text.find('\n', line_start);
        if (line_end == std::string_view::npos) line_end = text.size();
        const std::string_view line = trim(text.substr(line_start, line_end - line_start));
        line_start = line_end + 1;
        if (line.empty() || line.front() == '#') continue;

        std::size_t fields = 0;
        std::size_t field_start = 0;
        while (true) {
            const auto comma = line.find(',', field_start);
            const auto field = line.substr(field_start, comma == std::string_view::npos
                                                            ? std::string_view::npos
                                                            : comma - field_start);
            values.push_back(parse_field(field, rows, fields));
            ++fields;
            if (comma == std::string_view::npos) break;
            field_start = comma + 1;
        }
        if (rows == 0) {
            cols = fields;
        } else if (fields != cols) {
            throw Error(ErrorCode::MalformedCsv,
                        "row " + std::to_string(rows) + " has " + std::to_string(fields) +
                            " fields, expected " + std::to_string(cols),
                        rows);
        }
        ++rows;
    }
    if (rows == 0) throw Error(ErrorCode::EmptyArray, "csv contains no data rows");

    Array array;
    array.dtype = Dtype::Float64;
    array.shape = {rows, cols};
    array.data = std::move(values);
    return array;
}

std::string encode_csv(const Array& array) {
    if (array.shape.empty() || array.shape.size() > 2) {
        throw Error(ErrorCode::UnsupportedLayout, "only 1-D and 2-D arrays are supported");
    }
    if (array.size() == 0) throw Error(ErrorCode::EmptyArray, "refusing to write an empty array");
    const std::size_t cols = array.shape.size() == 2 ? array.shape[1] : 1;
    std::string out;
    std::visit(
        [&](const auto& values) {
            for (std::size_t i = 0; i < values.size(); ++i) {
                if constexpr (std::is_same_v<std::decay_t<decltype(values)>, std::vector<double>>) {
                    out += format_number(values[i]);
                } else {
                    out += std::to_string(values[i]);
                }
                out += (i % cols == cols - 1) ? '\n' : ',';
            }
        },
        array.data);
    return out;
}

}  // namespace bagcoins
