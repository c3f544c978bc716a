#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "bagcoins/io.hpp"

namespace bagcoins {
namespace {

constexpr char kMagic[] = {'\x93', 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kPreambleSize = 10;  // magic + version + u16 header length
constexpr std::size_t kAlignment = 64;

std::size_t item_size(Dtype dtype) {
    return dtype == Dtype::Float32 ? 4 : 8;
}

std::uint64_t load_le(const char* p, std::size_t width) {
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < width; ++b) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
    }
    return v;
}

void store_le(std::string& out, std::uint64_t v, std::size_t width) {
    for (std::size_t b = 0; b < width; ++b) {
        out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
    }
}

// Parser for the Python dict literal in an NPY header. Accepts exactly the
// keys descr, fortran_order and shape.
class HeaderParser {
public:
    explicit HeaderParser(std::string_view text) : text_(text) {}

    struct Fields {
        std::string descr;
        bool fortran_order = false;
        std::vector<std::size_t> shape;
    };

    Fields parse() {
        Fields fields;
        bool seen_descr = false;
        bool seen_order = false;
        bool seen_shape = false;
        expect('{');
        while (true) {
            skip_space();
            if (peek() == '}') break;
            const std::string key = string_literal();
            expect(':');
            if (key == "descr") {
                fields.descr = string_literal();
                seen_descr = true;
            } else if (key == "fortran_order") {
                fields.fortran_order = boolean();
                seen_order = true;
            } else if (key == "shape") {
                fields.shape = tuple();
                seen_shape = true;
            } else {
                fail("unexpected header key '" + key + "'");
            }
            skip_space();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            skip_space();
            if (peek() != '}') fail("expected ',' or '}'");
        }
        ++pos_;
        skip_space();
        if (pos_ != text_.size()) fail("trailing characters after header dict");
        if (!seen_descr || !seen_order || !seen_shape) {
            fail("header lacks one of descr, fortran_order, shape");
        }
        return fields;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::MalformedHeader, "npy header: " + what);
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip_space();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string string_literal() {
        skip_space();
        const char quote = peek();
        if (quote != '\'' && quote != '"') fail("expected a quoted string");
        const auto end = text_.find(quote, pos_ + 1);
        if (end == std::string_view::npos) fail("unterminated string");
        std::string value(text_.substr(pos_ + 1, end - pos_ - 1));
        pos_ = end + 1;
        return value;
    }

    bool boolean() {
        skip_space();
        if (text_.substr(pos_, 4) == "True") {
            pos_ += 4;
            return true;
        }
        if (text_.substr(pos_, 5) == "False") {
            pos_ += 5;
            return false;
        }
        fail("expected True or False");
    }

    std::vector<std::size_t> tuple() {
        std::vector<std::size_t> dims;
        expect('(');
        while (true) {
            skip_space();
            if (peek() == ')') break;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a dimension");
            std::size_t value = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                value = value * 10 + static_cast<std::size_t>(peek() - '0');
                ++pos_;
            }
            dims.push_back(value);
            skip_space();
            if (peek() == ',') {
                ++pos_;
            } else if (peek() != ')') {
                fail("expected ',' or ')' in shape");
            }
        }
        ++pos_;
        return dims;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string shape_literal(const std::vector<std::size_t>& shape) {
    std::string s = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i > 0) s += ", ";
        s += std::to_string(shape[i]);
    }
    if (shape.size() == 1) s += ",";
    return s + ")";
}

void require_writable_shape(const Array& array) {
    if (array.shape.empty() || array.shape.size() > 2) {
        throw Error(ErrorCode::UnsupportedLayout, "only 1-D and 2-D arrays are supported");
    }
    if (array.size() == 0) throw Error(ErrorCode::EmptyArray, "refusing to write an empty array");
    const bool integral = std::holds_alternative<std::vector<std::int64_t>>(array.data);
    if (integral != (array.dtype == Dtype::Int64)) {
        throw Error(ErrorCode::UnsupportedDtype, "array payload does not match its dtype");
    }
    const std::size_t stored = integral ? std::get<1>(array.data).size()
                                        : std::get<0>(array.data).size();
    if (stored != array.size()) {
        throw Error(ErrorCode::ShapeMismatch, "array payload does not match its shape");
    }
}

}  // namespace

std::string_view descr(Dtype dtype) noexcept {
    switch (dtype) {
        case Dtype::Float32: return "<f4";
        case Dtype::Float64: return "<f8";
        case Dtype::Int64: return "<i8";
    }
    return "";
}

ArrayFormat format_for(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? ArrayFormat::Csv : ArrayFormat::Npy;
}

std::size_t Array::size() const noexcept {
    if (shape.empty()) return 0;
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

Array make_array(const Matrix& matrix, Dtype dtype) {
    if (dtype == Dtype::Int64) {
        throw Error(ErrorCode::UnsupportedDtype, "a real matrix cannot be stored as int64");
    }
    Array array;
    array.dtype = dtype;
    array.shape = {matrix.rows(), matrix.cols()};
    std::vector<double> values(matrix.data().begin(), matrix.data().end());
    if (dtype == Dtype::Float32) {
        for (double& v : values) v = static_cast<double>(static_cast<float>(v));
    }
    array.data = std::move(values);
    return array;
}

Array make_array(std::span<const std::int64_t> values) {
    Array array;
    array.dtype = Dtype::Int64;
    array.shape = {values.size()};
    array.data = std::vector<std::int64_t>(values.begin(), values.end());
    return array;
}

Array parse_npy(std::span<const char> bytes) {
    if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
        throw Error(ErrorCode::BadMagic, "missing \\x93NUMPY magic string");
    }
    if (bytes.size() < kPreambleSize) {
        throw Error(ErrorCode::MalformedHeader, "file ends inside the npy preamble");
    }
    const auto major = static_cast<unsigned char>(bytes[6]);
    const auto minor = static_cast<unsigned char>(bytes[7]);
    if (major != 1 || minor != 0) {
        throw Error(ErrorCode::UnsupportedVersion,
                    "npy version " + std::to_string(major) + "." + std::to_string(minor) +
                        " is not supported (need 1.0)");
    }
    const auto header_len = static_cast<std::size_t>(load_le(bytes.data() + 8, 2));
    if (bytes.size() < kPreambleSize + header_len) {
        throw Error(ErrorCode::MalformedHeader, "file ends inside the npy header");
    }
    std::string_view header(bytes.data() + kPreambleSize, header_len);
    if (header.empty() || header.back() != '\n') {
        throw Error(ErrorCode::MalformedHeader, "npy header is not newline-terminated");
    }
    const auto fields = HeaderParser(header).parse();

    Array array;
    if (fields.descr == "<f4") {
        array.dtype = Dtype::Float32;
    } else if (fields.descr == "<f8") {
        array.dtype = Dtype::Float64;
    } else if (fields.descr == "<i8") {
        array.dtype = Dtype::Int64;
    } else {
        throw Error(ErrorCode::UnsupportedDtype, "unsupported dtype '" + fields.descr + "'");
    }
    if (fields.fortran_order) {
        throw Error(ErrorCode::UnsupportedLayout, "fortran_order arrays are not supported");
    }
    if (fields.shape.empty() || fields.shape.size() > 2) {
        throw Error(ErrorCode::UnsupportedLayout,
                    "only 1-D and 2-D arrays are supported, got " +
                        std::to_string(fields.shape.size()) + "-D");
    }
    array.shape = fields.shape;

    const std::size_t count = array.size();
    if (count == 0) throw Error(ErrorCode::EmptyArray, "npy array has no elements");
    const std::size_t width = item_size(array.dtype);
    const std::size_t payload = bytes.size() - kPreambleSize - header_len;
    if (payload < count * width) {
        throw Error(ErrorCode::TruncatedPayload,
                    "payload holds " + std::to_string(payload) + " bytes, header promises " +
                        std::to_string(count * width));
    }
    if (payload > count * width) {
        throw Error(ErrorCode::ShapeMismatch, "payload has " +
                                                  std::to_string(payload - count * width) +
                                                  " bytes beyond the declared shape");
    }

    const char* p = bytes.data() + kPreambleSize + header_len;
    if (array.dtype == Dtype::Int64) {
        std::vector<std::int64_t> values(count);
        for (std::size_t i = 0; i < count; ++i) {
            values[i] = static_cast<std::int64_t>(load_le(p + i * 8, 8));
        }
        array.data = std::move(values);
    } else {
        std::vector<double> values(count);
        for (std::size_t i = 0; i < count; ++i) {
            if (array.dtype == Dtype::Float32) {
                const auto bits = static_cast<std::uint32_t>(load_le(p + i * 4, 4));
                values[i] = static_cast<double>(std::bit_cast<float>(bits));
            } else {
                values[i] = std::bit_cast<double>(load_le(p + i * 8, 8));
            }
        }
        array.data = std::move(values);
    }
    return array;
}

std::string encode_npy(const Array& array) {
    require_writable_shape(array);
    std::string dict = "{'descr': '" + std::string(descr(array.dtype)) +
                       "', 'fortran_order': False, 'shape': " + shape_literal(array.shape) + ", }";
    // Pad with spaces so that preamble + header (including the newline) is a
    // multiple of the alignment.
    const std::size_t unpadded = kPreambleSize + dict.size() + 1;
    const std::size_t padding = (kAlignment - unpadded % kAlignment) % kAlignment;
    dict.append(padding, ' ');
    dict.push_back('\n');

    std::string out(kMagic, sizeof(kMagic));
    out.push_back('\x01');
    out.push_back('\x00');
    store_le(out, dict.size(), 2);
    out += dict;

    const std::size_t count = array.size();
    out.reserve(out.size() + count * item_size(array.dtype));
    if (array.dtype == Dtype::Int64) {
        for (std::int64_t v : std::get<1>(array.data)) store_le(out, static_cast<std::uint64_t>(v), 8);
    } else if (array.dtype == Dtype::Float32) {
        for (double v : std::get<0>(array.data)) {
            store_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4);
        }
    } else {
        for (double v : std::get<0>(array.data)) store_le(out, std::bit_cast<std::uint64_t>(v), 8);
    }
    return out;
}

Array read_array(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorCode::Io, "failed reading '" + path.string() + "'");
    try {
        if (format_for(path) == ArrayFormat::Csv) return parse_csv(bytes);
        return parse_npy(std::span<const char>(bytes.data(), bytes.size()));
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what(), e.row(), e.col());
    }
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

void write_array(const Array& array, const std::filesystem::path& path, ArrayFormat format) {
    write_text(format == ArrayFormat::Csv ? encode_csv(array) : encode_npy(array), path);
}

void write_array(const Matrix& matrix, const std::filesystem::path& path, ArrayFormat format) {
    write_array(make_array(matrix), path, format);
}

void write_array(std::span<const std::int64_t> labels, const std::filesystem::path& path,
                 ArrayFormat format) {
    write_array(make_array(labels), path, format);
}

Matrix to_matrix(const Array& array) {
    if (array.shape.empty() || array.shape.size() > 2) {
        throw Error(ErrorCode::UnsupportedLayout, "expected a 1-D or 2-D array");
    }
    const std::size_t rows = array.shape.size() == 2 ? array.shape[0] : 1;
    const std::size_t cols = array.shape.size() == 2 ? array.shape[1] : array.shape[0];
    if (const auto* ints = std::get_if<std::vector<std::int64_t>>(&array.data)) {
        std::vector<double> values(ints->begin(), ints->end());
        return Matrix(rows, cols, std::move(values));
    }
    return Matrix(rows, cols, std::get<std::vector<double>>(array.data));
}

std::vector<std::int64_t> to_labels(const Array& array) {
    const bool vector_like = array.shape.size() == 1 ||
                             (array.shape.size() == 2 && (array.shape[0] == 1 || array.shape[1] == 1));
    if (!vector_like) {
        throw Error(ErrorCode::ShapeMismatch, "labels must be a vector or a single row/column");
    }
    if (const auto* ints = std::get_if<std::vector<std::int64_t>>(&array.data)) return *ints;

    const auto& values = std::get<std::vector<double>>(array.data);
    std::vector<std::int64_t> labels(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!std::isfinite(v) || v != std::trunc(v) || std::abs(v) > 0x1.0p53) {
            throw Error(ErrorCode::NonFinite, "label at row " + std::to_string(i) +
                                                  " is not an integer", i);
        }
        labels[i] = static_cast<std::int64_t>(v);
    }
    return labels;
}

LogitDataset load_dataset(const std::filesystem::path& logits_path,
                          const std::optional<std::filesystem::path>& labels_path) {
    Array logits = read_array(logits_path);
    if (logits.shape.size() != 2) {
        throw Error(ErrorCode::ShapeMismatch,
                    logits_path.string() + ": logits must be a 2-D N x C array");
    }
    std::optional<std::vector<std::int64_t>> labels;
    if (labels_path) {
        const Array raw = read_array(*labels_path);
        try {
            labels = to_labels(raw);
        } catch (const Error& e) {
            throw Error(e.code(), labels_path->string() + ": " + e.what(), e.row(), e.col());
        }
    }
    try {
        return validate_dataset(to_matrix(logits), std::move(labels),
                                logits_path.stem().string());
    } catch (const Error& e) {
        const bool labels_at_fault =
            labels_path && (e.code() == ErrorCode::LabelOutOfRange ||
                            (e.code() == ErrorCode::ShapeMismatch && !e.row()));
        const auto& culprit = labels_at_fault ? *labels_path : logits_path;
        throw Error(e.code(), culprit.string() + ": " + e.what(), e.row(), e.col());
    }
}

}  // namespace bagcoins
