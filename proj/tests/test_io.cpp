#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "bagcoins/io.hpp"
#include "bagcoins/random.hpp"
#include "doctest.h"

using namespace bagcoins;
namespace fs = std::filesystem;

namespace {

const fs::path kData = BAGCOINS_TEST_DATA;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("bagcoins_io_" + std::to_string(Stream(std::random_device{}())()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ErrorCode read_error(const fs::path& path) {
    try {
        read_array(path);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected read_array to fail for " << path);
    return ErrorCode::Io;
}

ErrorCode parse_error(const std::string& bytes) {
    try {
        parse_npy(std::span<const char>(bytes.data(), bytes.size()));
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected parse_npy to fail");
    return ErrorCode::Io;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("reads arrays written by numpy") {
    const Array f4 = read_array(kData / "numpy_f4_2x3.npy");
    CHECK(f4.dtype == Dtype::Float32);
    CHECK(f4.shape == std::vector<std::size_t>{2, 3});
    const auto& v = std::get<std::vector<double>>(f4.data);
    CHECK(v[1] == -2.25);
    CHECK(v[3] == 0.10000000149011612);  // float32(0.1), upcast exactly
    CHECK(v[4] == 0.0010000000474974513);

    const Array f8 = read_array(kData / "numpy_f8_2x2.npy");
    CHECK(f8.dtype == Dtype::Float64);
    const auto& w = std::get<std::vector<double>>(f8.data);
    CHECK(w[0] == 0.1);
    CHECK(w[2] == 1e300);
    CHECK(std::signbit(w[3]));

    const Array i8 = read_array(kData / "numpy_i8_5.npy");
    CHECK(i8.dtype == Dtype::Int64);
    CHECK(i8.shape == std::vector<std::size_t>{5});
    CHECK(to_labels(i8) == std::vector<std::int64_t>{0, 3, 9, 1, 2});
}

TEST_CASE("rejects unsupported numpy files with distinct errors") {
    CHECK(read_error(kData / "numpy_fortran.npy") == ErrorCode::UnsupportedLayout);
    CHECK(read_error(kData / "numpy_3d.npy") == ErrorCode::UnsupportedLayout);
    CHECK(read_error(kData / "numpy_u1.npy") == ErrorCode::UnsupportedDtype);
    CHECK(read_error(kData / "numpy_be.npy") == ErrorCode::UnsupportedDtype);
    CHECK(read_error(kData / "does_not_exist.npy") == ErrorCode::Io);
}

TEST_CASE("npy header and payload corruption") {
    const std::string good = encode_npy(make_array(Matrix(2, 3, 1.0)));
    CHECK(parse_error("not an npy file") == ErrorCode::BadMagic);

    std::string wrong_version = good;
    wrong_version[6] = '\x02';
    CHECK(parse_error(wrong_version) == ErrorCode::UnsupportedVersion);

    CHECK(parse_error(good.substr(0, good.size() - 1)) == ErrorCode::TruncatedPayload);
    CHECK(parse_error(good + "x") == ErrorCode::ShapeMismatch);
    CHECK(parse_error(good.substr(0, 40)) == ErrorCode::MalformedHeader);

    std::string unknown_key = good;
    const auto pos = unknown_key.find("fortran_order");
    unknown_key.replace(pos, 13, "fortran_xrder");
    CHECK(parse_error(unknown_key) == ErrorCode::MalformedHeader);
}

TEST_CASE("writer emits an aligned v1.0 header") {
    const std::string bytes = encode_npy(make_array(Matrix(2, 3, 0.5)));
    CHECK(bytes.substr(0, 8) == std::string("\x93NUMPY\x01\x00", 8));
    const std::size_t header_len =
        static_cast<unsigned char>(bytes[8]) | (static_cast<unsigned char>(bytes[9]) << 8);
    CHECK((10 + header_len) % 64 == 0);
    CHECK(bytes[10 + header_len - 1] == '\n');
    CHECK(bytes.find("{'descr': '<f8', 'fortran_order': False, 'shape': (2, 3), }") == 10);
    CHECK(bytes.size() == 10 + header_len + 6 * 8);

    const std::vector<std::int64_t> labels{4, 5, 6};
    const std::string lbytes = encode_npy(make_array(labels));
    CHECK(lbytes.find("'shape': (3,)") != std::string::npos);
    CHECK(lbytes.find("'<i8'") != std::string::npos);
}

TEST_CASE("round trips are bitwise (property)") {
    TempDir dir;
    Stream rng(55);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t rows = 1 + rng.below(40);
        const std::size_t cols = 1 + rng.below(12);
        Matrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            for (double& v : m.row(r)) v = std::ldexp(rng.normal(), static_cast<int>(rng.below(200)) - 100);
        }
        for (Dtype dtype : {Dtype::Float64, Dtype::Float32}) {
            const Array a = make_array(m, dtype);
            const fs::path p = dir.path / "a.npy";
            write_array(a, p, ArrayFormat::Npy);
            const Array back = read_array(p);
            CHECK(back == a);
            CHECK(encode_npy(back) == slurp(p));
        }
        std::vector<std::int64_t> labels(rows);
        for (auto& l : labels) l = static_cast<std::int64_t>(rng()) ;
        const fs::path lp = dir.path / "l.npy";
        write_array(labels, lp, ArrayFormat::Npy);
        CHECK(to_labels(read_array(lp)) == labels);

        // CSV keeps values exactly through 17 significant digits.
        const fs::path cp = dir.path / "m.csv";
        write_array(m, cp, ArrayFormat::Csv);
        CHECK(to_matrix(read_array(cp)) == m);
    }
}

TEST_CASE("csv parsing") {
    const Array a = parse_csv("1.0,2.0\n3.0,4.0");
    CHECK(a.shape == std::vector<std::size_t>{2, 2});
    CHECK(to_matrix(a)(1, 0) == 3.0);

    const Array commented = parse_csv("# header comment\n\n 1e-3 , +2\r\n");
    CHECK(to_matrix(commented)(0, 0) == 1e-3);
    CHECK(to_matrix(commented)(0, 1) == 2.0);

    CHECK(to_labels(parse_csv("0\n2\n1\n")) == std::vector<std::int64_t>{0, 2, 1});
    CHECK_THROWS_AS(to_labels(parse_csv("0.5\n")), Error);
    CHECK_THROWS_AS(to_labels(parse_csv("0,1\n2,3\n")), Error);

    try {
        parse_csv("1,2\n3\n");
        FAIL("ragged rows accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedCsv);
        CHECK(e.row() == 1u);
    }
    CHECK_THROWS_AS(parse_csv("1,abc\n"), Error);
    CHECK_THROWS_AS(parse_csv("\n\n"), Error);
}

TEST_CASE("empty arrays are rejected on write") {
    TempDir dir;
    try {
        write_array(Matrix(0, 3), dir.path / "e.npy", ArrayFormat::Npy);
        FAIL("empty matrix written");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyArray);
    }
    CHECK_THROWS_AS(write_array(std::vector<std::int64_t>{}, dir.path / "e.csv", ArrayFormat::Csv),
                    Error);
}

TEST_CASE("unwritable path") {
    try {
        write_array(Matrix(1, 2, 1.0), "/nonexistent-dir/x.npy", ArrayFormat::Npy);
        FAIL("write to missing directory succeeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Io);
    }
}

TEST_CASE("load_dataset validates and names the culprit file") {
    TempDir dir;
    Matrix m(3, 4, 0.0);
    m(1, 2) = 1.0;
    write_array(make_array(m, Dtype::Float32), dir.path / "logits.npy", ArrayFormat::Npy);
    write_array(std::vector<std::int64_t>{0, 2, 3}, dir.path / "labels.npy", ArrayFormat::Npy);
    write_array(std::vector<std::int64_t>{0, 4, 3}, dir.path / "bad_labels.npy", ArrayFormat::Npy);

    const auto ds = load_dataset(dir.path / "logits.npy", dir.path / "labels.npy");
    CHECK(ds.size() == 3);
    CHECK(ds.num_classes() == 4);
    CHECK(ds.logits()(1, 2) == 1.0);

    try {
        load_dataset(dir.path / "logits.npy", dir.path / "bad_labels.npy");
        FAIL("out-of-range label accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LabelOutOfRange);
        CHECK(std::string(e.what()).find("bad_labels.npy") != std::string::npos);
        CHECK(e.row() == 1u);
    }

    write_array(std::vector<std::int64_t>{1, 2}, dir.path / "vec.npy", ArrayFormat::Npy);
    CHECK_THROWS_AS(load_dataset(dir.path / "vec.npy"), Error);
}
