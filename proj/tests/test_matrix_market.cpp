#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "saddle/error.hpp"
#include "saddle/matrix_market.hpp"
#include "saddle/system.hpp"

using namespace saddle;

namespace {

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& contents) {
        path = std::filesystem::temp_directory_path() /
               ("mm_test_" + std::to_string(counter++) + ".mtx");
        std::ofstream f(path);
        f << contents;
    }
    ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
    static inline int counter = 0;
};

} // namespace

TEST_CASE("coordinate general read") {
    TempFile f("%%MatrixMarket matrix coordinate real general\n"
               "2 2 2\n"
               "1 1 4.0\n"
               "2 2 9.0\n");
    const CsrMatrix m = read_matrix_market(f.path);
    CHECK(m.nrows() == 2);
    CHECK(m.coeff(0, 0) == 4.0);
    CHECK(m.coeff(1, 1) == 9.0);
    CHECK(m.coeff(0, 1) == 0.0);
}

TEST_CASE("symmetric storage expands") {
    TempFile f("%%MatrixMarket matrix coordinate real symmetric\n"
               "2 2 3\n"
               "1 1 2.0\n"
               "2 1 -1.0\n"
               "2 2 2.0\n");
    const CsrMatrix m = read_matrix_market(f.path);
    CHECK(m.coeff(0, 1) == -1.0);
    CHECK(m.coeff(1, 0) == -1.0);
    CHECK(m.is_symmetric());
}

TEST_CASE("array format read") {
    TempFile f("%%MatrixMarket matrix array real general\n"
               "2 2\n"
               "1.0\n3.0\n2.0\n4.0\n"); // column-major
    const CsrMatrix m = read_matrix_market(f.path);
    CHECK(m.coeff(0, 0) == 1.0);
    CHECK(m.coeff(1, 0) == 3.0);
    CHECK(m.coeff(0, 1) == 2.0);
    CHECK(m.coeff(1, 1) == 4.0);
}

TEST_CASE("roundtrip is bitwise for Example 1 C") {
    const BlockSaddleSystem sys = build_example1(4);
    const auto path = std::filesystem::temp_directory_path() / "mm_roundtrip.mtx";
    write_matrix_market(sys.C, path);
    const CsrMatrix back = read_matrix_market(path);
    std::filesystem::remove(path);
    REQUIRE(back.nnz() == sys.C.nnz());
    CHECK(back.row_ptr() == sys.C.row_ptr());
    CHECK(back.col_idx() == sys.C.col_idx());
    CHECK(back.values() == sys.C.values()); // bitwise
}

TEST_CASE("parse errors carry line numbers") {
    TempFile f("%%MatrixMarket matrix coordinate real general\n"
               "2 2 1\n"
               "1 oops 4.0\n");
    try {
        (void)read_matrix_market(f.path);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
}

TEST_CASE("unsupported fields rejected") {
    TempFile f("%%MatrixMarket matrix coordinate pattern general\n"
               "1 1 1\n"
               "1 1\n");
    CHECK_THROWS_AS((void)read_matrix_market(f.path), UsageError);
    TempFile g("%%MatrixMarket matrix coordinate complex general\n"
               "1 1 1\n"
               "1 1 1.0 0.0\n");
    CHECK_THROWS_AS((void)read_matrix_market(g.path), UsageError);
}

TEST_CASE("duplicates are summed") {
    TempFile f("%%MatrixMarket matrix coordinate real general\n"
               "1 1 2\n"
               "1 1 1.5\n"
               "1 1 2.5\n");
    CHECK(read_matrix_market(f.path).coeff(0, 0) == 4.0);
}
