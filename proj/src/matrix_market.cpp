#include "saddle/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "saddle/error.hpp"

namespace saddle {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, long line,
                       const std::string& what) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

} // namespace

CsrMatrix read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string() + ": cannot open file");

    std::string line;
    long lineno = 0;
    if (!std::getline(in, line)) fail(path, 1, "empty file");
    ++lineno;

    std::istringstream hdr(line);
    std::string banner, object, format, field, symmetry;
    hdr >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix")
        fail(path, lineno, "expected '%%MatrixMarket matrix' header");
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format != "coordinate" && format != "array")
        fail(path, lineno, "unsupported format '" + format + "'");
    if (field == "pattern" || field == "complex")
        throw UsageError(path.string() + ": unsupported field '" + field + "'");
    if (field != "real" && field != "integer" && field != "double")
        fail(path, lineno, "unsupported field '" + field + "'");
    const bool symmetric = symmetry == "symmetric";
    const bool skew = symmetry == "skew-symmetric";
    if (!symmetric && !skew && symmetry != "general")
        fail(path, lineno, "unsupported symmetry '" + symmetry + "'");

    auto next_data_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            size_t pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos) continue;
            if (line[pos] == '%') continue;
            return true;
        }
        return false;
    };

    if (!next_data_line()) fail(path, lineno, "missing size line");
    std::istringstream sz(line);
    index_t nrows = 0, ncols = 0, nnz = 0;
    if (format == "coordinate") {
        if (!(sz >> nrows >> ncols >> nnz))
            fail(path, lineno, "bad coordinate size line");
    } else {
        if (!(sz >> nrows >> ncols)) fail(path, lineno, "bad array size line");
    }
    if (nrows < 0 || ncols < 0) fail(path, lineno, "negative dimension");

    std::vector<index_t> rows, cols;
    std::vector<double> vals;
    auto push = [&](index_t i, index_t j, double v) {
        rows.push_back(i);
        cols.push_back(j);
        vals.push_back(v);
        if ((symmetric || skew) && i != j) {
            rows.push_back(j);
            cols.push_back(i);
            vals.push_back(skew ? -v : v);
        }
    };

    if (format == "coordinate") {
        for (index_t k = 0; k < nnz; ++k) {
            if (!next_data_line()) fail(path, lineno, "unexpected end of entries");
            std::istringstream es(line);
            index_t i, j;
            double v;
            if (!(es >> i >> j >> v)) fail(path, lineno, "malformed entry");
            if (i < 1 || i > nrows || j < 1 || j > ncols)
                fail(path, lineno, "entry index out of range");
            if ((symmetric || skew) && j > i)
                fail(path, lineno, "symmetric storage must be lower-triangular");
            push(i - 1, j - 1, v);
        }
    } else {
        // Array format stores columns contiguously; symmetric variants store
        // the lower triangle of each column.
        for (index_t j = 0; j < ncols; ++j) {
            index_t i0 = (symmetric || skew) ? j + (skew ? 1 : 0) : 0;
            for (index_t i = i0; i < nrows; ++i) {
                if (!next_data_line())
                    fail(path, lineno, "unexpected end of array entries");
                std::istringstream es(line);
                double v;
                if (!(es >> v)) fail(path, lineno, "malformed array entry");
                push(i, j, v);
            }
        }
    }
    return CsrMatrix::from_triplets(nrows, ncols, rows, cols, vals);
}

void write_matrix_market(const CsrMatrix& m, const std::filesystem::path& path) {
    std::FILE* out = std::fopen(path.string().c_str(), "w");
    if (!out) throw ParseError(path.string() + ": cannot open file for writing");
    std::fprintf(out, "%%%%MatrixMarket matrix coordinate real general\n");
    std::fprintf(out, "%" PRId64 " %" PRId64 " %" PRId64 "\n", m.nrows(), m.ncols(),
                 m.nnz());
    for (index_t i = 0; i < m.nrows(); ++i)
        for (index_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k)
            std::fprintf(out, "%" PRId64 " %" PRId64 " %.17g\n", i + 1,
                         m.col_idx()[k] + 1, m.values()[k]);
    std::fclose(out);
}

} // namespace saddle
