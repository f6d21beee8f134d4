#include <doctest.h>

#include <cmath>
#include <random>

#include "saddle/csr.hpp"
#include "saddle/dense.hpp"
#include "saddle/error.hpp"

using namespace saddle;

namespace {

CsrMatrix random_csr(index_t rows, index_t cols, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<index_t> ri, ci;
    std::vector<double> v;
    for (index_t i = 0; i < rows; ++i)
        for (index_t j = 0; j < cols; ++j)
            if (dist(rng) > 0.0) {
                ri.push_back(i);
                ci.push_back(j);
                v.push_back(dist(rng));
            }
    return CsrMatrix::from_triplets(rows, cols, ri, ci, v);
}

std::vector<double> random_vec(index_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = dist(rng);
    return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

TEST_CASE("csr invariants after from_triplets") {
    // Duplicates summed, zeros dropped, columns sorted.
    const std::vector<index_t> ri{0, 0, 1, 0, 1};
    const std::vector<index_t> ci{1, 0, 1, 1, 0};
    const std::vector<double> v{2.0, 1.0, 3.0, -2.0, 0.0};
    const CsrMatrix m = CsrMatrix::from_triplets(2, 2, ri, ci, v);
    CHECK(m.nnz() == 2); // (0,1) cancels to zero and is dropped
    CHECK(m.coeff(0, 0) == 1.0);
    CHECK(m.coeff(1, 1) == 3.0);
    CHECK(m.coeff(0, 1) == 0.0);
    CHECK(m.row_ptr().front() == 0);
    CHECK(m.row_ptr().back() == m.nnz());
    for (index_t i = 0; i < m.nrows(); ++i)
        for (index_t k = m.row_ptr()[i]; k + 1 < m.row_ptr()[i + 1]; ++k)
            CHECK(m.col_idx()[k] < m.col_idx()[k + 1]);
}

TEST_CASE("spmv basics") {
    const std::vector<double> v123{1, 2, 3};
    CHECK(spmv(CsrMatrix::identity(3), v123) == v123);

    const CsrMatrix t = tridiag(-1, 2, -1, 3);
    const std::vector<double> ones{1, 1, 1};
    CHECK(spmv(t, ones) == std::vector<double>{1, 0, 1});

    const std::vector<double> wrong{1, 2};
    CHECK_THROWS_AS((void)spmv(t, wrong), UsageError);
}

TEST_CASE("spmv against dense oracle for Example 1's T") {
    const index_t p = 4;
    const double h = 1.0 / 5.0;
    const CsrMatrix T = tridiag(-1, 2, -1, p, 1.0 / (h * h));
    // Dense oracle assembled entrywise.
    DenseMatrix d(p, p);
    for (index_t i = 0; i < p; ++i) {
        d(i, i) = 2.0 / (h * h);
        if (i > 0) d(i, i - 1) = -1.0 / (h * h);
        if (i + 1 < p) d(i, i + 1) = -1.0 / (h * h);
    }
    std::vector<double> e(static_cast<std::size_t>(p), 0.0);
    e[0] = 1.0;
    const std::vector<double> col = spmv(T, e);
    for (index_t i = 0; i < p; ++i) CHECK(col[i] == d(i, 0));
}

TEST_CASE("spmv_transpose") {
    const std::vector<double> v{4, 5, 6};
    CHECK(spmv_transpose(CsrMatrix::identity(3), v) == v);

    std::mt19937 rng(7);
    const CsrMatrix m = random_csr(5, 3, rng);
    for (int rep = 0; rep < 20; ++rep) {
        const std::vector<double> x = random_vec(3, rng);
        const std::vector<double> u = random_vec(5, rng);
        const double lhs = dot(spmv(m, x), u);
        const double rhs = dot(x, spmv_transpose(m, u));
        const double scale = m.frobenius_norm() * std::sqrt(dot(x, x) * dot(u, u));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(scale, 1.0));
    }

    // F^T against a materialized transpose.
    const CsrMatrix F = tridiag(0, 1, -1, 4, 5.0);
    const CsrMatrix Ft = F.transposed();
    std::vector<double> e(4, 0.0);
    e[0] = 1.0;
    CHECK(spmv_transpose(F, e) == spmv(Ft, e));
}

TEST_CASE("kron") {
    const CsrMatrix m = tridiag(-1, 2, -1, 2);
    const CsrMatrix blk = kron(CsrMatrix::identity(2), m);
    CHECK(blk.nrows() == 4);
    CHECK(blk.coeff(0, 0) == 2.0);
    CHECK(blk.coeff(0, 1) == -1.0);
    CHECK(blk.coeff(0, 2) == 0.0);
    CHECK(blk.coeff(2, 2) == 2.0);
    CHECK(blk.coeff(2, 3) == -1.0);
    CHECK(blk.coeff(1, 2) == 0.0);

    const std::vector<double> d12{1, 2};
    const CsrMatrix dk = kron(CsrMatrix::diagonal(d12), CsrMatrix::identity(2));
    const std::vector<double> want{1, 1, 2, 2};
    CHECK(dk.diagonal_vector() == want);

    // kron(E, F) for p=2 against the dense oracle.
    const double h = 1.0 / 3.0;
    const std::vector<double> ed{1, 3};
    const CsrMatrix E = CsrMatrix::diagonal(ed);
    const CsrMatrix F = tridiag(0, 1, -1, 2, 1.0 / h);
    const CsrMatrix K = kron(E, F);
    DenseMatrix dense(4, 4);
    const double ef[2] = {1.0, 3.0};
    for (index_t b = 0; b < 2; ++b) {
        dense(2 * b + 0, 2 * b + 0) = ef[b] * 3.0;
        dense(2 * b + 0, 2 * b + 1) = ef[b] * -3.0;
        dense(2 * b + 1, 2 * b + 1) = ef[b] * 3.0;
    }
    for (index_t i = 0; i < 4; ++i)
        for (index_t j = 0; j < 4; ++j)
            CHECK(K.coeff(i, j) == doctest::Approx(dense(i, j)).epsilon(1e-14));
}

TEST_CASE("kron mixed-product property") {
    std::mt19937 rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        const CsrMatrix a = random_csr(2, 3, rng);
        const CsrMatrix b = random_csr(3, 2, rng);
        const CsrMatrix c = random_csr(3, 2, rng);
        const CsrMatrix d = random_csr(2, 3, rng);
        const CsrMatrix lhs = matmul(kron(a, b), kron(c, d));
        const CsrMatrix rhs = kron(matmul(a, c), matmul(b, d));
        REQUIRE(lhs.nrows() == rhs.nrows());
        for (index_t i = 0; i < lhs.nrows(); ++i)
            for (index_t j = 0; j < lhs.ncols(); ++j)
                CHECK(lhs.coeff(i, j) ==
                      doctest::Approx(rhs.coeff(i, j)).epsilon(1e-12));
    }
}

TEST_CASE("tridiag") {
    const CsrMatrix a = tridiag(-1, 2, -1, 2);
    CHECK(a.coeff(0, 0) == 2.0);
    CHECK(a.coeff(0, 1) == -1.0);
    CHECK(a.coeff(1, 0) == -1.0);
    CHECK(a.coeff(1, 1) == 2.0);

    const CsrMatrix one = tridiag(0, 1, -1, 1);
    CHECK(one.nnz() == 1);
    CHECK(one.coeff(0, 0) == 1.0);

    const CsrMatrix f = tridiag(0, 1, -1, 3, 5.0);
    CHECK(f.coeff(0, 0) == 5.0);
    CHECK(f.coeff(0, 1) == -5.0);
    CHECK(f.coeff(1, 0) == 0.0);
    CHECK(f.coeff(2, 2) == 5.0);

    CHECK_THROWS_AS(tridiag(0, 1, -1, 0), UsageError);
}

TEST_CASE("matmul, add, shifted_gram, concatenation") {
    std::mt19937 rng(3);
    const CsrMatrix a = random_csr(4, 5, rng);
    const CsrMatrix b = random_csr(5, 3, rng);
    const CsrMatrix ab = matmul(a, b);
    const DenseMatrix da = DenseMatrix::from_csr(a);
    const DenseMatrix db = DenseMatrix::from_csr(b);
    const DenseMatrix dab = dense_matmul(da, db);
    for (index_t i = 0; i < 4; ++i)
        for (index_t j = 0; j < 3; ++j)
            CHECK(ab.coeff(i, j) == doctest::Approx(dab(i, j)).epsilon(1e-13));

    const CsrMatrix sum = add(a, a.scaled(-1.0));
    CHECK(sum.nnz() == 0);

    const CsrMatrix g = shifted_gram(a, 0.5, 2.0);
    const CsrMatrix gref = add(matmul(a, a.transposed()).scaled(2.0),
                               CsrMatrix::identity(4).scaled(0.5));
    for (index_t i = 0; i < 4; ++i)
        for (index_t j = 0; j < 4; ++j)
            CHECK(g.coeff(i, j) == doctest::Approx(gref.coeff(i, j)).epsilon(1e-13));
    CHECK(g.is_symmetric());

    const CsrMatrix h = hcat({&a, &a});
    CHECK(h.ncols() == 10);
    CHECK(h.coeff(2, 7) == a.coeff(2, 2));
    const CsrMatrix v = vcat({&b, &b});
    CHECK(v.nrows() == 10);
    CHECK(v.coeff(7, 1) == b.coeff(2, 1));
}
