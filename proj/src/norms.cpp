#include "saddle/norms.hpp"

#include <cmath>

#include "saddle/cholesky.hpp"
#include "saddle/error.hpp"

namespace saddle {

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void normalize(std::vector<double>& v) {
    double n = norm2(v);
    if (n == 0.0) throw NumericalError("power iteration: zero vector");
    for (double& x : v) x /= n;
}

} // namespace

Norm2Estimate norm2_estimate(const CsrMatrix& m, double tol, index_t maxit) {
    if (m.nnz() == 0) throw UsageError("norm2_estimate: zero matrix");
    // Iterate on the smaller Gram matrix.
    const bool use_mmt = m.nrows() <= m.ncols();
    index_t dim = use_mmt ? m.nrows() : m.ncols();
    std::vector<double> v(dim, 1.0);
    normalize(v);
    Norm2Estimate est;
    double prev = 0.0;
    for (index_t it = 1; it <= maxit; ++it) {
        std::vector<double> w =
            use_mmt ? spmv(m, spmv_transpose(m, v)) : spmv_transpose(m, spmv(m, v));
        double rayleigh = 0.0;
        for (index_t i = 0; i < dim; ++i) rayleigh += v[i] * w[i];
        double sigma = std::sqrt(std::max(rayleigh, 0.0));
        est.value = sigma;
        est.iterations = static_cast<int>(it);
        if (sigma > 0.0 && std::abs(sigma - prev) <= tol * sigma) {
            est.converged = true;
            return est;
        }
        prev = sigma;
        normalize(w);
        v = std::move(w);
    }
    return est;
}

Norm2Estimate smallest_singular_estimate(const CsrMatrix& m, double tol,
                                         index_t maxit) {
    if (m.nnz() == 0) throw UsageError("smallest_singular_estimate: zero matrix");
    const bool use_mmt = m.nrows() <= m.ncols();
    CsrMatrix gram = use_mmt ? matmul(m, m.transposed())
                             : matmul(m.transposed(), m);
    CholeskyFactor f = cholesky_factor(gram);
    index_t dim = gram.nrows();
    std::vector<double> v(dim, 1.0);
    normalize(v);
    Norm2Estimate est;
    double prev = 0.0;
    for (index_t it = 1; it <= maxit; ++it) {
        std::vector<double> w = f.solve(v);
        // Rayleigh quotient of the Gram matrix at the current iterate.
        std::vector<double> gv = spmv(gram, v);
        double rayleigh = 0.0;
        for (index_t i = 0; i < dim; ++i) rayleigh += v[i] * gv[i];
        double sigma = std::sqrt(std::max(rayleigh, 0.0));
        est.value = sigma;
        est.iterations = static_cast<int>(it);
        if (sigma > 0.0 && std::abs(sigma - prev) <= tol * sigma) {
            est.converged = true;
            return est;
        }
        prev = sigma;
        normalize(w);
        v = std::move(w);
    }
    return est;
}

} // namespace saddle
