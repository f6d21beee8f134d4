#include "saddle/dense.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "saddle/error.hpp"

namespace saddle {

namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
    Eigen::MatrixXd out(m.nrows(), m.ncols());
    for (index_t i = 0; i < m.nrows(); ++i)
        for (index_t j = 0; j < m.ncols(); ++j) out(i, j) = m(i, j);
    return out;
}

} // namespace

DenseMatrix::DenseMatrix(index_t nrows, index_t ncols, std::vector<double> values)
    : nrows_(nrows), ncols_(ncols), values_(std::move(values)) {
    if (values_.size() != static_cast<size_t>(nrows_) * ncols_)
        throw UsageError("DenseMatrix: values length must be nrows*ncols");
}

DenseMatrix DenseMatrix::from_csr(const CsrMatrix& m) {
    DenseMatrix out(m.nrows(), m.ncols());
    for (index_t i = 0; i < m.nrows(); ++i)
        for (index_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k)
            out(i, m.col_idx()[k]) = m.values()[k];
    return out;
}

DenseMatrix DenseMatrix::identity(index_t n) {
    DenseMatrix out(n, n);
    for (index_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

double DenseMatrix::max_abs() const {
    double s = 0.0;
    for (double v : values_) s = std::max(s, std::abs(v));
    return s;
}

std::vector<std::complex<double>> dense_eigenvalues(const DenseMatrix& m,
                                                    index_t cap) {
    if (m.nrows() != m.ncols())
        throw UsageError("dense_eigenvalues: matrix must be square");
    if (m.nrows() > cap)
        throw CapacityError("dense_eigenvalues: dimension exceeds cap");
    Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(m),
                                           /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NumericalError("dense_eigenvalues: QR iteration did not converge");
    std::vector<std::complex<double>> out(m.nrows());
    for (index_t i = 0; i < m.nrows(); ++i) out[i] = es.eigenvalues()(i);
    return out;
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& m) {
    if (m.nrows() != m.ncols())
        throw UsageError("symmetric_eigenvalues: matrix must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m),
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("symmetric_eigenvalues: solver failed");
    std::vector<double> out(m.nrows());
    for (index_t i = 0; i < m.nrows(); ++i) out[i] = es.eigenvalues()(i);
    return out;
}

std::vector<double> dense_solve(const DenseMatrix& m, std::span<const double> rhs) {
    if (m.nrows() != m.ncols()) throw UsageError("dense_solve: matrix not square");
    if (static_cast<index_t>(rhs.size()) != m.nrows())
        throw UsageError("dense_solve: rhs length mismatch");
    Eigen::MatrixXd a = to_eigen(m);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw RankError("dense_solve: singular matrix");
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), rhs.size());
    Eigen::VectorXd x = lu.solve(b);
    return std::vector<double>(x.data(), x.data() + x.size());
}

index_t dense_rank(const DenseMatrix& m, double rel_tol) {
    Eigen::MatrixXd a = to_eigen(m);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(rel_tol);
    return static_cast<index_t>(qr.rank());
}

DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.ncols() != b.nrows()) throw UsageError("dense_matmul: shape mismatch");
    Eigen::MatrixXd c = to_eigen(a) * to_eigen(b);
    DenseMatrix out(a.nrows(), b.ncols());
    for (index_t i = 0; i < out.nrows(); ++i)
        for (index_t j = 0; j < out.ncols(); ++j) out(i, j) = c(i, j);
    return out;
}

} // namespace saddle
