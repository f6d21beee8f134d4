#ifndef SADDLE_DENSE_HPP
#define SADDLE_DENSE_HPP

#include <complex>
#include <span>
#include <vector>

#include "saddle/csr.hpp"

namespace saddle {

/// Small dense row-major matrix for spectral work and desk-scale oracles.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(index_t nrows, index_t ncols)
        : nrows_(nrows), ncols_(ncols),
          values_(static_cast<size_t>(nrows) * ncols, 0.0) {}
    DenseMatrix(index_t nrows, index_t ncols, std::vector<double> values);

    static DenseMatrix from_csr(const CsrMatrix& m);
    static DenseMatrix identity(index_t n);

    index_t nrows() const { return nrows_; }
    index_t ncols() const { return ncols_; }
    double& operator()(index_t i, index_t j) {
        return values_[static_cast<size_t>(i) * ncols_ + j];
    }
    double operator()(index_t i, index_t j) const {
        return values_[static_cast<size_t>(i) * ncols_ + j];
    }
    const std::vector<double>& values() const { return values_; }

    double max_abs() const;

  private:
    index_t nrows_ = 0;
    index_t ncols_ = 0;
    std::vector<double> values_;
};

inline constexpr index_t kDenseEigenCap = 2000;

/// All eigenvalues of a square matrix (dense QR-style eigensolver).
/// Throws CapacityError above `cap`.
std::vector<std::complex<double>> dense_eigenvalues(const DenseMatrix& m,
                                                    index_t cap = kDenseEigenCap);

/// Eigenvalues of a symmetric matrix, ascending.
std::vector<double> symmetric_eigenvalues(const DenseMatrix& m);

/// Direct dense solve (partial-pivot LU); throws RankError when singular.
std::vector<double> dense_solve(const DenseMatrix& m, std::span<const double> rhs);

/// Row-reduction rank with relative tolerance, for desk-scale rank probes.
index_t dense_rank(const DenseMatrix& m, double rel_tol = 1e-10);

DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b);

} // namespace saddle

#endif
