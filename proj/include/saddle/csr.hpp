#ifndef SADDLE_CSR_HPP
#define SADDLE_CSR_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace saddle {

using index_t = std::int64_t;

/// Compressed sparse row matrix, the common carrier for every sparse
/// operator in the library. Rows are sorted by column index and explicit
/// zeros are dropped at construction time.
class CsrMatrix {
  public:
    CsrMatrix() = default;
    CsrMatrix(index_t nrows, index_t ncols, std::vector<index_t> row_ptr,
              std::vector<index_t> col_idx, std::vector<double> values);

    /// Build from unsorted triplets; duplicates are summed, zeros dropped.
    static CsrMatrix from_triplets(index_t nrows, index_t ncols,
                                   std::span<const index_t> rows,
                                   std::span<const index_t> cols,
                                   std::span<const double> vals);

    static CsrMatrix identity(index_t n);
    static CsrMatrix diagonal(std::span<const double> d);

    index_t nrows() const { return nrows_; }
    index_t ncols() const { return ncols_; }
    index_t nnz() const { return static_cast<index_t>(values_.size()); }

    const std::vector<index_t>& row_ptr() const { return row_ptr_; }
    const std::vector<index_t>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    double coeff(index_t i, index_t j) const;
    std::vector<double> diagonal_vector() const;

    CsrMatrix transposed() const;
    CsrMatrix scaled(double s) const;

    /// Scales row i by d[i] (used for diag(A)^{-1} style products).
    CsrMatrix row_scaled(std::span<const double> d) const;

    bool is_symmetric(double rel_tol = 1e-12) const;
    double frobenius_norm() const;
    double max_abs() const;

  private:
    index_t nrows_ = 0;
    index_t ncols_ = 0;
    std::vector<index_t> row_ptr_{0};
    std::vector<index_t> col_idx_;
    std::vector<double> values_;

    void compress_and_validate();
};

/// y = M v. Row-wise accumulation in ascending column order.
std::vector<double> spmv(const CsrMatrix& m, std::span<const double> v);

/// y = M^T v without materializing the transpose.
std::vector<double> spmv_transpose(const CsrMatrix& m, std::span<const double> v);

/// Kronecker product A (x) B.
CsrMatrix kron(const CsrMatrix& a, const CsrMatrix& b);

/// scale * tridiag(lower, diag, upper) of the given size.
CsrMatrix tridiag(double lower, double diag, double upper, index_t size,
                  double scale = 1.0);

/// Sparse matrix product A * B.
CsrMatrix matmul(const CsrMatrix& a, const CsrMatrix& b);

/// A + B (same shape).
CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b);

/// alpha*I + beta*(M M^T), assembled explicitly.
CsrMatrix shifted_gram(const CsrMatrix& m, double alpha, double beta);

/// Concatenation helpers used by system assembly.
CsrMatrix hcat(const std::vector<const CsrMatrix*>& blocks);
CsrMatrix vcat(const std::vector<const CsrMatrix*>& blocks);

} // namespace saddle

#endif
