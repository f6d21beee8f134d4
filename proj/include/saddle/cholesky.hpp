#ifndef SADDLE_CHOLESKY_HPP
#define SADDLE_CHOLESKY_HPP

#include <memory>
#include <span>
#include <vector>

#include "saddle/csr.hpp"

namespace saddle {

/// Sparse Cholesky factorization of an SPD matrix with a fill-reducing
/// permutation. Solves reproduce M^{-1} v to the accuracy of the factorization.
class CholeskyFactor {
  public:
    CholeskyFactor() = default;
    CholeskyFactor(CholeskyFactor&&) noexcept;
    CholeskyFactor& operator=(CholeskyFactor&&) noexcept;
    ~CholeskyFactor();

    index_t matrix_dim() const { return dim_; }
    const std::vector<index_t>& permutation() const { return perm_; }

    std::vector<double> solve(std::span<const double> rhs) const;

  private:
    friend CholeskyFactor cholesky_factor(const CsrMatrix& m);
    struct Impl;
    std::unique_ptr<Impl> impl_;
    index_t dim_ = 0;
    std::vector<index_t> perm_;
};

/// Factors an SPD CsrMatrix. Throws UsageError for non-symmetric input and
/// DefinitenessError (naming the pivot) when a non-positive pivot appears.
CholeskyFactor cholesky_factor(const CsrMatrix& m);

/// M^{-1} rhs for the factored M.
std::vector<double> cholesky_solve(const CholeskyFactor& f,
                                   std::span<const double> rhs);

} // namespace saddle

#endif
