#include "saddle/cholesky.hpp"

#include <Eigen/Sparse>
#include <string>

#include "saddle/error.hpp"

namespace saddle {

namespace {

Eigen::SparseMatrix<double> to_eigen(const CsrMatrix& m) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(m.nnz());
    for (index_t i = 0; i < m.nrows(); ++i)
        for (index_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k)
            trips.emplace_back(static_cast<int>(i), static_cast<int>(m.col_idx()[k]),
                               m.values()[k]);
    Eigen::SparseMatrix<double> out(m.nrows(), m.ncols());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

} // namespace

struct CholeskyFactor::Impl {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

CholeskyFactor::CholeskyFactor(CholeskyFactor&&) noexcept = default;
CholeskyFactor& CholeskyFactor::operator=(CholeskyFactor&&) noexcept = default;
CholeskyFactor::~CholeskyFactor() = default;

CholeskyFactor cholesky_factor(const CsrMatrix& m) {
    if (m.nrows() != m.ncols())
        throw UsageError("cholesky_factor: matrix must be square");
    if (!m.is_symmetric(1e-12))
        throw UsageError("cholesky_factor: matrix is not symmetric");
    CholeskyFactor f;
    f.impl_ = std::make_unique<CholeskyFactor::Impl>();
    f.dim_ = m.nrows();
    Eigen::SparseMatrix<double> a = to_eigen(m);
    f.impl_->ldlt.compute(a);
    if (f.impl_->ldlt.info() != Eigen::Success)
        throw DefinitenessError("cholesky_factor: factorization failed");
    // LDLT succeeds structurally on indefinite input; positive definiteness
    // is the D > 0 check, reported with the offending pivot.
    const auto& d = f.impl_->ldlt.vectorD();
    const auto& perm = f.impl_->ldlt.permutationP();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!(d(i) > 0.0)) {
            index_t orig = perm.indices()(i);
            throw DefinitenessError("cholesky_factor: non-positive pivot at index " +
                                    std::to_string(orig));
        }
    }
    f.perm_.resize(f.dim_);
    for (index_t i = 0; i < f.dim_; ++i) f.perm_[i] = perm.indices()(i);
    return f;
}

std::vector<double> CholeskyFactor::solve(std::span<const double> rhs) const {
    if (!impl_) throw UsageError("CholeskyFactor: empty factor");
    if (static_cast<index_t>(rhs.size()) != dim_)
        throw UsageError("cholesky_solve: rhs length mismatch");
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), rhs.size());
    Eigen::VectorXd x = impl_->ldlt.solve(b);
    return std::vector<double>(x.data(), x.data() + x.size());
}

std::vector<double> cholesky_solve(const CholeskyFactor& f,
                                   std::span<const double> rhs) {
    return f.solve(rhs);
}

} // namespace saddle
