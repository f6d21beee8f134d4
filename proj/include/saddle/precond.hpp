#ifndef SADDLE_PRECOND_HPP
#define SADDLE_PRECOND_HPP

#include <memory>
#include <span>
#include <vector>

#include "saddle/cholesky.hpp"
#include "saddle/csr.hpp"
#include "saddle/system.hpp"

namespace saddle {

enum class PreconditionerKind { Identity, PTriangular, PD1, PD2, P1, P2, P3 };

enum class SchurMode { DiagApprox, Exact };

/// Inner block-solve policy: exact sparse Cholesky or inexact CG with a
/// residual-reduction stop.
struct InnerSolvePolicy {
    enum class Mode { ExactCholesky, Cg };
    Mode mode = Mode::ExactCholesky;
    double cg_reduction = 1e-3;
    index_t cg_maxit = 100;
};

struct PreconditionerConfig {
    double alpha = 1.0;
    double beta = 1.0;
    InnerSolvePolicy inner_policy;
    SchurMode schur_mode = SchurMode::DiagApprox;
};

/// Schur complement approximation used by the baseline preconditioners:
/// S = B diag(A)^{-1} B^T or the exact dense S = B A^{-1} B^T.
struct SchurApprox {
    CsrMatrix S;
    SchurMode mode = SchurMode::DiagApprox;
};

SchurApprox build_schur(const BlockSaddleSystem& sys, SchurMode mode);

/// A built preconditioner: kind, parameters and the prepared block
/// operators/factorizations. Immutable after build; apply is reentrant.
class PreconditionerInstance {
  public:
    PreconditionerKind kind() const { return kind_; }
    const PreconditionerConfig& config() const { return config_; }
    index_t n() const { return n_; }
    index_t m() const { return m_; }
    index_t l() const { return l_; }
    index_t dim() const { return n_ + m_ + l_; }

    /// Applies the inverse of the preconditioner. When inner CG fails to
    /// reach its reduction within its budget, the result is still returned
    /// and *inner_cg_warning is set.
    BlockVector apply(const BlockVector& w, bool* inner_cg_warning = nullptr) const;
    std::vector<double> apply_flat(std::span<const double> w,
                                   bool* inner_cg_warning = nullptr) const;

  private:
    friend PreconditionerInstance build_preconditioner(const BlockSaddleSystem&,
                                                       PreconditionerKind,
                                                       const PreconditionerConfig&);
    PreconditionerKind kind_ = PreconditionerKind::Identity;
    PreconditionerConfig config_;
    index_t n_ = 0, m_ = 0, l_ = 0;

    CsrMatrix A_, B_, C_;
    CsrMatrix M2_, M3_; // alpha I + beta B B^T / C C^T when assembled
    CsrMatrix S_, CSC_; // Schur approximation and C S^{-1} C^T
    std::unique_ptr<CholeskyFactor> chol_A_, chol_M2_, chol_M3_, chol_S_,
        chol_CSC_, chol_coupled_;

    std::vector<double> solve_A(std::span<const double> rhs, bool* warn) const;
    std::vector<double> solve_gram(const CsrMatrix& rect, const CholeskyFactor* chol,
                                   std::span<const double> rhs, bool* warn) const;
    std::vector<double> solve_sparse(const CsrMatrix& mat, const CholeskyFactor* chol,
                                     std::span<const double> rhs, bool* warn) const;
};

PreconditionerInstance build_preconditioner(const BlockSaddleSystem& sys,
                                            PreconditionerKind kind,
                                            const PreconditionerConfig& config);

/// Kind-checked apply entry points.
BlockVector apply_P_triangular(const PreconditionerInstance& inst, const BlockVector& w);
BlockVector apply_P_D1(const PreconditionerInstance& inst, const BlockVector& w);
BlockVector apply_P_D2(const PreconditionerInstance& inst, const BlockVector& w);
BlockVector apply_P1(const PreconditionerInstance& inst, const BlockVector& w);
BlockVector apply_P2(const PreconditionerInstance& inst, const BlockVector& w);
BlockVector apply_P3(const PreconditionerInstance& inst, const BlockVector& w);

} // namespace saddle

#endif
