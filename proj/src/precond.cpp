#include "saddle/precond.hpp"

#include <cmath>
#include <string>

#include "saddle/dense.hpp"
#include "saddle/error.hpp"
#include "saddle/krylov.hpp"

namespace saddle {

namespace {

std::vector<double> sub(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

std::vector<double> addv(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

std::vector<double> neg(std::vector<double> a) {
    for (double& v : a) v = -v;
    return a;
}

CsrMatrix dense_to_csr(const DenseMatrix& d) {
    std::vector<index_t> rows, cols;
    std::vector<double> vals;
    for (index_t i = 0; i < d.nrows(); ++i)
        for (index_t j = 0; j < d.ncols(); ++j)
            if (d(i, j) != 0.0) {
                rows.push_back(i);
                cols.push_back(j);
                vals.push_back(d(i, j));
            }
    return CsrMatrix::from_triplets(d.nrows(), d.ncols(), rows, cols, vals);
}

CholeskyFactor chol_named(const CsrMatrix& m, const std::string& name) {
    try {
        return cholesky_factor(m);
    } catch (const DefinitenessError& e) {
        throw DefinitenessError("block " + name + ": " + e.what());
    } catch (const UsageError& e) {
        throw UsageError("block " + name + ": " + e.what());
    }
}

CsrMatrix symmetrized(const CsrMatrix& m) {
    return add(m, m.transposed()).scaled(0.5);
}

} // namespace

SchurApprox build_schur(const BlockSaddleSystem& sys, SchurMode mode) {
    const CsrMatrix& A = sys.A;
    const CsrMatrix& B = sys.B;
    if (mode == SchurMode::DiagApprox) {
        const std::vector<double> d = A.diagonal_vector();
        for (std::size_t i = 0; i < d.size(); ++i)
            if (!(d[i] > 0.0))
                throw DefinitenessError("diag(A) has a non-positive entry at index " +
                                        std::to_string(i));
        // Column-scale B by 1/diag(A), then multiply by B^T.
        std::vector<double> vals = B.values();
        for (std::size_t k = 0; k < vals.size(); ++k)
            vals[k] /= d[static_cast<std::size_t>(B.col_idx()[k])];
        const CsrMatrix Bd(B.nrows(), B.ncols(), B.row_ptr(), B.col_idx(),
                           std::move(vals));
        return {symmetrized(matmul(Bd, B.transposed())), mode};
    }
    if (B.nrows() > kDenseEigenCap)
        throw CapacityError("exact Schur complement capped at dense scale");
    const CholeskyFactor cholA = chol_named(A, "A");
    const index_t m = B.nrows(), n = B.ncols();
    DenseMatrix S(m, m);
    std::vector<double> bj(static_cast<std::size_t>(n));
    for (index_t j = 0; j < m; ++j) {
        std::fill(bj.begin(), bj.end(), 0.0);
        for (index_t k = B.row_ptr()[static_cast<std::size_t>(j)];
             k < B.row_ptr()[static_cast<std::size_t>(j) + 1]; ++k)
            bj[static_cast<std::size_t>(B.col_idx()[static_cast<std::size_t>(k)])] =
                B.values()[static_cast<std::size_t>(k)];
        const std::vector<double> xj = cholA.solve(bj);
        const std::vector<double> col = spmv(B, xj);
        for (index_t i = 0; i < m; ++i) S(i, j) = col[static_cast<std::size_t>(i)];
    }
    for (index_t i = 0; i < m; ++i)
        for (index_t j = i + 1; j < m; ++j) {
            const double v = 0.5 * (S(i, j) + S(j, i));
            S(i, j) = v;
            S(j, i) = v;
        }
    return {dense_to_csr(S), mode};
}

PreconditionerInstance build_preconditioner(const BlockSaddleSystem& sys,
                                            PreconditionerKind kind,
                                            const PreconditionerConfig& config) {
    sys.validate();
    PreconditionerInstance inst;
    inst.kind_ = kind;
    inst.config_ = config;
    inst.n_ = sys.n();
    inst.m_ = sys.m();
    inst.l_ = sys.l();
    if (kind == PreconditionerKind::Identity) return inst;

    inst.A_ = sys.A;
    inst.B_ = sys.B;
    inst.C_ = sys.C;
    const bool exact =
        config.inner_policy.mode == InnerSolvePolicy::Mode::ExactCholesky;

    if (kind == PreconditionerKind::PTriangular || kind == PreconditionerKind::PD1) {
        if (!(config.alpha > 0.0) || !(config.beta > 0.0))
            throw UsageError("alpha and beta must be positive for this kind");
        if (exact) {
            inst.M2_ = shifted_gram(sys.B, config.alpha, config.beta);
            inst.M3_ = shifted_gram(sys.C, config.alpha, config.beta);
            inst.chol_A_ =
                std::make_unique<CholeskyFactor>(chol_named(sys.A, "A"));
            inst.chol_M2_ = std::make_unique<CholeskyFactor>(
                chol_named(inst.M2_, "alpha*I + beta*B*B^T"));
            inst.chol_M3_ = std::make_unique<CholeskyFactor>(
                chol_named(inst.M3_, "alpha*I + beta*C*C^T"));
        }
        return inst;
    }

    // Schur-based baselines P_D2, P_1, P_2, P_3.
    inst.S_ = build_schur(sys, config.schur_mode).S;
    try {
        inst.chol_S_ = std::make_unique<CholeskyFactor>(cholesky_factor(inst.S_));
    } catch (const DefinitenessError& e) {
        throw RankError(std::string("Schur approximation S is singular: ") + e.what());
    }
    if (sys.l() > kDenseEigenCap)
        throw CapacityError("C S^{-1} C^T must be formed explicitly; size exceeds cap");
    {
        const index_t l = sys.l(), m = sys.m();
        DenseMatrix csc(l, l);
        std::vector<double> cj(static_cast<std::size_t>(m));
        for (index_t j = 0; j < l; ++j) {
            std::fill(cj.begin(), cj.end(), 0.0);
            for (index_t k = sys.C.row_ptr()[static_cast<std::size_t>(j)];
                 k < sys.C.row_ptr()[static_cast<std::size_t>(j) + 1]; ++k)
                cj[static_cast<std::size_t>(
                    sys.C.col_idx()[static_cast<std::size_t>(k)])] =
                    sys.C.values()[static_cast<std::size_t>(k)];
            const std::vector<double> xj = inst.chol_S_->solve(cj);
            const std::vector<double> col = spmv(sys.C, xj);
            for (index_t i = 0; i < l; ++i)
                csc(i, j) = col[static_cast<std::size_t>(i)];
        }
        for (index_t i = 0; i < l; ++i)
            for (index_t j = i + 1; j < l; ++j) {
                const double v = 0.5 * (csc(i, j) + csc(j, i));
                csc(i, j) = v;
                csc(j, i) = v;
            }
        inst.CSC_ = dense_to_csr(csc);
    }
    try {
        inst.chol_CSC_ =
            std::make_unique<CholeskyFactor>(cholesky_factor(inst.CSC_));
    } catch (const DefinitenessError& e) {
        throw RankError(std::string("C S^{-1} C^T is singular: ") + e.what());
    }

    if (exact || kind == PreconditionerKind::P3)
        inst.chol_A_ = std::make_unique<CholeskyFactor>(chol_named(sys.A, "A"));

    if (kind == PreconditionerKind::P3) {
        // Eliminating v1 from the coupled (A, B^T; B, -S) block yields the
        // SPD system (S + B A^{-1} B^T) v2 = B A^{-1} w1 - w2; that matrix
        // is formed densely and factored once. These solves stay exact even
        // under the CG policy because the elimination assumes exact A^{-1}.
        if (sys.m() > kDenseEigenCap)
            throw CapacityError("P3 coupled block exceeds the dense cap");
        const CsrMatrix Sexact = build_schur(sys, SchurMode::Exact).S;
        inst.chol_coupled_ = std::make_unique<CholeskyFactor>(
            chol_named(add(inst.S_, Sexact), "S + B A^{-1} B^T"));
    }
    return inst;
}

std::vector<double> PreconditionerInstance::solve_A(std::span<const double> rhs,
                                                    bool* warn) const {
    if (chol_A_) return chol_A_->solve(rhs);
    auto [x, rep] = cg(csr_operator(A_), rhs, config_.inner_policy.cg_reduction,
                       config_.inner_policy.cg_maxit);
    if (rep.flag != SolveFlag::Converged && warn) *warn = true;
    return x;
}

std::vector<double> PreconditionerInstance::solve_gram(const CsrMatrix& rect,
                                                       const CholeskyFactor* chol,
                                                       std::span<const double> rhs,
                                                       bool* warn) const {
    if (chol) return chol->solve(rhs);
    const double alpha = config_.alpha, beta = config_.beta;
    LinearOperator op{rect.nrows(), [&rect, alpha, beta](std::span<const double> v) {
                          std::vector<double> y = spmv(rect, spmv_transpose(rect, v));
                          for (std::size_t i = 0; i < y.size(); ++i)
                              y[i] = alpha * v[i] + beta * y[i];
                          return y;
                      }};
    auto [x, rep] = cg(op, rhs, config_.inner_policy.cg_reduction,
                       config_.inner_policy.cg_maxit);
    if (rep.flag != SolveFlag::Converged && warn) *warn = true;
    return x;
}

std::vector<double> PreconditionerInstance::solve_sparse(const CsrMatrix& mat,
                                                         const CholeskyFactor* chol,
                                                         std::span<const double> rhs,
                                                         bool* warn) const {
    if (config_.inner_policy.mode == InnerSolvePolicy::Mode::ExactCholesky && chol)
        return chol->solve(rhs);
    auto [x, rep] = cg(csr_operator(mat), rhs, config_.inner_policy.cg_reduction,
                       config_.inner_policy.cg_maxit);
    if (rep.flag != SolveFlag::Converged && warn) *warn = true;
    return x;
}

BlockVector PreconditionerInstance::apply(const BlockVector& w,
                                          bool* inner_cg_warning) const {
    if (static_cast<index_t>(w.x.size()) != n_ ||
        static_cast<index_t>(w.y.size()) != m_ ||
        static_cast<index_t>(w.z.size()) != l_)
        throw UsageError("apply: block vector does not match preconditioner sizes");
    BlockVector v;
    switch (kind_) {
    case PreconditionerKind::Identity:
        return w;
    case PreconditionerKind::PTriangular: {
        v.z = solve_gram(C_, chol_M3_.get(), w.z, inner_cg_warning);
        v.y = solve_gram(B_, chol_M2_.get(),
                         addv(w.y, spmv_transpose(C_, v.z)), inner_cg_warning);
        v.x = solve_A(sub(w.x, spmv_transpose(B_, v.y)), inner_cg_warning);
        return v;
    }
    case PreconditionerKind::PD1:
        v.x = solve_A(w.x, inner_cg_warning);
        v.y = solve_gram(B_, chol_M2_.get(), w.y, inner_cg_warning);
        v.z = solve_gram(C_, chol_M3_.get(), w.z, inner_cg_warning);
        return v;
    case PreconditionerKind::PD2:
        v.x = solve_A(w.x, inner_cg_warning);
        v.y = solve_sparse(S_, chol_S_.get(), w.y, inner_cg_warning);
        v.z = solve_sparse(CSC_, chol_CSC_.get(), w.z, inner_cg_warning);
        return v;
    case PreconditionerKind::P1:
    case PreconditionerKind::P2: {
        v.x = solve_A(w.x, inner_cg_warning);
        v.z = solve_sparse(CSC_, chol_CSC_.get(), w.z, inner_cg_warning);
        if (kind_ == PreconditionerKind::P2) v.z = neg(std::move(v.z));
        // Middle row B v1 - S v2 + C^T v3 = w2.
        std::vector<double> rhs =
            sub(addv(spmv(B_, v.x), spmv_transpose(C_, v.z)), w.y);
        v.y = solve_sparse(S_, chol_S_.get(), rhs, inner_cg_warning);
        return v;
    }
    case PreconditionerKind::P3: {
        v.z = neg(solve_sparse(CSC_, chol_CSC_.get(), w.z, inner_cg_warning));
        const std::vector<double> t = chol_A_->solve(w.x);
        v.y = chol_coupled_->solve(sub(spmv(B_, t), w.y));
        v.x = chol_A_->solve(sub(w.x, spmv_transpose(B_, v.y)));
        return v;
    }
    }
    throw UsageError("apply: unknown preconditioner kind");
}

std::vector<double> PreconditionerInstance::apply_flat(std::span<const double> w,
                                                       bool* inner_cg_warning) const {
    if (kind_ == PreconditionerKind::Identity)
        return std::vector<double>(w.begin(), w.end());
    return apply(BlockVector::unflatten(w, n_, m_, l_), inner_cg_warning).flatten();
}

namespace {
BlockVector checked_apply(const PreconditionerInstance& inst, PreconditionerKind want,
                          const char* name, const BlockVector& w) {
    if (inst.kind() != want)
        throw UsageError(std::string(name) + ": preconditioner kind mismatch");
    return inst.apply(w);
}
} // namespace

BlockVector apply_P_triangular(const PreconditionerInstance& inst, const BlockVector& w) {
    return checked_apply(inst, PreconditionerKind::PTriangular, "apply_P_triangular", w);
}
BlockVector apply_P_D1(const PreconditionerInstance& inst, const BlockVector& w) {
    return checked_apply(inst, PreconditionerKind::PD1, "apply_P_D1", w);
}
BlockVector apply_P_D2(const PreconditionerInstance& inst, const BlockVector& w) {
    return checked_apply(inst, PreconditionerKind::PD2, "apply_P_D2", w);
}
BlockVector apply_P1(const PreconditionerInstance& inst, const BlockVector& w) {
    return checked_apply(inst, PreconditionerKind::P1, "apply_P1", w);
}
BlockVector apply_P2(const PreconditionerInstance& inst, const BlockVector& w) {
    return checked_apply(inst, PreconditionerKind::P2, "apply_P2", w);
}
BlockVector apply_P3(const PreconditionerInstance& inst, const BlockVector& w) {
    return checked_apply(inst, PreconditionerKind::P3, "apply_P3", w);
}

} // namespace saddle
