#include "saddle/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "saddle/error.hpp"
#include "saddle/norms.hpp"

namespace saddle {

namespace {

/// Smallest singular value of M from a dense symmetric eigensolve of the
/// smaller Gram matrix. Returns false when the matrix exceeds dim_cap.
bool gram_sigma_min(const CsrMatrix& m, index_t dim_cap, double& out) {
    const bool use_rows = m.nrows() <= m.ncols();
    const index_t dim = use_rows ? m.nrows() : m.ncols();
    if (dim > dim_cap) return false;
    const CsrMatrix gram = use_rows ? matmul(m, m.transposed())
                                    : matmul(m.transposed(), m);
    const std::vector<double> eig =
        symmetric_eigenvalues(DenseMatrix::from_csr(gram));
    out = std::sqrt(std::max(eig.front(), 0.0));
    return true;
}

} // namespace

ExtremalStats extremal_stats(const BlockSaddleSystem& sys, index_t dim_cap) {
    sys.validate();
    ExtremalStats st;
    const Norm2Estimate nb = norm2_estimate(sys.B);
    st.sigma_max_B = nb.value;
    st.sigma_max_B_ok = nb.converged;
    const Norm2Estimate nc = norm2_estimate(sys.C);
    st.sigma_max_C = nc.value;
    st.sigma_max_C_ok = nc.converged;
    st.sigma_min_BT_ok = gram_sigma_min(sys.B, dim_cap, st.sigma_min_BT);
    st.sigma_min_CT_ok = gram_sigma_min(sys.C, dim_cap, st.sigma_min_CT);
    if (sys.n() <= dim_cap) {
        const std::vector<double> eig =
            symmetric_eigenvalues(DenseMatrix::from_csr(sys.A));
        st.lambda_min_A = eig.front();
        st.lambda_min_A_ok = true;
    }
    return st;
}

SufficiencyReport sufficient_condition(const ExtremalStats& stats, double alpha,
                                       double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw UsageError("sufficient_condition: alpha and beta must be positive");
    SufficiencyReport rep;
    rep.evaluable = stats.sigma_max_B_ok && stats.sigma_min_BT_ok &&
                    stats.sigma_max_C_ok && stats.sigma_min_CT_ok &&
                    stats.lambda_min_A_ok && stats.lambda_min_A > 0.0;
    if (!rep.evaluable) return rep;
    rep.P_cap = 2.0 * stats.sigma_max_B * stats.sigma_max_B / stats.lambda_min_A;
    rep.p_bound = stats.sigma_max_C * stats.sigma_max_C /
                      (alpha + beta * stats.sigma_min_CT * stats.sigma_min_CT) +
                  rep.P_cap;
    rep.q_bound = 4.0 * (alpha + beta * stats.sigma_min_BT * stats.sigma_min_BT);
    rep.holds = rep.p_bound < rep.q_bound;
    return rep;
}

ParamSelection alpha_tilde(const ExtremalStats& stats) {
    if (!stats.lambda_min_A_ok || !(stats.lambda_min_A > 0.0))
        throw DefinitenessError("alpha_tilde: lambda_min(A) must be positive");
    if (!stats.sigma_max_B_ok || !stats.sigma_min_BT_ok || !stats.sigma_max_C_ok ||
        !stats.sigma_min_CT_ok)
        throw UsageError("alpha_tilde: extremal stats incomplete");
    const double P =
        2.0 * stats.sigma_max_B * stats.sigma_max_B / stats.lambda_min_A;
    const double tB = 1.0 + stats.sigma_min_BT * stats.sigma_min_BT;
    const double tC = 1.0 + stats.sigma_min_CT * stats.sigma_min_CT;
    const double smaxC2 = stats.sigma_max_C * stats.sigma_max_C;
    ParamSelection sel;
    sel.discriminant = P * P * tC * tC + 16.0 * tB * tC * smaxC2;
    sel.alpha_tilde = (P * tC + std::sqrt(sel.discriminant)) / (8.0 * tB * tC);
    sel.alpha = sel.alpha_tilde;
    const double a = sel.alpha_tilde;
    const double q = -4.0 * tB * tC * a * a + P * tC * a + smaxC2;
    const double scale = std::max({smaxC2, P * tC * a, 1.0});
    if (std::abs(q) > 1e-6 * scale)
        throw NumericalError("alpha_tilde: q(alpha~) self-check failed");
    return sel;
}

double beta_rule(const BlockSaddleSystem& sys, double alpha, BetaRule rule,
                 double manual_value) {
    if (rule == BetaRule::Manual) {
        if (!(manual_value > 0.0))
            throw UsageError("beta_rule: manual beta must be positive");
        return manual_value;
    }
    if (!(alpha > 0.0)) throw UsageError("beta_rule: alpha must be positive");
    const double nB = norm2_estimate(sys.B).value;
    const double nC = norm2_estimate(sys.C).value;
    if (nB == 0.0 || nC == 0.0)
        throw UsageError("beta_rule: zero block norm");
    switch (rule) {
    case BetaRule::Averaged:
        return 0.5 * alpha * (1.0 / (nC * nC) + 1.0 / (nB * nB));
    case BetaRule::COnly:
        return alpha / (nC * nC);
    case BetaRule::BOnly:
        return alpha / (nB * nB);
    default:
        throw UsageError("beta_rule: unknown rule");
    }
}

DenseMatrix iteration_matrix_dense(const BlockSaddleSystem& sys,
                                   const PreconditionerConfig& config,
                                   index_t dim_cap) {
    const index_t dim = sys.total_dim();
    if (dim > dim_cap)
        throw CapacityError("iteration_matrix_dense: dimension exceeds cap");
    PreconditionerConfig exact_cfg = config;
    exact_cfg.inner_policy.mode = InnerSolvePolicy::Mode::ExactCholesky;
    const PreconditionerInstance P =
        build_preconditioner(sys, PreconditionerKind::PTriangular, exact_cfg);
    const CsrMatrix Bm = assemble_monolithic(sys, MonolithicForm::SemipositiveB);
    DenseMatrix G(dim, dim);
    std::vector<double> e(static_cast<std::size_t>(dim), 0.0);
    for (index_t j = 0; j < dim; ++j) {
        e[static_cast<std::size_t>(j)] = 1.0;
        const std::vector<double> v = P.apply_flat(spmv(Bm, e));
        for (index_t i = 0; i < dim; ++i)
            G(i, j) = (i == j ? 1.0 : 0.0) - v[static_cast<std::size_t>(i)];
        e[static_cast<std::size_t>(j)] = 0.0;
    }
    return G;
}

SpectralReport spectral_report(const DenseMatrix& m, OperatorTag tag) {
    SpectralReport rep;
    rep.operator_tag = tag;
    rep.eigenvalues = dense_eigenvalues(m);
    for (const auto& lam : rep.eigenvalues) {
        rep.rho = std::max(rep.rho, std::abs(lam));
        if (tag == OperatorTag::PreconditionedPB)
            rep.max_dist_from_one =
                std::max(rep.max_dist_from_one, std::abs(lam - 1.0));
    }
    return rep;
}

bool lemma1_root_test(const RootTestInput& q) {
    return std::abs(q.c_coef) < 1.0 && std::abs(q.b_coef) < 1.0 + q.c_coef;
}

} // namespace saddle
