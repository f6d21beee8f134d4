#ifndef SADDLE_ANALYSIS_HPP
#define SADDLE_ANALYSIS_HPP

#include <complex>
#include <vector>

#include "saddle/dense.hpp"
#include "saddle/precond.hpp"
#include "saddle/system.hpp"

namespace saddle {

/// Extremal singular/eigen statistics of the system blocks. sigma_max values
/// come from power iteration; sigma_min and lambda_min require a dense
/// symmetric eigensolve and are flagged unevaluated above the cap.
struct ExtremalStats {
    double sigma_max_B = 0.0;
    double sigma_min_BT = 0.0;
    double sigma_max_C = 0.0;
    double sigma_min_CT = 0.0;
    double lambda_min_A = 0.0;
    bool sigma_max_B_ok = false;
    bool sigma_min_BT_ok = false;
    bool sigma_max_C_ok = false;
    bool sigma_min_CT_ok = false;
    bool lambda_min_A_ok = false;
};

/// The two sides of the sufficient convergence condition, and the aggregate
/// P = 2 sigma_max^2(B^T) / lambda_min(A).
struct SufficiencyReport {
    double p_bound = 0.0; // left side
    double q_bound = 0.0; // right side
    bool holds = false;
    bool evaluable = false;
    double P_cap = 0.0;
};

enum class BetaRule { Averaged, COnly, BOnly, Manual };

struct ParamSelection {
    double alpha = 0.0;
    double alpha_tilde = 0.0;
    double discriminant = 0.0;
    double beta = 0.0;
    BetaRule beta_rule = BetaRule::Averaged;
};

enum class OperatorTag { IterationG, PreconditionedPB, PreconditionedPA };

struct SpectralReport {
    std::vector<std::complex<double>> eigenvalues;
    double rho = 0.0;
    OperatorTag operator_tag = OperatorTag::IterationG;
    double max_dist_from_one = 0.0; // filled for PreconditionedPB
};

struct RootTestInput {
    double b_coef = 0.0;
    double c_coef = 0.0;
};

ExtremalStats extremal_stats(const BlockSaddleSystem& sys,
                             index_t dim_cap = kDenseEigenCap);

/// Evaluates sigma_max^2(C)/(alpha + beta sigma_min^2(C^T))
///   + 2 sigma_max^2(B^T)/lambda_min(A) < 4 (alpha + beta sigma_min^2(B^T)).
SufficiencyReport sufficient_condition(const ExtremalStats& stats, double alpha,
                                       double beta);

/// The positive root alpha~ of q(alpha) = -4(1+s_B^2)(1+s_C^2) a^2
///   + P (1+s_C^2) a + sigma_max^2(C), with a q(alpha~)=0 self-check.
ParamSelection alpha_tilde(const ExtremalStats& stats);

double beta_rule(const BlockSaddleSystem& sys, double alpha, BetaRule rule,
                 double manual_value = 0.0);

/// G = I - P^{-1} B assembled column-by-column from preconditioner applies.
DenseMatrix iteration_matrix_dense(const BlockSaddleSystem& sys,
                                   const PreconditionerConfig& config,
                                   index_t dim_cap = kDenseEigenCap);

SpectralReport spectral_report(const DenseMatrix& m, OperatorTag tag);

/// Lemma: both roots of x^2 - b x + c = 0 lie strictly inside the unit
/// circle iff |c| < 1 and |b| < 1 + c.
bool lemma1_root_test(const RootTestInput& q);

} // namespace saddle

#endif
