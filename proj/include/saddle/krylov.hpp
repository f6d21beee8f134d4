#ifndef SADDLE_KRYLOV_HPP
#define SADDLE_KRYLOV_HPP

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "saddle/precond.hpp"
#include "saddle/system.hpp"

namespace saddle {

enum class SolveFlag { Converged, Maxit, TimeLimit, Breakdown };

/// Outcome record for every outer solver. `final_res` is the relative
/// residual of the returned iterate; `err` is filled by callers that know
/// the exact solution.
struct SolveReport {
    index_t iterations = 0;
    std::vector<double> res_history;
    double final_res = 0.0;
    double err = -1.0; // negative means "not evaluated"
    double wall_seconds = 0.0;
    SolveFlag flag = SolveFlag::Converged;
    bool inner_cg_warning = false;
};

/// Matrix-free operator contract used by the solvers.
struct LinearOperator {
    index_t dim = 0;
    std::function<std::vector<double>(std::span<const double>)> apply;
};

LinearOperator csr_operator(const CsrMatrix& m);

/// Conjugate gradient with zero initial guess; stops when the residual norm
/// drops below reduction * ||rhs|| or at maxit.
std::pair<std::vector<double>, SolveReport>
cg(const LinearOperator& op, std::span<const double> rhs, double reduction,
   index_t maxit);

/// Right-preconditioned, non-restarted flexible GMRES with zero initial
/// guess. Accepts an iterate only after recomputing the true relative
/// residual ||b - op x|| / ||b||.
std::pair<std::vector<double>, SolveReport>
fgmres(const LinearOperator& op, const PreconditionerInstance& precond,
       std::span<const double> b, double tol, index_t maxit,
       double time_limit_s = 1000.0);

/// Stationary splitting iteration in defect-correction form
/// x <- x + P^{-1}(b - B x), with exact block solves.
std::pair<BlockVector, SolveReport>
stationary_iterate(const BlockSaddleSystem& sys, const PreconditionerConfig& config,
                   double tol, index_t maxit);

} // namespace saddle

#endif
