#ifndef SADDLE_NORMS_HPP
#define SADDLE_NORMS_HPP

#include "saddle/csr.hpp"

namespace saddle {

struct Norm2Estimate {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Largest singular value of M by power iteration on the smaller of
/// M^T M / M M^T. Deterministic all-ones start vector; converged when
/// successive Rayleigh-quotient square roots agree to rel. tol.
Norm2Estimate norm2_estimate(const CsrMatrix& m, double tol = 1e-8,
                             index_t maxit = 500);

/// Smallest singular value of M via inverse power iteration with a Cholesky
/// factorization of the smaller Gram matrix. Desk scale only: the Gram matrix
/// must be SPD (full-rank M) and factorizable.
Norm2Estimate smallest_singular_estimate(const CsrMatrix& m, double tol = 1e-8,
                                         index_t maxit = 500);

} // namespace saddle

#endif
