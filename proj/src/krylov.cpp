#include "saddle/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "saddle/error.hpp"

namespace saddle {

namespace {

double nrm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

LinearOperator csr_operator(const CsrMatrix& m) {
    if (m.nrows() != m.ncols())
        throw UsageError("csr_operator: matrix must be square");
    return {m.nrows(),
            [&m](std::span<const double> v) { return spmv(m, v); }};
}

std::pair<std::vector<double>, SolveReport>
cg(const LinearOperator& op, std::span<const double> rhs, double reduction,
   index_t maxit) {
    if (!(reduction > 0.0 && reduction < 1.0))
        throw UsageError("cg: reduction must lie in (0,1)");
    if (maxit < 1) throw UsageError("cg: maxit must be at least 1");
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport rep;
    std::vector<double> x(rhs.size(), 0.0);
    std::vector<double> r(rhs.begin(), rhs.end());
    const double r0 = nrm2(r);
    rep.res_history.push_back(1.0);
    if (r0 == 0.0) {
        rep.res_history.back() = 0.0;
        rep.final_res = 0.0;
        rep.wall_seconds = seconds_since(t0);
        return {x, rep};
    }
    std::vector<double> p = r;
    double rs = r0 * r0;
    for (index_t k = 0; k < maxit; ++k) {
        if (std::sqrt(rs) <= reduction * r0) break;
        const std::vector<double> ap = op.apply(p);
        const double pap = dot(p, ap);
        if (!std::isfinite(pap) || pap == 0.0) {
            rep.flag = SolveFlag::Breakdown;
            break;
        }
        const double alpha = rs / pap;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        const double rs_next = dot(r, r);
        if (!std::isfinite(rs_next)) {
            rep.flag = SolveFlag::Breakdown;
            break;
        }
        const double beta = rs_next / rs;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
        rs = rs_next;
        ++rep.iterations;
        rep.res_history.push_back(std::sqrt(rs) / r0);
    }
    rep.final_res = rep.res_history.back();
    if (rep.flag != SolveFlag::Breakdown)
        rep.flag = (rep.final_res <= reduction) ? SolveFlag::Converged
                                                : SolveFlag::Maxit;
    rep.wall_seconds = seconds_since(t0);
    return {x, rep};
}

std::pair<std::vector<double>, SolveReport>
fgmres(const LinearOperator& op, const PreconditionerInstance& precond,
       std::span<const double> b, double tol, index_t maxit,
       double time_limit_s) {
    if (!(tol > 0.0)) throw UsageError("fgmres: tol must be positive");
    if (maxit < 1) throw UsageError("fgmres: maxit must be at least 1");
    if (static_cast<index_t>(b.size()) != op.dim)
        throw UsageError("fgmres: right-hand side does not match operator dim");
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t N = b.size();
    SolveReport rep;

    const double nb = nrm2(b);
    std::vector<double> x(N, 0.0);
    if (nb == 0.0) {
        rep.res_history.push_back(0.0);
        rep.final_res = 0.0;
        rep.wall_seconds = seconds_since(t0);
        return {x, rep};
    }
    rep.res_history.push_back(1.0);
    if (1.0 <= tol) {
        rep.final_res = 1.0;
        rep.wall_seconds = seconds_since(t0);
        return {x, rep};
    }

    const std::size_t cap = static_cast<std::size_t>(maxit);
    std::vector<std::vector<double>> V, Z;
    V.reserve(cap + 1);
    Z.reserve(cap);
    std::vector<std::vector<double>> H; // column j holds H(0..j+1, j)
    std::vector<double> g{nb};
    std::vector<double> cs(cap, 0.0), sn(cap, 0.0);
    {
        std::vector<double> v0(b.begin(), b.end());
        for (double& v : v0) v /= nb;
        V.push_back(std::move(v0));
    }

    auto assemble = [&](std::size_t k) {
        // Solve the k x k triangular system and form x = Z y.
        std::vector<double> y(k, 0.0);
        for (std::size_t i = k; i-- > 0;) {
            double s = g[i];
            for (std::size_t j = i + 1; j < k; ++j) s -= H[j][i] * y[j];
            y[i] = s / H[i][i];
        }
        std::vector<double> xs(N, 0.0);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < N; ++i) xs[i] += y[j] * Z[j][i];
        return xs;
    };
    auto true_res = [&](const std::vector<double>& xs) {
        const std::vector<double> ax = op.apply(xs);
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double d = b[i] - ax[i];
            s += d * d;
        }
        return std::sqrt(s) / nb;
    };

    for (std::size_t j = 0; j < cap; ++j) {
        bool warn = false;
        Z.push_back(precond.apply_flat(V[j], &warn));
        if (warn) rep.inner_cg_warning = true;
        std::vector<double> w = op.apply(Z[j]);
        if (!finite(w)) {
            rep.flag = SolveFlag::Breakdown;
            break;
        }
        const double pre_norm = nrm2(w);
        std::vector<double> hcol(j + 2, 0.0);
        for (std::size_t i = 0; i <= j; ++i) {
            const double hij = dot(V[i], w);
            hcol[i] = hij;
            for (std::size_t t = 0; t < N; ++t) w[t] -= hij * V[i][t];
        }
        if (nrm2(w) < 0.7 * pre_norm) {
            for (std::size_t i = 0; i <= j; ++i) {
                const double corr = dot(V[i], w);
                hcol[i] += corr;
                for (std::size_t t = 0; t < N; ++t) w[t] -= corr * V[i][t];
            }
        }
        const double hsub = nrm2(w);
        hcol[j + 1] = hsub;
        const bool lucky = (hsub == 0.0);
        if (!lucky) {
            std::vector<double> vnext = w;
            for (double& v : vnext) v /= hsub;
            V.push_back(std::move(vnext));
        }

        // Apply previous Givens rotations, then compute the new one.
        for (std::size_t i = 0; i < j; ++i) {
            const double t = cs[i] * hcol[i] + sn[i] * hcol[i + 1];
            hcol[i + 1] = -sn[i] * hcol[i] + cs[i] * hcol[i + 1];
            hcol[i] = t;
        }
        const double d = std::hypot(hcol[j], hcol[j + 1]);
        if (d == 0.0 || !std::isfinite(d)) {
            rep.flag = SolveFlag::Breakdown;
            H.push_back(std::move(hcol));
            ++rep.iterations;
            break;
        }
        cs[j] = hcol[j] / d;
        sn[j] = hcol[j + 1] / d;
        hcol[j] = d;
        hcol[j + 1] = 0.0;
        g.push_back(-sn[j] * g[j]);
        g[j] *= cs[j];
        H.push_back(std::move(hcol));
        ++rep.iterations;

        const double est = std::abs(g[j + 1]) / nb;
        rep.res_history.push_back(est);
        if (est <= tol || lucky) {
            x = assemble(j + 1);
            const double tr = true_res(x);
            rep.res_history.back() = tr;
            if (tr <= tol) {
                rep.final_res = tr;
                rep.flag = SolveFlag::Converged;
                rep.wall_seconds = seconds_since(t0);
                return {x, rep};
            }
            if (lucky) {
                rep.final_res = tr;
                rep.flag = SolveFlag::Breakdown;
                rep.wall_seconds = seconds_since(t0);
                return {x, rep};
            }
        }
        if (seconds_since(t0) > time_limit_s) {
            x = assemble(j + 1);
            rep.final_res = true_res(x);
            rep.res_history.back() = rep.final_res;
            rep.flag = SolveFlag::TimeLimit;
            rep.wall_seconds = seconds_since(t0);
            return {x, rep};
        }
    }
    const std::size_t k = H.size();
    if (k > 0 && rep.flag != SolveFlag::Breakdown) {
        x = assemble(k);
        rep.final_res = true_res(x);
        rep.res_history.back() = rep.final_res;
        rep.flag =
            (rep.final_res <= tol) ? SolveFlag::Converged : SolveFlag::Maxit;
    } else if (k > 0) {
        // Breakdown: return the best iterate from completed columns.
        const std::size_t done = k - 1;
        if (done > 0) {
            x = assemble(done);
            rep.final_res = true_res(x);
        } else {
            rep.final_res = 1.0;
        }
        rep.res_history.push_back(rep.final_res);
    }
    rep.wall_seconds = seconds_since(t0);
    return {x, rep};
}

std::pair<BlockVector, SolveReport>
stationary_iterate(const BlockSaddleSystem& sys, const PreconditionerConfig& config,
                   double tol, index_t maxit) {
    if (config.inner_policy.mode != InnerSolvePolicy::Mode::ExactCholesky)
        throw UsageError("stationary_iterate requires the exact inner policy");
    const auto t0 = std::chrono::steady_clock::now();
    const PreconditionerInstance P =
        build_preconditioner(sys, PreconditionerKind::PTriangular, config);
    const CsrMatrix Bm = assemble_monolithic(sys, MonolithicForm::SemipositiveB);
    const std::vector<double> b = sys.rhs(MonolithicForm::SemipositiveB);
    const double nb = nrm2(b);

    SolveReport rep;
    std::vector<double> x(b.size(), 0.0);
    if (nb == 0.0) {
        rep.res_history.push_back(0.0);
        rep.final_res = 0.0;
        rep.wall_seconds = seconds_since(t0);
        return {BlockVector::unflatten(x, sys.n(), sys.m(), sys.l()), rep};
    }
    double res = 1.0;
    rep.res_history.push_back(res);
    for (index_t k = 0; k < maxit && res > tol; ++k) {
        const std::vector<double> ax = spmv(Bm, x);
        std::vector<double> r(b.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - ax[i];
        const std::vector<double> dx = P.apply_flat(r);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
        const std::vector<double> ax2 = spmv(Bm, x);
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = b[i] - ax2[i];
            s += d * d;
        }
        res = std::sqrt(s) / nb;
        ++rep.iterations;
        rep.res_history.push_back(res);
        if (!std::isfinite(res) || res > 1e12) {
            rep.flag = SolveFlag::Breakdown;
            break;
        }
    }
    rep.final_res = rep.res_history.back();
    if (rep.flag != SolveFlag::Breakdown)
        rep.flag = (rep.final_res <= tol) ? SolveFlag::Converged : SolveFlag::Maxit;
    rep.wall_seconds = seconds_since(t0);
    return {BlockVector::unflatten(x, sys.n(), sys.m(), sys.l()), rep};
}

} // namespace saddle
