#include "saddle/system.hpp"

#include <cmath>
#include <stdexcept>

#include "saddle/cholesky.hpp"
#include "saddle/dense.hpp"
#include "saddle/error.hpp"
#include "saddle/matrix_market.hpp"

namespace saddle {

std::vector<double> BlockVector::flatten() const {
    std::vector<double> out;
    out.reserve(x.size() + y.size() + z.size());
    out.insert(out.end(), x.begin(), x.end());
    out.insert(out.end(), y.begin(), y.end());
    out.insert(out.end(), z.begin(), z.end());
    return out;
}

BlockVector BlockVector::unflatten(std::span<const double> v, index_t n, index_t m,
                                   index_t l) {
    if (static_cast<index_t>(v.size()) != n + m + l)
        throw UsageError("unflatten: vector length does not match n+m+l");
    BlockVector out;
    out.x.assign(v.begin(), v.begin() + n);
    out.y.assign(v.begin() + n, v.begin() + n + m);
    out.z.assign(v.begin() + n + m, v.end());
    return out;
}

void BlockSaddleSystem::validate() const {
    if (A.nrows() != A.ncols()) throw UsageError("block A must be square");
    if (B.ncols() != A.nrows()) throw UsageError("block B column count must match A");
    if (C.ncols() != B.nrows()) throw UsageError("block C column count must match rows of B");
    if (!(n() >= m() && m() >= l()))
        throw UsageError("block sizes must satisfy n >= m >= l");
    if (f.size() != static_cast<std::size_t>(n()) ||
        g.size() != static_cast<std::size_t>(m()) ||
        h.size() != static_cast<std::size_t>(l()))
        throw UsageError("right-hand side block lengths do not match system sizes");
}

std::vector<double> BlockSaddleSystem::rhs(MonolithicForm form) const {
    std::vector<double> out;
    out.reserve(total_dim());
    out.insert(out.end(), f.begin(), f.end());
    if (form == MonolithicForm::SemipositiveB)
        for (double v : g) out.push_back(-v);
    else
        out.insert(out.end(), g.begin(), g.end());
    out.insert(out.end(), h.begin(), h.end());
    return out;
}

BlockSaddleSystem build_example1(index_t p) {
    if (p < 2) throw UsageError("build_example1: p must be at least 2");
    const double h = 1.0 / static_cast<double>(p + 1);
    const CsrMatrix T = tridiag(-1.0, 2.0, -1.0, p, 1.0 / (h * h));
    const CsrMatrix F = tridiag(0.0, 1.0, -1.0, p, 1.0 / h);
    const CsrMatrix I = CsrMatrix::identity(p);

    const CsrMatrix lap = add(kron(I, T), kron(T, I));
    const CsrMatrix zero(lap.nrows(), lap.ncols(), std::vector<index_t>(lap.nrows() + 1, 0),
                         {}, {});
    const CsrMatrix topA = hcat({&lap, &zero});
    const CsrMatrix botA = hcat({&zero, &lap});

    std::vector<double> ed(static_cast<std::size_t>(p));
    for (index_t i = 0; i < p; ++i)
        ed[static_cast<std::size_t>(i)] = 1.0 + static_cast<double>(i * p);
    const CsrMatrix E = CsrMatrix::diagonal(ed);

    const CsrMatrix bx = kron(I, F);
    const CsrMatrix by = kron(F, I);

    BlockSaddleSystem sys;
    sys.A = vcat({&topA, &botA});
    sys.B = hcat({&bx, &by});
    sys.C = kron(E, F);
    sys.f.assign(static_cast<std::size_t>(sys.n()), 0.0);
    sys.g.assign(static_cast<std::size_t>(sys.m()), 0.0);
    sys.h.assign(static_cast<std::size_t>(sys.l()), 0.0);
    sys.validate();
    return sys;
}

BlockSaddleSystem build_example2(index_t p) {
    if (p < 2) throw UsageError("build_example2: p must be at least 2");
    const index_t pt = p * p;       // \tilde p
    const index_t ph = p * (p + 1); // \hat p

    // Ehat: p x (p+1), 2 on the diagonal, -1 on the superdiagonal.
    std::vector<index_t> er, ec;
    std::vector<double> ev;
    for (index_t i = 0; i < p; ++i) {
        er.push_back(i);
        ec.push_back(i);
        ev.push_back(2.0);
        er.push_back(i);
        ec.push_back(i + 1);
        ev.push_back(-1.0);
    }
    const CsrMatrix Ehat = CsrMatrix::from_triplets(p, p + 1, er, ec, ev);
    const CsrMatrix Ip = CsrMatrix::identity(p);
    const CsrMatrix top = kron(Ehat, Ip);
    const CsrMatrix bot = kron(Ip, Ehat);
    const CsrMatrix E = vcat({&top, &bot}); // 2pt x ph

    const CsrMatrix I2 = CsrMatrix::identity(2 * pt);
    const CsrMatrix nI2 = I2.scaled(-1.0);
    const CsrMatrix B = hcat({&E, &nI2, &I2});
    const CsrMatrix C = E.transposed();

    // W = u u^T with u_i = exp(-2 (i/3)^2) (1-based), so
    // 2 W^T W + I = I + 2 ||u||^2 u u^T. Entries of u underflow to zero
    // quickly, keeping the first block sparse.
    std::vector<double> u(static_cast<std::size_t>(ph));
    double ss = 0.0;
    for (index_t i = 0; i < ph; ++i) {
        const double t = static_cast<double>(i + 1) / 3.0;
        u[static_cast<std::size_t>(i)] = std::exp(-2.0 * t * t);
        ss += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    }
    std::vector<index_t> ar, ac;
    std::vector<double> av;
    for (index_t i = 0; i < ph; ++i) {
        ar.push_back(i);
        ac.push_back(i);
        av.push_back(1.0);
    }
    for (index_t i = 0; i < ph; ++i) {
        const double ui = u[static_cast<std::size_t>(i)];
        if (ui == 0.0) break;
        for (index_t j = 0; j < ph; ++j) {
            const double w = 2.0 * ss * ui * u[static_cast<std::size_t>(j)];
            if (std::abs(w) < 1e-300) continue;
            ar.push_back(i);
            ac.push_back(j);
            av.push_back(w);
        }
    }
    const CsrMatrix A1 = CsrMatrix::from_triplets(ph, ph, ar, ac, av);

    std::vector<double> d2(static_cast<std::size_t>(2 * pt));
    std::vector<double> d3(static_cast<std::size_t>(2 * pt));
    for (index_t j = 1; j <= 2 * pt; ++j) {
        d2[static_cast<std::size_t>(j - 1)] =
            (j <= pt) ? 1.0 : 1e-5 * static_cast<double>((j - pt) * (j - pt));
        d3[static_cast<std::size_t>(j - 1)] =
            1e-5 * static_cast<double>((j + pt) * (j + pt));
    }
    const CsrMatrix D2 = CsrMatrix::diagonal(d2);
    const CsrMatrix D3 = CsrMatrix::diagonal(d3);

    const index_t n = ph + 4 * pt;
    auto zero = [](index_t r, index_t c) {
        return CsrMatrix(r, c, std::vector<index_t>(static_cast<std::size_t>(r + 1), 0),
                         {}, {});
    };
    const CsrMatrix z12 = zero(ph, 2 * pt), z21 = zero(2 * pt, ph),
                    z23 = zero(2 * pt, 2 * pt);
    const CsrMatrix r1 = hcat({&A1, &z12, &z12});
    const CsrMatrix r2 = hcat({&z21, &D2, &z23});
    const CsrMatrix r3 = hcat({&z21, &z23, &D3});

    BlockSaddleSystem sys;
    sys.A = vcat({&r1, &r2, &r3});
    sys.B = B;
    sys.C = C;
    if (sys.n() != n) throw NumericalError("build_example2: size bookkeeping error");
    sys.f.assign(static_cast<std::size_t>(sys.n()), 0.0);
    sys.g.assign(static_cast<std::size_t>(sys.m()), 0.0);
    sys.h.assign(static_cast<std::size_t>(sys.l()), 0.0);
    sys.validate();
    return sys;
}

BlockSaddleSystem load_kkt_blocks(const std::filesystem::path& path_a,
                                  const std::filesystem::path& path_b,
                                  const std::filesystem::path& path_c,
                                  index_t probe_cap) {
    BlockSaddleSystem sys;
    sys.A = read_matrix_market(path_a);
    sys.B = read_matrix_market(path_b);
    sys.C = read_matrix_market(path_c);
    sys.f.assign(static_cast<std::size_t>(sys.A.nrows()), 0.0);
    sys.g.assign(static_cast<std::size_t>(sys.B.nrows()), 0.0);
    sys.h.assign(static_cast<std::size_t>(sys.C.nrows()), 0.0);
    sys.validate();

    if (sys.n() <= probe_cap) {
        bool spd = sys.A.is_symmetric(1e-10);
        if (spd) {
            try {
                (void)cholesky_factor(sys.A);
            } catch (const DefinitenessError&) {
                spd = false;
            }
        }
        sys.diagnostics.a_spd = spd;
    }
    auto rank_probe = [probe_cap](const CsrMatrix& m) -> std::optional<bool> {
        if (m.nrows() > probe_cap || m.ncols() > probe_cap) return std::nullopt;
        DenseMatrix d(m.nrows(), m.ncols());
        for (index_t i = 0; i < m.nrows(); ++i)
            for (index_t k = m.row_ptr()[static_cast<std::size_t>(i)];
                 k < m.row_ptr()[static_cast<std::size_t>(i) + 1]; ++k)
                d(i, m.col_idx()[static_cast<std::size_t>(k)]) =
                    m.values()[static_cast<std::size_t>(k)];
        return dense_rank(d) == m.nrows();
    };
    sys.diagnostics.b_full_row_rank = rank_probe(sys.B);
    sys.diagnostics.c_full_row_rank = rank_probe(sys.C);
    return sys;
}

BlockSaddleSystem rhs_for_all_ones(BlockSaddleSystem sys, MonolithicForm form) {
    const std::vector<double> ones_n(static_cast<std::size_t>(sys.n()), 1.0);
    const std::vector<double> ones_m(static_cast<std::size_t>(sys.m()), 1.0);
    const std::vector<double> ones_l(static_cast<std::size_t>(sys.l()), 1.0);

    // Row blocks of the symmetric form: f = A x + B^T y, g = B x + C^T z,
    // h = C y. The semipositive form only flips the sign of the g row, and
    // rhs() re-applies that flip, so the stored blocks are form-independent.
    (void)form;
    auto ax = spmv(sys.A, ones_n);
    auto bty = spmv_transpose(sys.B, ones_m);
    auto bx = spmv(sys.B, ones_n);
    auto ctz = spmv_transpose(sys.C, ones_l);
    auto cy = spmv(sys.C, ones_m);
    for (index_t i = 0; i < sys.n(); ++i)
        sys.f[static_cast<std::size_t>(i)] =
            ax[static_cast<std::size_t>(i)] + bty[static_cast<std::size_t>(i)];
    for (index_t i = 0; i < sys.m(); ++i)
        sys.g[static_cast<std::size_t>(i)] =
            bx[static_cast<std::size_t>(i)] + ctz[static_cast<std::size_t>(i)];
    sys.h = cy;
    return sys;
}

CsrMatrix assemble_monolithic(const BlockSaddleSystem& sys, MonolithicForm form) {
    const index_t n = sys.n(), m = sys.m(), l = sys.l();
    const double s = (form == MonolithicForm::SemipositiveB) ? -1.0 : 1.0;
    std::vector<index_t> rows, cols;
    std::vector<double> vals;
    auto push_block = [&](const CsrMatrix& blk, index_t r0, index_t c0, double scale) {
        for (index_t i = 0; i < blk.nrows(); ++i)
            for (index_t k = blk.row_ptr()[static_cast<std::size_t>(i)];
                 k < blk.row_ptr()[static_cast<std::size_t>(i) + 1]; ++k) {
                rows.push_back(r0 + i);
                cols.push_back(c0 + blk.col_idx()[static_cast<std::size_t>(k)]);
                vals.push_back(scale * blk.values()[static_cast<std::size_t>(k)]);
            }
    };
    push_block(sys.A, 0, 0, 1.0);
    push_block(sys.B.transposed(), 0, n, 1.0);
    push_block(sys.B, n, 0, s);
    push_block(sys.C.transposed(), n, n + m, s);
    push_block(sys.C, n + m, n, 1.0);
    return CsrMatrix::from_triplets(n + m + l, n + m + l, rows, cols, vals);
}

} // namespace saddle
