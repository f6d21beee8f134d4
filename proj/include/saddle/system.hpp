#ifndef SADDLE_SYSTEM_HPP
#define SADDLE_SYSTEM_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "saddle/csr.hpp"

namespace saddle {

/// Which monolithic matrix to assemble from the blocks: the symmetric
/// indefinite form, or the semipositive-real form with the sign-flipped
/// second block row.
enum class MonolithicForm { SymmetricA, SemipositiveB };

/// Partitioned vector (x; y; z) matching a block system.
struct BlockVector {
    std::vector<double> x, y, z;

    std::vector<double> flatten() const;
    static BlockVector unflatten(std::span<const double> v, index_t n, index_t m,
                                 index_t l);
};

/// Advisory diagnostics from loading external blocks. Probes flag rather
/// than refuse: deficient systems still load and may be run.
struct SystemDiagnostics {
    std::optional<bool> a_spd;
    std::optional<bool> b_full_row_rank;
    std::optional<bool> c_full_row_rank;
};

/// The (A, B, C, f, g, h) blocks of a three-by-three block saddle point
/// system with n >= m >= l.
struct BlockSaddleSystem {
    CsrMatrix A; // n x n, symmetric
    CsrMatrix B; // m x n
    CsrMatrix C; // l x m
    std::vector<double> f, g, h;
    SystemDiagnostics diagnostics;

    index_t n() const { return A.nrows(); }
    index_t m() const { return B.nrows(); }
    index_t l() const { return C.nrows(); }
    index_t total_dim() const { return n() + m() + l(); }

    std::vector<double> rhs(MonolithicForm form) const;
    void validate() const;
};

/// PDE-style benchmark family: A = blkdiag of two Laplacians, B from
/// first-order difference blocks, C = E (x) F with a spread diagonal E.
BlockSaddleSystem build_example1(index_t p);

/// Least-squares-style family: A = blkdiag(2W^T W + I, D2, D3) with a
/// Gaussian kernel W, B = [E, -I, I], C = E^T.
BlockSaddleSystem build_example2(index_t p);

/// Loads (A, B, C) from Matrix Market files with zero right-hand side and
/// runs the advisory SPD/rank probes (skipped above `probe_cap`).
BlockSaddleSystem load_kkt_blocks(const std::filesystem::path& path_a,
                                  const std::filesystem::path& path_b,
                                  const std::filesystem::path& path_c,
                                  index_t probe_cap = 5000);

/// Sets (f; g; h) so the chosen monolithic form times the all-ones vector
/// equals the stored right-hand side.
BlockSaddleSystem rhs_for_all_ones(BlockSaddleSystem sys, MonolithicForm form);

/// Assembles the (n+m+l)-dimensional sparse matrix of the chosen form.
CsrMatrix assemble_monolithic(const BlockSaddleSystem& sys, MonolithicForm form);

} // namespace saddle

#endif
