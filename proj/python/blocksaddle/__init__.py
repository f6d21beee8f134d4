"""Python interface to the block saddle point preconditioner library."""

try:
    from . import _core
except ImportError:  # extension built out of tree (plain CMake dev builds)
    import _core

BlockSaddleSystem = _core.BlockSaddleSystem
CsrMatrix = _core.CsrMatrix
ExtremalStats = _core.ExtremalStats
Preconditioner = _core.Preconditioner
SolveReport = _core.SolveReport
alpha_tilde = _core.alpha_tilde
assemble_monolithic = _core.assemble_monolithic
beta_rule = _core.beta_rule
build_example1 = _core.build_example1
build_example2 = _core.build_example2
build_preconditioner = _core.build_preconditioner
extremal_stats = _core.extremal_stats
load_kkt_blocks = _core.load_kkt_blocks
read_matrix_market = _core.read_matrix_market
solve = _core.solve

__all__ = [
    "BlockSaddleSystem",
    "CsrMatrix",
    "ExtremalStats",
    "Preconditioner",
    "SolveReport",
    "alpha_tilde",
    "assemble_monolithic",
    "beta_rule",
    "build_example1",
    "build_example2",
    "build_preconditioner",
    "extremal_stats",
    "load_kkt_blocks",
    "read_matrix_market",
    "solve",
]
