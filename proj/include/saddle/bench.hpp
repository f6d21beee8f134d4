#ifndef SADDLE_BENCH_HPP
#define SADDLE_BENCH_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "saddle/analysis.hpp"
#include "saddle/krylov.hpp"
#include "saddle/precond.hpp"

namespace saddle {

enum class ProblemKind { Example1, Example2, KktFiles };

enum class TableFormat { Csv, Markdown };

struct BenchmarkConfig {
    ProblemKind problem = ProblemKind::Example1;
    std::vector<index_t> sizes;
    std::filesystem::path kkt_a, kkt_b, kkt_c;
    std::vector<PreconditionerKind> preconditioners;
    double alpha = -1.0; // negative: per-family default (5e-2 / 5e-1)
    BetaRule beta_rule = BetaRule::Averaged;
    double beta_manual = 0.0;
    double tol = 1e-6;
    index_t maxit = 1000;
    double time_limit_s = 1000.0;
    InnerSolvePolicy inner_policy;
    TableFormat format = TableFormat::Csv;
    std::string out; // empty: stdout

    void validate() const;
    double effective_alpha() const;
};

struct BenchmarkRow {
    std::string problem;
    index_t n = 0, m = 0, l = 0;
    std::string precond;
    index_t it = 0;
    double cpu_s = 0.0;   // FGMRES wall time
    double setup_s = 0.0; // build/factorization wall time (exposed in API only)
    double res = -1.0;
    double err = -1.0; // negative: unknown
    SolveFlag flag = SolveFlag::Converged;
    bool rejected = false; // build refused (rank/definiteness/capacity)
    bool error_row = false;
    std::string note;
};

const char* precond_name(PreconditionerKind kind);
std::string flag_symbol(const BenchmarkRow& row);

std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& cfg);
std::string emit_table(const std::vector<BenchmarkRow>& rows, TableFormat format);

/// Thrown by parse_cli when --help is requested; not an error.
struct HelpRequested {
    std::string text;
};

/// Parses CLI arguments (without the program name). Throws UsageError with
/// the help text attached on bad input.
BenchmarkConfig parse_cli(const std::vector<std::string>& args);

std::string cli_help_text();

} // namespace saddle

#endif
