#include "saddle/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <CLI11.hpp>

#include "saddle/error.hpp"

namespace saddle {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1e", v);
    return buf;
}

std::string fmt_cpu(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

PreconditionerKind kind_from_name(const std::string& s) {
    std::string u;
    for (char c : s) u.push_back(static_cast<char>(std::toupper(c)));
    if (u == "I" || u == "IDENTITY") return PreconditionerKind::Identity;
    if (u == "P" || u == "PT" || u == "P_TRIANGULAR")
        return PreconditionerKind::PTriangular;
    if (u == "PD1" || u == "P_D1") return PreconditionerKind::PD1;
    if (u == "PD2" || u == "P_D2") return PreconditionerKind::PD2;
    if (u == "P1" || u == "P_1") return PreconditionerKind::P1;
    if (u == "P2" || u == "P_2") return PreconditionerKind::P2;
    if (u == "P3" || u == "P_3") return PreconditionerKind::P3;
    throw UsageError("unknown preconditioner kind: " + s);
}

} // namespace

const char* precond_name(PreconditionerKind kind) {
    switch (kind) {
    case PreconditionerKind::Identity: return "I";
    case PreconditionerKind::PTriangular: return "P";
    case PreconditionerKind::PD1: return "PD1";
    case PreconditionerKind::PD2: return "PD2";
    case PreconditionerKind::P1: return "P1";
    case PreconditionerKind::P2: return "P2";
    case PreconditionerKind::P3: return "P3";
    }
    return "?";
}

std::string flag_symbol(const BenchmarkRow& row) {
    if (row.rejected) return "§"; // section sign
    if (row.error_row) return "!";
    switch (row.flag) {
    case SolveFlag::Converged: return "";
    case SolveFlag::TimeLimit: return "†"; // dagger
    case SolveFlag::Maxit: return "‡";     // double dagger
    case SolveFlag::Breakdown: return "!";
    }
    return "?";
}

void BenchmarkConfig::validate() const {
    if (preconditioners.empty())
        throw UsageError("at least one preconditioner is required");
    if (problem == ProblemKind::KktFiles) {
        if (kkt_a.empty() || kkt_b.empty() || kkt_c.empty())
            throw UsageError("--kkt-a/--kkt-b/--kkt-c are required for the kkt problem");
    } else {
        if (sizes.empty()) throw UsageError("at least one size is required");
        for (index_t p : sizes)
            if (p < 1) throw UsageError("sizes must be positive");
    }
    if (!(tol > 0.0)) throw UsageError("tol must be positive");
    if (maxit < 1) throw UsageError("maxit must be at least 1");
    if (!(time_limit_s > 0.0)) throw UsageError("time limit must be positive");
}

double BenchmarkConfig::effective_alpha() const {
    if (alpha > 0.0) return alpha;
    return problem == ProblemKind::Example1 ? 5e-2 : 5e-1;
}

std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& cfg) {
    cfg.validate();
    std::vector<BenchmarkRow> rows;
    const double alpha = cfg.effective_alpha();

    std::vector<index_t> sizes = cfg.sizes;
    if (cfg.problem == ProblemKind::KktFiles) sizes = {0};

    for (index_t p : sizes) {
        std::string problem_id;
        BlockSaddleSystem sys;
        try {
            switch (cfg.problem) {
            case ProblemKind::Example1:
                problem_id = "example1/p=" + std::to_string(p);
                sys = build_example1(p);
                break;
            case ProblemKind::Example2:
                problem_id = "example2/p=" + std::to_string(p);
                sys = build_example2(p);
                break;
            case ProblemKind::KktFiles:
                problem_id = "kkt/" + cfg.kkt_a.filename().string();
                sys = load_kkt_blocks(cfg.kkt_a, cfg.kkt_b, cfg.kkt_c);
                break;
            }
        } catch (const std::exception& e) {
            BenchmarkRow row;
            row.problem = problem_id.empty() ? "?" : problem_id;
            row.error_row = true;
            row.note = e.what();
            rows.push_back(row);
            continue;
        }
        sys = rhs_for_all_ones(sys, MonolithicForm::SemipositiveB);
        const CsrMatrix Bm = assemble_monolithic(sys, MonolithicForm::SemipositiveB);
        const std::vector<double> b = sys.rhs(MonolithicForm::SemipositiveB);
        const LinearOperator op = csr_operator(Bm);

        double beta = 1.0;
        bool beta_ok = true;
        std::string beta_err;
        try {
            beta = beta_rule(sys, alpha, cfg.beta_rule, cfg.beta_manual);
        } catch (const std::exception& e) {
            beta_ok = false;
            beta_err = e.what();
        }

        for (PreconditionerKind kind : cfg.preconditioners) {
            BenchmarkRow row;
            row.problem = problem_id;
            row.n = sys.n();
            row.m = sys.m();
            row.l = sys.l();
            row.precond = precond_name(kind);
            const bool needs_beta = kind == PreconditionerKind::PTriangular ||
                                    kind == PreconditionerKind::PD1;
            if (needs_beta && !beta_ok) {
                row.error_row = true;
                row.note = beta_err;
                rows.push_back(row);
                continue;
            }
            PreconditionerConfig pcfg;
            pcfg.alpha = alpha;
            pcfg.beta = beta;
            pcfg.inner_policy = cfg.inner_policy;
            pcfg.schur_mode = SchurMode::DiagApprox;
            const auto t0 = std::chrono::steady_clock::now();
            std::unique_ptr<PreconditionerInstance> P;
            try {
                P = std::make_unique<PreconditionerInstance>(
                    build_preconditioner(sys, kind, pcfg));
            } catch (const RankError& e) {
                row.rejected = true;
                row.note = e.what();
                rows.push_back(row);
                continue;
            } catch (const DefinitenessError& e) {
                row.rejected = true;
                row.note = e.what();
                rows.push_back(row);
                continue;
            } catch (const CapacityError& e) {
                row.rejected = true;
                row.note = e.what();
                rows.push_back(row);
                continue;
            } catch (const std::exception& e) {
                row.error_row = true;
                row.note = e.what();
                rows.push_back(row);
                continue;
            }
            row.setup_s = seconds_since(t0);
            auto [x, rep] = fgmres(op, *P, b, cfg.tol, cfg.maxit, cfg.time_limit_s);
            row.it = rep.iterations;
            row.cpu_s = rep.wall_seconds;
            row.flag = rep.flag;
            // Independent recomputation of Res and Err from the stored
            // solution before emission.
            {
                const std::vector<double> ax = spmv(Bm, x);
                double num = 0.0, den = 0.0, esq = 0.0;
                for (std::size_t i = 0; i < b.size(); ++i) {
                    const double d = b[i] - ax[i];
                    num += d * d;
                    den += b[i] * b[i];
                    const double e = x[i] - 1.0;
                    esq += e * e;
                }
                row.res = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
                row.err = std::sqrt(esq / static_cast<double>(b.size()));
            }
            if (rep.inner_cg_warning && row.note.empty())
                row.note = "inner CG hit its budget";
            rows.push_back(row);
        }
    }
    return rows;
}

std::string emit_table(const std::vector<BenchmarkRow>& rows, TableFormat format) {
    if (rows.empty()) throw UsageError("emit_table: no rows");
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"problem", "n", "m", "l", "precond", "IT", "CPU", "Res",
                     "Err", "flag"});
    for (const BenchmarkRow& r : rows) {
        std::vector<std::string> c;
        c.push_back(r.problem);
        c.push_back(std::to_string(r.n));
        c.push_back(std::to_string(r.m));
        c.push_back(std::to_string(r.l));
        c.push_back(r.precond);
        if (r.rejected || r.error_row) {
            c.insert(c.end(), {"-", "-", "-", "-"});
        } else {
            c.push_back(std::to_string(r.it));
            c.push_back(fmt_cpu(r.cpu_s));
            c.push_back(r.res < 0.0 ? "-" : fmt_sci(r.res));
            c.push_back(r.err < 0.0 ? "-" : fmt_sci(r.err));
        }
        c.push_back(flag_symbol(r));
        cells.push_back(std::move(c));
    }
    std::ostringstream out;
    if (format == TableFormat::Csv) {
        for (const auto& c : cells) {
            for (std::size_t i = 0; i < c.size(); ++i)
                out << (i ? "," : "") << c[i];
            out << '\n';
        }
        return out.str();
    }
    std::vector<std::size_t> width(cells[0].size(), 0);
    for (const auto& c : cells)
        for (std::size_t i = 0; i < c.size(); ++i)
            width[i] = std::max(width[i], c[i].size());
    auto emit_row = [&](const std::vector<std::string>& c) {
        out << '|';
        for (std::size_t i = 0; i < c.size(); ++i) {
            out << ' ' << c[i] << std::string(width[i] - c[i].size(), ' ') << " |";
        }
        out << '\n';
    };
    emit_row(cells[0]);
    out << '|';
    for (std::size_t i = 0; i < width.size(); ++i)
        out << ' ' << std::string(width[i], '-') << " |";
    out << '\n';
    for (std::size_t r = 1; r < cells.size(); ++r) emit_row(cells[r]);
    return out.str();
}

namespace {

CLI::App* make_app(CLI::App& app, BenchmarkConfig& cfg, std::string& problem_s,
                   std::vector<std::string>& precond_s, std::string& beta_s,
                   std::string& inner_s, std::string& format_s,
                   std::vector<index_t>& sizes) {
    app.add_option("--problem", problem_s, "problem family: example1|example2|kkt");
    app.add_option("--sizes", sizes, "grid sizes p (comma separated)")
        ->delimiter(',');
    app.add_option("--precond", precond_s,
                   "preconditioner kinds: I|P|PD1|PD2|P1|P2|P3 (repeatable)")
        ->delimiter(',');
    app.add_option("--alpha", cfg.alpha, "shift parameter alpha");
    app.add_option("--beta-rule", beta_s, "beta rule: ave|c|b|manual:<value>");
    app.add_option("--tol", cfg.tol, "relative residual tolerance");
    app.add_option("--maxit", cfg.maxit, "maximum outer iterations");
    app.add_option("--time-limit", cfg.time_limit_s, "wall-clock limit in seconds");
    app.add_option("--inner", inner_s, "inner block-solve policy: exact|cg");
    app.add_option("--format", format_s, "output format: csv|md");
    app.add_option("--kkt-a", cfg.kkt_a, "Matrix Market file for block A");
    app.add_option("--kkt-b", cfg.kkt_b, "Matrix Market file for block B");
    app.add_option("--kkt-c", cfg.kkt_c, "Matrix Market file for block C");
    app.add_option("--out", cfg.out, "output file (default stdout)");
    return &app;
}

} // namespace

std::string cli_help_text() {
    CLI::App app{"Benchmark harness for block saddle point preconditioners"};
    BenchmarkConfig cfg;
    std::string a, c, d, e;
    std::vector<std::string> b;
    std::vector<index_t> s;
    make_app(app, cfg, a, b, c, d, e, s);
    return app.help();
}

BenchmarkConfig parse_cli(const std::vector<std::string>& args) {
    CLI::App app{"Benchmark harness for block saddle point preconditioners"};
    BenchmarkConfig cfg;
    std::string problem_s = "example1", beta_s = "ave", inner_s = "exact",
                format_s = "csv";
    std::vector<std::string> precond_s;
    std::vector<index_t> sizes;
    make_app(app, cfg, problem_s, precond_s, beta_s, inner_s, format_s, sizes);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string(e.what()) + "\n\n" + app.help());
    }

    if (problem_s == "example1") cfg.problem = ProblemKind::Example1;
    else if (problem_s == "example2") cfg.problem = ProblemKind::Example2;
    else if (problem_s == "kkt") cfg.problem = ProblemKind::KktFiles;
    else throw UsageError("unknown problem: " + problem_s);

    cfg.sizes = sizes;
    for (const std::string& s : precond_s)
        cfg.preconditioners.push_back(kind_from_name(s));
    if (cfg.preconditioners.empty())
        cfg.preconditioners = {PreconditionerKind::PTriangular};

    if (beta_s == "ave") cfg.beta_rule = BetaRule::Averaged;
    else if (beta_s == "c") cfg.beta_rule = BetaRule::COnly;
    else if (beta_s == "b") cfg.beta_rule = BetaRule::BOnly;
    else if (beta_s.rfind("manual:", 0) == 0) {
        cfg.beta_rule = BetaRule::Manual;
        try {
            std::size_t pos = 0;
            cfg.beta_manual = std::stod(beta_s.substr(7), &pos);
            if (pos != beta_s.size() - 7) throw std::invalid_argument("tail");
        } catch (const std::exception&) {
            throw UsageError("unparsable manual beta: " + beta_s);
        }
    } else throw UsageError("unknown beta rule: " + beta_s);

    if (inner_s == "exact")
        cfg.inner_policy.mode = InnerSolvePolicy::Mode::ExactCholesky;
    else if (inner_s == "cg")
        cfg.inner_policy.mode = InnerSolvePolicy::Mode::Cg;
    else throw UsageError("unknown inner policy: " + inner_s);

    if (format_s == "csv") cfg.format = TableFormat::Csv;
    else if (format_s == "md") cfg.format = TableFormat::Markdown;
    else throw UsageError("unknown format: " + format_s);

    cfg.validate();
    return cfg;
}

} // namespace saddle
