#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "saddle/analysis.hpp"
#include "saddle/bench.hpp"
#include "saddle/error.hpp"
#include "saddle/krylov.hpp"
#include "saddle/matrix_market.hpp"
#include "saddle/precond.hpp"
#include "saddle/system.hpp"

namespace py = pybind11;
using namespace saddle;

namespace {

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
    py::array_t<T> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<double> from_array(const py::array_t<double>& a) {
    const auto buf = a.request();
    if (buf.ndim != 1) throw UsageError("expected a one-dimensional array");
    const double* p = static_cast<const double*>(buf.ptr);
    return std::vector<double>(p, p + buf.shape[0]);
}

PreconditionerKind kind_from(const std::string& name) {
    if (name == "I") return PreconditionerKind::Identity;
    if (name == "P") return PreconditionerKind::PTriangular;
    if (name == "PD1") return PreconditionerKind::PD1;
    if (name == "PD2") return PreconditionerKind::PD2;
    if (name == "P1") return PreconditionerKind::P1;
    if (name == "P2") return PreconditionerKind::P2;
    if (name == "P3") return PreconditionerKind::P3;
    throw UsageError("unknown preconditioner kind: " + name);
}

BetaRule rule_from(const std::string& name) {
    if (name == "ave") return BetaRule::Averaged;
    if (name == "c") return BetaRule::COnly;
    if (name == "b") return BetaRule::BOnly;
    if (name == "manual") return BetaRule::Manual;
    throw UsageError("unknown beta rule: " + name);
}

const char* flag_name(SolveFlag f) {
    switch (f) {
    case SolveFlag::Converged: return "converged";
    case SolveFlag::Maxit: return "maxit";
    case SolveFlag::TimeLimit: return "time_limit";
    case SolveFlag::Breakdown: return "breakdown";
    }
    return "?";
}

} // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Block saddle point preconditioner library";

    py::register_exception<UsageError>(mod, "UsageError", PyExc_ValueError);
    py::register_exception<ParseError>(mod, "ParseError", PyExc_ValueError);
    py::register_exception<DefinitenessError>(mod, "DefinitenessError",
                                              PyExc_RuntimeError);
    py::register_exception<RankError>(mod, "RankError", PyExc_RuntimeError);
    py::register_exception<CapacityError>(mod, "CapacityError", PyExc_RuntimeError);
    py::register_exception<NumericalError>(mod, "NumericalError",
                                           PyExc_RuntimeError);

    py::class_<CsrMatrix>(mod, "CsrMatrix")
        .def_property_readonly("shape",
                               [](const CsrMatrix& m) {
                                   return py::make_tuple(m.nrows(), m.ncols());
                               })
        .def_property_readonly("nnz", &CsrMatrix::nnz)
        .def_property_readonly(
            "row_ptr", [](const CsrMatrix& m) { return to_array(m.row_ptr()); })
        .def_property_readonly(
            "col_idx", [](const CsrMatrix& m) { return to_array(m.col_idx()); })
        .def_property_readonly(
            "values", [](const CsrMatrix& m) { return to_array(m.values()); })
        .def("matvec",
             [](const CsrMatrix& m, const py::array_t<double>& v) {
                 return to_array(spmv(m, from_array(v)));
             })
        .def("__repr__", [](const CsrMatrix& m) {
            return "<CsrMatrix " + std::to_string(m.nrows()) + "x" +
                   std::to_string(m.ncols()) + ", nnz=" + std::to_string(m.nnz()) +
                   ">";
        });

    py::class_<BlockSaddleSystem>(mod, "BlockSaddleSystem")
        .def_property_readonly("n", &BlockSaddleSystem::n)
        .def_property_readonly("m", &BlockSaddleSystem::m)
        .def_property_readonly("l", &BlockSaddleSystem::l)
        .def_readonly("A", &BlockSaddleSystem::A)
        .def_readonly("B", &BlockSaddleSystem::B)
        .def_readonly("C", &BlockSaddleSystem::C)
        .def_property_readonly(
            "rhs",
            [](const BlockSaddleSystem& s) {
                return to_array(s.rhs(MonolithicForm::SemipositiveB));
            },
            "Right-hand side of the nonsymmetric monolithic form");

    py::class_<ExtremalStats>(mod, "ExtremalStats")
        .def_readonly("sigma_max_B", &ExtremalStats::sigma_max_B)
        .def_readonly("sigma_min_BT", &ExtremalStats::sigma_min_BT)
        .def_readonly("sigma_max_C", &ExtremalStats::sigma_max_C)
        .def_readonly("sigma_min_CT", &ExtremalStats::sigma_min_CT)
        .def_readonly("lambda_min_A", &ExtremalStats::lambda_min_A);

    py::class_<SolveReport>(mod, "SolveReport")
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("res_history", &SolveReport::res_history)
        .def_readonly("final_res", &SolveReport::final_res)
        .def_readonly("wall_seconds", &SolveReport::wall_seconds)
        .def_readonly("inner_cg_warning", &SolveReport::inner_cg_warning)
        .def_property_readonly(
            "flag", [](const SolveReport& r) { return flag_name(r.flag); });

    py::class_<PreconditionerInstance>(mod, "Preconditioner")
        .def("apply",
             [](const PreconditionerInstance& p, const py::array_t<double>& w) {
                 return to_array(p.apply_flat(from_array(w)));
             })
        .def_property_readonly("dim", &PreconditionerInstance::dim);

    mod.def("build_example1", &build_example1, py::arg("p"));
    mod.def("build_example2", &build_example2, py::arg("p"));
    mod.def("load_kkt_blocks", &load_kkt_blocks, py::arg("path_a"),
            py::arg("path_b"), py::arg("path_c"), py::arg("probe_cap") = 5000);
    mod.def("read_matrix_market", &read_matrix_market, py::arg("path"));
    mod.def(
        "assemble_monolithic",
        [](const BlockSaddleSystem& sys, const std::string& form) {
            if (form == "symmetric")
                return assemble_monolithic(sys, MonolithicForm::SymmetricA);
            if (form == "nonsymmetric")
                return assemble_monolithic(sys, MonolithicForm::SemipositiveB);
            throw UsageError("form must be 'symmetric' or 'nonsymmetric'");
        },
        py::arg("sys"), py::arg("form") = "nonsymmetric");
    mod.def(
        "beta_rule",
        [](const BlockSaddleSystem& sys, double alpha, const std::string& rule,
           double manual) { return beta_rule(sys, alpha, rule_from(rule), manual); },
        py::arg("sys"), py::arg("alpha"), py::arg("rule") = "ave",
        py::arg("manual") = 0.0);
    mod.def("extremal_stats", &extremal_stats, py::arg("sys"),
            py::arg("dim_cap") = kDenseEigenCap);
    mod.def(
        "alpha_tilde",
        [](const ExtremalStats& st) { return alpha_tilde(st).alpha_tilde; },
        py::arg("stats"));
    mod.def(
        "build_preconditioner",
        [](const BlockSaddleSystem& sys, const std::string& kind, double alpha,
           double beta, const std::string& inner, const std::string& schur) {
            PreconditionerConfig cfg;
            cfg.alpha = alpha;
            cfg.beta = beta;
            cfg.inner_policy.mode = inner == "cg"
                                        ? InnerSolvePolicy::Mode::Cg
                                        : InnerSolvePolicy::Mode::ExactCholesky;
            cfg.schur_mode =
                schur == "exact" ? SchurMode::Exact : SchurMode::DiagApprox;
            return build_preconditioner(sys, kind_from(kind), cfg);
        },
        py::arg("sys"), py::arg("kind") = "P", py::arg("alpha") = 1.0,
        py::arg("beta") = 1.0, py::arg("inner") = "exact",
        py::arg("schur") = "diag");
    mod.def(
        "solve",
        [](const BlockSaddleSystem& sys_in, const std::string& kind, double alpha,
           const std::string& rule, double beta_manual, const std::string& inner,
           double tol, index_t maxit, double time_limit) {
            BlockSaddleSystem sys =
                rhs_for_all_ones(sys_in, MonolithicForm::SemipositiveB);
            const CsrMatrix Bm =
                assemble_monolithic(sys, MonolithicForm::SemipositiveB);
            PreconditionerConfig cfg;
            cfg.alpha = alpha;
            cfg.beta = kind == "I"
                           ? 1.0
                           : beta_rule(sys, alpha, rule_from(rule), beta_manual);
            cfg.inner_policy.mode = inner == "cg"
                                        ? InnerSolvePolicy::Mode::Cg
                                        : InnerSolvePolicy::Mode::ExactCholesky;
            const PreconditionerInstance P =
                build_preconditioner(sys, kind_from(kind), cfg);
            auto [x, rep] = fgmres(csr_operator(Bm), P,
                                   sys.rhs(MonolithicForm::SemipositiveB), tol,
                                   maxit, time_limit);
            return py::make_tuple(to_array(x), rep);
        },
        "Solve one benchmark instance with the all-ones exact solution",
        py::arg("sys"), py::arg("precond") = "P", py::arg("alpha") = 5e-2,
        py::arg("beta_rule") = "ave", py::arg("beta_manual") = 0.0,
        py::arg("inner") = "exact", py::arg("tol") = 1e-6,
        py::arg("maxit") = 1000, py::arg("time_limit") = 1000.0);
}
