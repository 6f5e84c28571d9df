// Python bindings for the core operations: sampling, estimation,
// diagnostics, synthetic data and the file formats.

#include "lowrank/diagnostics.hpp"
#include "lowrank/estimators.hpp"
#include "lowrank/experiments.hpp"
#include "lowrank/matrix_core.hpp"
#include "lowrank/matrix_io.hpp"
#include "lowrank/pgm.hpp"
#include "lowrank/rng.hpp"
#include "lowrank/sampling.hpp"
#include "lowrank/synthetic.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace lowrank;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rank-r matrix approximation from sampled entries";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

    // matrix core -----------------------------------------------------------
    py::class_<SvdResult>(m, "SvdResult")
        .def_readonly("u", &SvdResult::u)
        .def_readonly("sigma", &SvdResult::sigma)
        .def_readonly("v", &SvdResult::v);

    py::class_<TruncationResult>(m, "TruncationResult")
        .def_readonly("matrix", &TruncationResult::matrix)
        .def_readonly("degenerate", &TruncationResult::degenerate);

    py::class_<NormSuite>(m, "NormSuite")
        .def_readonly("frobenius", &NormSuite::frobenius)
        .def_readonly("spectral", &NormSuite::spectral)
        .def_readonly("entry_l1", &NormSuite::entry_l1)
        .def_readonly("max_entry", &NormSuite::max_entry);

    py::class_<FactorStack>(m, "FactorStack")
        .def(py::init([](Matrix top, Matrix bottom) {
                 return FactorStack{std::move(top), std::move(bottom)};
             }),
             py::arg("top"), py::arg("bottom"))
        .def_readwrite("top", &FactorStack::top)
        .def_readwrite("bottom", &FactorStack::bottom);

    m.def("svd_deterministic", &svd_deterministic, py::arg("a"));
    m.def("truncate_rank",
          py::overload_cast<const Matrix&, int>(&truncate_rank),
          py::arg("a"), py::arg("r"));
    m.def("norm_suite", &norm_suite, py::arg("a"));
    m.def("spectral_norm", &spectral_norm, py::arg("a"));
    m.def("row_col_norms", &row_col_norms, py::arg("a"));
    m.def("procrustes_distance", &procrustes_distance, py::arg("f"), py::arg("g"));

    // sampling --------------------------------------------------------------
    py::enum_<SamplingScheme>(m, "SamplingScheme")
        .value("ENTRY_WEIGHTED", SamplingScheme::EntryWeighted)
        .value("ROWCOL_WEIGHTED", SamplingScheme::RowColWeighted);

    py::class_<SketchEntry>(m, "SketchEntry")
        .def_readonly("i", &SketchEntry::i)
        .def_readonly("j", &SketchEntry::j)
        .def_readonly("value", &SketchEntry::value)
        .def_readonly("prob", &SketchEntry::prob);

    py::class_<SketchBundle>(m, "SketchBundle")
        .def_readonly("d1", &SketchBundle::d1)
        .def_readonly("d2", &SketchBundle::d2)
        .def_readonly("entries", &SketchBundle::entries)
        .def_readonly("row_norms", &SketchBundle::row_norms)
        .def_readonly("col_norms", &SketchBundle::col_norms)
        .def_readonly("fro_norm", &SketchBundle::fro_norm)
        .def_readonly("l1_norm", &SketchBundle::l1_norm)
        .def_readonly("scheme", &SketchBundle::scheme)
        .def_readonly("budget_n", &SketchBundle::budget_n)
        .def_readonly("seed", &SketchBundle::seed)
        .def("__len__", [](const SketchBundle& s) { return s.entries.size(); });

    m.def("compute_probabilities", &compute_probabilities, py::arg("a"), py::arg("scheme"),
          py::arg("n"));
    m.def("expected_count", &expected_count, py::arg("p"));
    m.def("calibrate_budget", &calibrate_budget, py::arg("a"), py::arg("scheme"),
          py::arg("target_count"));
    m.def("draw_mask", &draw_mask, py::arg("p"), py::arg("seed"));
    m.def("build_sketch", &build_sketch, py::arg("a"), py::arg("p"), py::arg("mask"),
          py::arg("scheme"), py::arg("budget_n"), py::arg("seed"));
    m.def("sample_sketch", &sample_sketch, py::arg("a"), py::arg("scheme"), py::arg("n"),
          py::arg("seed"));
    m.def("sketch_to_dense", &sketch_to_dense, py::arg("s"));
    m.def("read_sketch", py::overload_cast<const std::string&>(&read_sketch), py::arg("path"));
    m.def("write_sketch", py::overload_cast<const std::string&, const SketchBundle&>(&write_sketch),
          py::arg("path"), py::arg("s"));

    // estimators --------------------------------------------------------------
    py::class_<LineSearchRule>(m, "LineSearchRule")
        .def(py::init<>())
        .def_readwrite("c1", &LineSearchRule::c1)
        .def_readwrite("shrink", &LineSearchRule::shrink)
        .def_readwrite("initial_step", &LineSearchRule::initial_step)
        .def_readwrite("max_halvings", &LineSearchRule::max_halvings);

    py::class_<EstimatorConfig>(m, "EstimatorConfig")
        .def(py::init([](int rank, std::optional<double> beta, std::optional<double> fixed_step,
                         int max_iters, double grad_tol) {
                 EstimatorConfig cfg;
                 cfg.rank = rank;
                 cfg.beta = beta;
                 cfg.fixed_step = fixed_step;
                 cfg.max_iters = max_iters;
                 cfg.grad_tol = grad_tol;
                 return cfg;
             }),
             py::arg("rank"), py::arg("beta") = std::nullopt,
             py::arg("fixed_step") = std::nullopt, py::arg("max_iters") = 100,
             py::arg("grad_tol") = 1e-6)
        .def_readwrite("rank", &EstimatorConfig::rank)
        .def_readwrite("beta", &EstimatorConfig::beta)
        .def_readwrite("fixed_step", &EstimatorConfig::fixed_step)
        .def_readwrite("line_search", &EstimatorConfig::line_search)
        .def_readwrite("max_iters", &EstimatorConfig::max_iters)
        .def_readwrite("grad_tol", &EstimatorConfig::grad_tol);

    py::enum_<StopReason>(m, "StopReason")
        .value("GRAD_TOL", StopReason::GradTol)
        .value("MAX_ITERS", StopReason::MaxIters);

    py::class_<TraceRow>(m, "TraceRow")
        .def_readonly("objective", &TraceRow::objective)
        .def_readonly("grad_inf", &TraceRow::grad_inf)
        .def_readonly("step", &TraceRow::step);

    py::class_<PgdResult>(m, "PgdResult")
        .def_readonly("factors", &PgdResult::factors)
        .def_readonly("estimate", &PgdResult::estimate)
        .def_readonly("trace", &PgdResult::trace)
        .def_readonly("iterations", &PgdResult::iterations)
        .def_readonly("reason", &PgdResult::reason)
        .def_readonly("beta", &PgdResult::beta);

    m.def("naive_estimate", &naive_estimate, py::arg("s"), py::arg("r"));
    m.def("objective_value", &objective_value, py::arg("s"), py::arg("f"));
    m.def("objective_gradient", &objective_gradient, py::arg("s"), py::arg("f"));
    m.def("project_feasible", &project_feasible, py::arg("f"), py::arg("s"), py::arg("beta"));
    m.def("init_factors", &init_factors, py::arg("s"), py::arg("r"), py::arg("beta"));
    m.def("pgd_estimate", &pgd_estimate, py::arg("s"), py::arg("config"));

    // diagnostics -------------------------------------------------------------
    py::class_<StructureReport>(m, "StructureReport")
        .def_readonly("mu_r", &StructureReport::mu_r)
        .def_readonly("nu_r", &StructureReport::nu_r)
        .def_readonly("nu_r_inf", &StructureReport::nu_r_inf)
        .def_readonly("eigengap", &StructureReport::eigengap)
        .def_readonly("kappa_r", &StructureReport::kappa_r)
        .def_readonly("kappa", &StructureReport::kappa);

    py::class_<ErrorMetrics>(m, "ErrorMetrics")
        .def_readonly("rel_fro", &ErrorMetrics::rel_fro)
        .def_readonly("rel_spec", &ErrorMetrics::rel_spec)
        .def_readonly("abs_fro", &ErrorMetrics::abs_fro);

    py::enum_<BoundId>(m, "BoundId")
        .value("NAIVE_ERROR", BoundId::NaiveError)
        .value("TAIL_DEVIATION_NU_INF", BoundId::TailDeviationNuInf)
        .value("TAIL_DEVIATION_MU", BoundId::TailDeviationMu)
        .value("PGD_CONTRACTION", BoundId::PgdContraction)
        .value("PGD_NOISE_FLOOR", BoundId::PgdNoiseFloor);

    py::class_<BoundExtras>(m, "BoundExtras")
        .def(py::init([](std::optional<double> step_size, std::optional<int> iterations,
                         std::optional<double> measured_deviation) {
                 BoundExtras e;
                 e.step_size = step_size;
                 e.iterations = iterations;
                 e.measured_deviation = measured_deviation;
                 return e;
             }),
             py::arg("step_size") = std::nullopt, py::arg("iterations") = std::nullopt,
             py::arg("measured_deviation") = std::nullopt)
        .def_readwrite("step_size", &BoundExtras::step_size)
        .def_readwrite("iterations", &BoundExtras::iterations)
        .def_readwrite("measured_deviation", &BoundExtras::measured_deviation);

    py::class_<BoundReport>(m, "BoundReport")
        .def_readonly("id", &BoundReport::id)
        .def_readonly("value", &BoundReport::value)
        .def_readonly("constants_note", &BoundReport::constants_note);

    m.def("structure_coefficients", &structure_coefficients, py::arg("a"), py::arg("r"));
    m.def("error_metrics", &error_metrics, py::arg("estimate"), py::arg("reference"));
    m.def("evaluate_bound", &evaluate_bound, py::arg("id"), py::arg("a"), py::arg("r"),
          py::arg("n"), py::arg("extras") = BoundExtras{});
    m.def("measure_sketch_deviation", &measure_sketch_deviation, py::arg("s"), py::arg("b"));

    // synthetic data, images, files -------------------------------------------
    py::enum_<SyntheticKind>(m, "SyntheticKind")
        .value("LOW_RANK", SyntheticKind::LowRank)
        .value("NOISY_LOW_RANK", SyntheticKind::NoisyLowRank);

    m.def(
        "generate_synthetic",
        [](int d, SyntheticKind kind, double sigma, std::uint64_t seed) {
            return generate_synthetic({d, kind, sigma, seed});
        },
        py::arg("d"), py::arg("kind") = SyntheticKind::LowRank, py::arg("sigma") = 0.0,
        py::arg("seed") = 0);
    m.def("read_pgm", &read_pgm, py::arg("path"));
    m.def("write_pgm", &write_pgm, py::arg("path"), py::arg("image"));
    m.def("read_matrix_csv", py::overload_cast<const std::string&>(&read_matrix_csv),
          py::arg("path"));
    m.def("write_matrix_csv",
          py::overload_cast<const std::string&, const Matrix&>(&write_matrix_csv),
          py::arg("path"), py::arg("a"));

    m.def("uniform_unit", &uniform_unit, py::arg("seed"), py::arg("c0"), py::arg("c1"));
    m.def("gaussian_unit", &gaussian_unit, py::arg("seed"), py::arg("c0"), py::arg("c1"));
    m.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("run_index"));

    // experiments ---------------------------------------------------------------
    py::enum_<ExperimentKind>(m, "ExperimentKind")
        .value("LOW_RANK", ExperimentKind::LowRank)
        .value("RANK_SWEEP", ExperimentKind::RankSweep)
        .value("EIGENGAP", ExperimentKind::Eigengap)
        .value("IMAGE", ExperimentKind::Image);

    py::class_<ExperimentParams>(m, "ExperimentParams")
        .def(py::init<>())
        .def_readwrite("d", &ExperimentParams::d)
        .def_readwrite("rank", &ExperimentParams::rank)
        .def_readwrite("sigma", &ExperimentParams::sigma)
        .def_readwrite("fractions", &ExperimentParams::fractions)
        .def_readwrite("ranks", &ExperimentParams::ranks)
        .def_readwrite("sigmas", &ExperimentParams::sigmas)
        .def_readwrite("reps", &ExperimentParams::reps)
        .def_readwrite("max_iters", &ExperimentParams::max_iters)
        .def_readwrite("image_path", &ExperimentParams::image_path)
        .def_readwrite("measure_time", &ExperimentParams::measure_time);

    py::class_<RunRecord>(m, "RunRecord")
        .def_readonly("run_id", &RunRecord::run_id)
        .def_readonly("method", &RunRecord::method)
        .def_readonly("scheme", &RunRecord::scheme)
        .def_readonly("d1", &RunRecord::d1)
        .def_readonly("d2", &RunRecord::d2)
        .def_readonly("rank", &RunRecord::rank)
        .def_readonly("expected_fraction", &RunRecord::expected_fraction)
        .def_readonly("actual_count", &RunRecord::actual_count)
        .def_readonly("rel_err_fro", &RunRecord::rel_err_fro)
        .def_readonly("rel_err_spec", &RunRecord::rel_err_spec)
        .def_readonly("iterations", &RunRecord::iterations)
        .def_readonly("final_grad_inf", &RunRecord::final_grad_inf)
        .def_readonly("seed", &RunRecord::seed)
        .def_readonly("wall_ms", &RunRecord::wall_ms);

    m.def("default_params", &default_params, py::arg("kind"));
    m.def("run_experiment", &run_experiment, py::arg("kind"), py::arg("params"), py::arg("seed"));
    m.def("write_report",
          py::overload_cast<const std::string&, const std::vector<RunRecord>&>(&write_report),
          py::arg("path"), py::arg("records"));
}
