// Command-line interface: synthetic data generation, entry sampling,
// estimation, structural diagnostics and the benchmark experiments.
//
// Exit codes: 0 success, 2 input/format error, 3 numerical divergence.

#include "lowrank/diagnostics.hpp"
#include "lowrank/estimators.hpp"
#include "lowrank/experiments.hpp"
#include "lowrank/matrix_io.hpp"
#include "lowrank/numeric_text.hpp"
#include "lowrank/pgm.hpp"
#include "lowrank/sampling.hpp"
#include "lowrank/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace lowrank;

struct GenArgs {
    std::string kind;
    int d = 0;
    double sigma = 0.05;
    std::uint64_t seed = 0;
    std::string out;
};

struct SampleArgs {
    std::string in;
    std::string scheme;
    std::optional<double> frac;
    std::optional<double> budget;
    std::uint64_t seed = 0;
    std::string out;
};

struct EstimateArgs {
    std::string sketch;
    std::string method;
    int rank = 0;
    std::string beta = "auto";
    int max_iter = 100;
    double tol = 1e-6;
    std::string out;
};

struct DiagArgs {
    std::string in;
    int rank = 0;
};

struct BenchArgs {
    std::string kind;
    int d = 1000;
    int rank = 5;
    double sigma = 0.05;
    std::vector<double> fracs;
    std::vector<int> ranks;
    std::vector<double> sigmas;
    std::string image;
    int max_iter = 10;
    int reps = 0;
    std::uint64_t seed = 0;
    std::string out;
    bool timings = false;
};

int run_gen(const GenArgs& args) {
    SyntheticSpec spec;
    spec.d = args.d;
    spec.seed = args.seed;
    if (args.kind == "lowrank") {
        spec.kind = SyntheticKind::LowRank;
    } else if (args.kind == "noisy") {
        spec.kind = SyntheticKind::NoisyLowRank;
        spec.sigma = args.sigma;
    } else {
        throw InputError("gen: unknown kind '" + args.kind + "' (expected lowrank or noisy)");
    }
    write_matrix_csv(args.out, generate_synthetic(spec));
    return 0;
}

int run_sample(const SampleArgs& args) {
    if (args.frac.has_value() == args.budget.has_value())
        throw InputError("sample: exactly one of --frac or --budget is required");
    Matrix a = read_matrix_csv(args.in);
    SamplingScheme scheme = parse_scheme(args.scheme);
    double n = 0.0;
    if (args.frac) {
        if (!(*args.frac > 0.0 && *args.frac <= 1.0))
            throw InputError("sample: --frac must lie in (0, 1]");
        double target = *args.frac * static_cast<double>(a.rows()) * static_cast<double>(a.cols());
        n = calibrate_budget(a, scheme, target);
    } else {
        n = *args.budget;
    }
    ProbabilityMatrix p = compute_probabilities(a, scheme, n);
    Mask mask = draw_mask(p, args.seed);
    write_sketch(args.out, build_sketch(a, p, mask, scheme, n, args.seed));
    return 0;
}

int run_estimate(const EstimateArgs& args) {
    SketchBundle s = read_sketch(args.sketch);
    if (args.method == "naive") {
        write_matrix_csv(args.out, naive_estimate(s, args.rank));
        std::cout << "method=naive rank=" << args.rank << " entries=" << s.entries.size() << '\n';
        return 0;
    }
    if (args.method != "pgd")
        throw InputError("estimate: unknown method '" + args.method + "' (expected naive or pgd)");

    EstimatorConfig cfg;
    cfg.rank = args.rank;
    cfg.max_iters = args.max_iter;
    cfg.grad_tol = args.tol;
    if (args.beta != "auto")
        cfg.beta = parse_double(args.beta, "estimate --beta");
    PgdResult res = pgd_estimate(s, cfg);
    write_matrix_csv(args.out, res.estimate);
    std::cout << "method=pgd rank=" << args.rank << " entries=" << s.entries.size()
              << " iterations=" << res.iterations
              << " reason=" << (res.reason == StopReason::GradTol ? "grad_tol" : "max_iters")
              << " final_grad_inf=" << format_double(res.trace.back().grad_inf)
              << " objective=" << format_double(res.trace.back().objective)
              << " beta=" << format_double(res.beta) << '\n';
    return 0;
}

int run_diag(const DiagArgs& args) {
    Matrix a = read_matrix_csv(args.in);
    StructureReport rep = structure_coefficients(a, args.rank);
    std::cout << "mu_r=" << format_double(rep.mu_r) << '\n'
              << "nu_r=" << format_double(rep.nu_r) << '\n'
              << "nu_r_inf=" << format_double(rep.nu_r_inf) << '\n'
              << "eigengap=" << format_double(rep.eigengap) << '\n'
              << "kappa_r=" << format_double(rep.kappa_r) << '\n'
              << "kappa=" << format_double(rep.kappa) << '\n';
    return 0;
}

int run_bench(const BenchArgs& args) {
    ExperimentKind kind = parse_experiment(args.kind);
    ExperimentParams p = default_params(kind);
    p.d = args.d;
    p.rank = args.rank;
    p.sigma = args.sigma;
    if (!args.fracs.empty())
        p.fractions = args.fracs;
    if (!args.ranks.empty())
        p.ranks = args.ranks;
    if (!args.sigmas.empty())
        p.sigmas = args.sigmas;
    p.reps = args.reps;
    p.max_iters = args.max_iter;
    p.image_path = args.image;
    p.measure_time = args.timings;
    write_report(args.out, run_experiment(kind, p, args.seed));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rank-r matrix approximation from sampled entries"};
    app.require_subcommand(1);

    GenArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a synthetic matrix as CSV");
    gen_cmd->add_option("--kind", gen.kind, "lowrank or noisy")->required();
    gen_cmd->add_option("--d", gen.d, "dimension (d x d)")->required();
    gen_cmd->add_option("--sigma", gen.sigma, "noise level for kind=noisy (default 0.05)");
    gen_cmd->add_option("--seed", gen.seed, "random seed")->required();
    gen_cmd->add_option("--out", gen.out, "output matrix CSV")->required();

    SampleArgs sample;
    CLI::App* sample_cmd = app.add_subcommand("sample", "Sample entries of a matrix into a sketch");
    sample_cmd->add_option("--in", sample.in, "input matrix CSV")->required();
    sample_cmd->add_option("--scheme", sample.scheme, "entry or rowcol")->required();
    sample_cmd->add_option("--frac", sample.frac, "target expected fraction of entries in (0, 1]");
    sample_cmd->add_option("--budget", sample.budget, "sampling budget n (alternative to --frac)");
    sample_cmd->add_option("--seed", sample.seed, "random seed")->required();
    sample_cmd->add_option("--out", sample.out, "output sketch file")->required();

    EstimateArgs estimate;
    CLI::App* est_cmd = app.add_subcommand("estimate", "Estimate the rank-r matrix from a sketch");
    est_cmd->add_option("--sketch", estimate.sketch, "input sketch file")->required();
    est_cmd->add_option("--method", estimate.method, "naive or pgd")->required();
    est_cmd->add_option("--rank", estimate.rank, "target rank")->required();
    est_cmd->add_option("--beta", estimate.beta, "row-cap parameter, auto or a float (default auto)");
    est_cmd->add_option("--max-iter", estimate.max_iter, "iteration cap (default 100)");
    est_cmd->add_option("--tol", estimate.tol, "gradient sup-norm stopping tolerance (default 1e-6)");
    est_cmd->add_option("--out", estimate.out, "output estimate CSV")->required();

    DiagArgs diag;
    CLI::App* diag_cmd = app.add_subcommand("diag", "Print structural coefficients of a matrix");
    diag_cmd->add_option("--in", diag.in, "input matrix CSV")->required();
    diag_cmd->add_option("--rank", diag.rank, "target rank")->required();

    BenchArgs bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run a benchmark experiment, write a CSV report");
    bench_cmd->add_option("kind", bench.kind, "lowrank, rank-sweep, eigengap or image")->required();
    bench_cmd->add_option("--d", bench.d, "synthetic dimension (default 1000)");
    bench_cmd->add_option("--rank", bench.rank, "target rank where fixed (default 5)");
    bench_cmd->add_option("--sigma", bench.sigma, "noise level for rank-sweep (default 0.05)");
    bench_cmd->add_option("--fracs", bench.fracs, "sampling-fraction grid override")
        ->delimiter(',');
    bench_cmd->add_option("--ranks", bench.ranks, "rank grid override")->delimiter(',');
    bench_cmd->add_option("--sigmas", bench.sigmas, "noise grid override (eigengap)")
        ->delimiter(',');
    bench_cmd->add_option("--image", bench.image, "input PGM for the image experiment");
    bench_cmd->add_option("--max-iter", bench.max_iter, "gradient-descent iteration cap (default 10)");
    bench_cmd->add_option("--reps", bench.reps, "replications per grid point")->required();
    bench_cmd->add_option("--seed", bench.seed, "random seed")->required();
    bench_cmd->add_option("--out", bench.out, "output report CSV")->required();
    bench_cmd->add_flag("--timings", bench.timings,
                        "record wall-clock times (makes reports non-reproducible)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen_cmd->parsed())
            return run_gen(gen);
        if (sample_cmd->parsed())
            return run_sample(sample);
        if (est_cmd->parsed())
            return run_estimate(estimate);
        if (diag_cmd->parsed())
            return run_diag(diag);
        if (bench_cmd->parsed())
            return run_bench(bench);
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
