#include "lowrank/experiments.hpp"

#include "lowrank/estimators.hpp"
#include "lowrank/matrix_core.hpp"
#include "lowrank/numeric_text.hpp"
#include "lowrank/pgm.hpp"
#include "lowrank/rng.hpp"
#include "lowrank/sampling.hpp"
#include "lowrank/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <tuple>

namespace lowrank {

const char* const kReportHeader =
    "run_id,method,scheme,d1,d2,rank,expected_fraction,actual_count,"
    "rel_err_fro,rel_err_spec,iterations,final_grad_inf,seed,wall_ms";

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::LowRank: return "lowrank";
    case ExperimentKind::RankSweep: return "rank-sweep";
    case ExperimentKind::Eigengap: return "eigengap";
    case ExperimentKind::Image: return "image";
    }
    return "unknown";
}

ExperimentKind parse_experiment(const std::string& name) {
    if (name == "lowrank") return ExperimentKind::LowRank;
    if (name == "rank-sweep") return ExperimentKind::RankSweep;
    if (name == "eigengap") return ExperimentKind::Eigengap;
    if (name == "image") return ExperimentKind::Image;
    throw InputError("unknown experiment '" + name +
                     "' (expected lowrank, rank-sweep, eigengap or image)");
}

ExperimentParams default_params(ExperimentKind kind) {
    ExperimentParams p;
    switch (kind) {
    case ExperimentKind::LowRank:
        p.fractions = {0.1, 0.2, 0.3, 0.4, 0.5};
        p.rank = 5;
        break;
    case ExperimentKind::RankSweep:
        p.ranks = {2, 3, 4, 5, 6, 7, 8, 9, 10};
        p.fractions = {0.1};
        p.sigma = 0.05;
        break;
    case ExperimentKind::Eigengap:
        p.sigmas = {0.02, 0.05, 0.1, 0.2, 0.4};
        p.fractions = {0.1, 0.4};
        p.rank = 5;
        break;
    case ExperimentKind::Image:
        p.ranks = {5, 10, 20, 30};
        p.fractions = {0.1};
        break;
    }
    return p;
}

namespace {

struct SourceContext {
    Matrix a;
    SvdResult svd; // of a, shared across ranks and replications
};

struct GridPoint {
    const SourceContext* source = nullptr;
    double fraction = 0.0;
    int rank = 0;
};

void check_params(const ExperimentParams& p) {
    if (p.reps < 1)
        throw InputError("run_experiment: reps must be at least 1");
    if (p.max_iters < 0)
        throw InputError("run_experiment: max_iters must be nonnegative");
    if (p.fractions.empty())
        throw InputError("run_experiment: sampling-fraction grid is empty");
    for (double f : p.fractions)
        if (!(f > 0.0 && f <= 1.0))
            throw InputError("run_experiment: sampling fraction must lie in (0, 1]");
}

double measured_ms(std::chrono::steady_clock::time_point start) {
    auto elapsed = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double, std::milli>(elapsed).count();
}

// Revisits one grid point for one replication: two calibrated sketches,
// two estimates, two records.
void run_one(const GridPoint& g, const ExperimentParams& params, std::int64_t run_id,
             std::uint64_t run_seed, std::vector<RunRecord>& out) {
    const Matrix& a = g.source->a;
    const SvdResult& svd = g.source->svd;
    double size = static_cast<double>(a.rows()) * static_cast<double>(a.cols());
    double target = g.fraction * size;

    Matrix ref = truncate_rank(svd, g.rank).matrix;
    double ref_fro = ref.norm();
    double ref_spec = svd.sigma(0);

    auto emit = [&](const char* method, SamplingScheme scheme, std::uint64_t sketch_seed) {
        auto start = std::chrono::steady_clock::now();
        double n = calibrate_budget(a, scheme, target);
        SketchBundle s = sample_sketch(a, scheme, n, sketch_seed);

        RunRecord rec;
        rec.run_id = run_id;
        rec.method = method;
        rec.scheme = scheme_name(scheme);
        rec.d1 = a.rows();
        rec.d2 = a.cols();
        rec.rank = g.rank;
        rec.expected_fraction = g.fraction;
        rec.actual_count = static_cast<std::int64_t>(s.entries.size());
        rec.seed = sketch_seed;

        Matrix est;
        if (std::string_view(method) == "naive") {
            est = naive_estimate(s, g.rank);
        } else {
            EstimatorConfig cfg;
            cfg.rank = g.rank;
            cfg.max_iters = params.max_iters;
            PgdResult res = pgd_estimate(s, cfg);
            est = std::move(res.estimate);
            rec.iterations = res.iterations;
            rec.final_grad_inf = res.trace.back().grad_inf;
        }
        Matrix diff = est - ref;
        rec.rel_err_fro = diff.norm() / ref_fro;
        rec.rel_err_spec = spectral_norm(diff) / ref_spec;
        if (params.measure_time)
            rec.wall_ms = measured_ms(start);
        out.push_back(std::move(rec));
    };

    emit("naive", SamplingScheme::EntryWeighted, derive_seed(run_seed, 0));
    emit("pgd", SamplingScheme::RowColWeighted, derive_seed(run_seed, 1));
}

} // namespace

std::vector<RunRecord> run_experiment(ExperimentKind kind, const ExperimentParams& params,
                                      std::uint64_t seed) {
    check_params(params);

    std::vector<SourceContext> sources;
    std::vector<GridPoint> grid;
    auto add_source = [&](Matrix a) {
        SourceContext ctx;
        ctx.svd = svd_deterministic(a);
        ctx.a = std::move(a);
        sources.push_back(std::move(ctx));
    };

    switch (kind) {
    case ExperimentKind::LowRank: {
        add_source(generate_synthetic({params.d, SyntheticKind::LowRank, 0.0, seed}));
        for (double f : params.fractions)
            grid.push_back({&sources[0], f, params.rank});
        break;
    }
    case ExperimentKind::RankSweep: {
        if (params.ranks.empty())
            throw InputError("run_experiment: rank grid is empty");
        add_source(generate_synthetic({params.d, SyntheticKind::NoisyLowRank, params.sigma, seed}));
        for (int r : params.ranks)
            grid.push_back({&sources[0], params.fractions.front(), r});
        break;
    }
    case ExperimentKind::Eigengap: {
        if (params.sigmas.empty())
            throw InputError("run_experiment: sigma grid is empty");
        for (double sg : params.sigmas) {
            if (!(sg >= 0.0))
                throw InputError("run_experiment: sigma must be nonnegative");
            add_source(generate_synthetic({params.d, SyntheticKind::NoisyLowRank, sg, seed}));
        }
        for (std::size_t k = 0; k < params.sigmas.size(); ++k)
            for (double f : params.fractions)
                grid.push_back({&sources[k], f, params.rank});
        break;
    }
    case ExperimentKind::Image: {
        if (params.ranks.empty())
            throw InputError("run_experiment: rank grid is empty");
        if (params.image_path.empty())
            throw InputError("run_experiment: image experiment needs an input path");
        add_source(read_pgm(params.image_path));
        for (int r : params.ranks)
            grid.push_back({&sources[0], params.fractions.front(), r});
        break;
    }
    }

    for (const GridPoint& g : grid) {
        Index k = std::min(g.source->a.rows(), g.source->a.cols());
        if (g.rank < 1 || g.rank > k)
            throw InputError("run_experiment: rank " + std::to_string(g.rank) +
                             " outside [1, " + std::to_string(k) + "]");
    }

    std::vector<RunRecord> records;
    records.reserve(grid.size() * static_cast<std::size_t>(params.reps) * 2);
    std::int64_t run_id = 0;
    for (const GridPoint& g : grid)
        for (int rep = 0; rep < params.reps; ++rep, ++run_id)
            run_one(g, params, run_id, derive_seed(seed, static_cast<std::uint64_t>(run_id)),
                    records);

    std::stable_sort(records.begin(), records.end(), [](const RunRecord& x, const RunRecord& y) {
        return std::tie(x.run_id, x.method) < std::tie(y.run_id, y.method);
    });
    return records;
}

void write_report(std::ostream& out, const std::vector<RunRecord>& records) {
    if (records.empty())
        throw InputError("write_report: no records");
    out << kReportHeader << '\n';
    std::string line;
    for (const RunRecord& r : records) {
        line.clear();
        line += format_int(r.run_id);
        line += ',';
        line += r.method;
        line += ',';
        line += r.scheme;
        line += ',';
        line += format_int(r.d1);
        line += ',';
        line += format_int(r.d2);
        line += ',';
        line += format_int(r.rank);
        line += ',';
        line += format_double(r.expected_fraction);
        line += ',';
        line += format_int(r.actual_count);
        line += ',';
        line += format_double(r.rel_err_fro);
        line += ',';
        line += format_double(r.rel_err_spec);
        line += ',';
        line += format_int(r.iterations);
        line += ',';
        line += format_double(r.final_grad_inf);
        line += ',';
        line += format_uint(r.seed);
        line += ',';
        line += format_double(r.wall_ms);
        line += '\n';
        out << line;
    }
}

void write_report(const std::string& path, const std::vector<RunRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot open '" + path + "' for writing");
    write_report(out, records);
    if (!out)
        throw InputError("failed writing report to '" + path + "'");
}

} // namespace lowrank
