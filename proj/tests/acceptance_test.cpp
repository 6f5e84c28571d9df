// Acceptance suite: ten end-to-end checks, one printed line each.
// Usage: acceptance_tests <path-to-cli-binary>

#include "lowrank/diagnostics.hpp"
#include "lowrank/estimators.hpp"
#include "lowrank/experiments.hpp"
#include "lowrank/matrix_core.hpp"
#include "lowrank/pgm.hpp"
#include "lowrank/rng.hpp"
#include "lowrank/sampling.hpp"
#include "lowrank/synthetic.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace lowrank;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string cli_path;
fs::path work_dir;

Matrix random_gaussian(std::uint64_t seed, Index rows, Index cols) {
    Matrix a(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            a(i, j) = gaussian_unit(seed, static_cast<std::uint64_t>(i),
                                    static_cast<std::uint64_t>(j));
    return a;
}

double rel_fro(const Matrix& est, const Matrix& ref) {
    return (est - ref).norm() / ref.norm();
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

// Mean rel_err_fro per (rank, fraction, method) cell of a report.
struct CellStats {
    double naive_sum = 0.0;
    double pgd_sum = 0.0;
    int count = 0; // replications per method
};

std::map<std::pair<int, double>, CellStats> cell_means(const std::vector<RunRecord>& records) {
    std::map<std::pair<int, double>, CellStats> cells;
    for (const RunRecord& r : records) {
        CellStats& c = cells[{r.rank, r.expected_fraction}];
        if (r.method == "naive") {
            c.naive_sum += r.rel_err_fro;
            ++c.count;
        } else {
            c.pgd_sum += r.rel_err_fro;
        }
    }
    return cells;
}

// ---------------------------------------------------------------------------
// 1. Exact recovery: rank-3 source, 60% row/column-weighted sampling,
//    rank-5 descent with T = 100 reaches 1e-4 in at least 18 of 20 runs,
//    within 10 seconds.
Outcome criterion1() {
    auto start = std::chrono::steady_clock::now();
    const Index d = 50;
    Matrix a = random_gaussian(20260101, d, 3) * random_gaussian(20260102, d, 3).transpose();
    double target = 0.6 * static_cast<double>(d * d);
    double n = calibrate_budget(a, SamplingScheme::RowColWeighted, target);

    int hits = 0;
    for (int run = 0; run < 20; ++run) {
        SketchBundle s =
            sample_sketch(a, SamplingScheme::RowColWeighted, n, derive_seed(424242, run));
        EstimatorConfig cfg;
        cfg.rank = 5;
        cfg.max_iters = 100;
        PgdResult res = pgd_estimate(s, cfg);
        if (rel_fro(res.estimate, a) <= 1e-4)
            ++hits;
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = hits >= 18 && seconds < 10.0;
    return {pass, std::to_string(hits) + "/20 runs at rel err <= 1e-4 in " + fmt(seconds) + " s"};
}

// 2. Large-scale recovery profile: d = 1000 noiseless rank-5 source at 50%
//    sampling, T = 10, 10 reps; descent mean <= 0.02, truncation mean in
//    [0.10, 0.20].
Outcome criterion2() {
    ExperimentParams p = default_params(ExperimentKind::LowRank);
    p.d = 1000;
    p.fractions = {0.5};
    p.reps = 10;
    p.max_iters = 10;
    auto records = run_experiment(ExperimentKind::LowRank, p, 1001);
    double naive = 0.0, pgd = 0.0;
    int reps = 0;
    for (const RunRecord& r : records) {
        if (r.method == "naive") {
            naive += r.rel_err_fro;
            ++reps;
        } else {
            pgd += r.rel_err_fro;
        }
    }
    naive /= reps;
    pgd /= reps;
    bool pass = pgd <= 0.02 && naive >= 0.10 && naive <= 0.20;
    return {pass, "pgd mean " + fmt(pgd) + " (need <= 0.02), naive mean " + fmt(naive) +
                      " (need in [0.10, 0.20])"};
}

// 3. Rank sweep: noisy source, 10% sampling; descent beats truncation at
//    every r in {2..8} and degrades less from r = 5 to r = 8.
Outcome criterion3() {
    ExperimentParams p = default_params(ExperimentKind::RankSweep);
    p.d = 200;
    p.sigma = 0.05;
    p.ranks = {2, 3, 4, 5, 6, 7, 8};
    p.fractions = {0.1};
    p.reps = 20;
    p.max_iters = 10;
    auto cells = cell_means(run_experiment(ExperimentKind::RankSweep, p, 3003));

    bool superior = true;
    std::map<int, std::pair<double, double>> by_rank;
    for (const auto& [key, c] : cells) {
        double naive = c.naive_sum / c.count;
        double pgd = c.pgd_sum / c.count;
        by_rank[key.first] = {naive, pgd};
        if (!(pgd < naive))
            superior = false;
    }
    double naive_increment = by_rank[8].first - by_rank[5].first;
    double pgd_increment = by_rank[8].second - by_rank[5].second;
    bool pass = superior && naive_increment > pgd_increment;
    return {pass, std::string("descent below truncation at all ranks: ") +
                      (superior ? "yes" : "no") + "; overshoot increments naive " +
                      fmt(naive_increment) + " vs pgd " + fmt(pgd_increment)};
}

// 4. Noise-level grid: five noise levels at 10% and 40% sampling; descent
//    mean error never exceeds truncation mean error.
Outcome criterion4() {
    ExperimentParams p = default_params(ExperimentKind::Eigengap);
    p.d = 200;
    p.sigmas = {0.02, 0.05, 0.1, 0.2, 0.4};
    p.fractions = {0.1, 0.4};
    p.reps = 20;
    p.max_iters = 10;
    auto records = run_experiment(ExperimentKind::Eigengap, p, 4004);

    // Grid points are consecutive run_id blocks of p.reps replications.
    std::map<std::int64_t, CellStats> grid;
    for (const RunRecord& r : records) {
        CellStats& c = grid[r.run_id / p.reps];
        if (r.method == "naive") {
            c.naive_sum += r.rel_err_fro;
            ++c.count;
        } else {
            c.pgd_sum += r.rel_err_fro;
        }
    }
    int worse = 0;
    for (const auto& [idx, c] : grid)
        if (c.pgd_sum > c.naive_sum)
            ++worse;
    bool pass = grid.size() == 10 && worse == 0;
    return {pass, std::to_string(grid.size()) + " grid points, descent worse at " +
                      std::to_string(worse) + " (need 0)"};
}

// 5. Image study on a synthesized stand-in: full-rank grayscale PGM with a
//    dominant top singular value; at 10% sampling the truncation/descent
//    mean error ratio is at least 2 for r in {5, 10, 20}.
Matrix make_test_image() {
    const Index d = 320;
    Matrix img(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) {
            double x = static_cast<double>(i) / (d - 1);
            double y = static_cast<double>(j) / (d - 1);
            double v = 110.0 + 60.0 * x + 25.0 * y +
                       45.0 * std::sin(2.2 * M_PI * x + 0.4) * std::cos(1.7 * M_PI * y + 0.9) +
                       16.0 * (uniform_unit(987654, static_cast<std::uint64_t>(i),
                                            static_cast<std::uint64_t>(j)) -
                               0.5);
            img(i, j) = std::round(std::min(255.0, std::max(0.0, v)));
        }
    return img;
}

Outcome criterion5() {
    fs::path img_path = work_dir / "standin.pgm";
    write_pgm(img_path.string(), make_test_image());
    Matrix img = read_pgm(img_path.string());

    // Fixture preconditions: at least 256x256, full rank, top singular
    // value holding at least half the squared Frobenius mass.
    SvdResult svd = svd_deterministic(img);
    Index k = std::min(img.rows(), img.cols());
    bool full_rank = svd.sigma(k - 1) > 1e-8 * svd.sigma(0);
    bool dominant = svd.sigma(0) * svd.sigma(0) >= 0.5 * img.squaredNorm();
    if (img.rows() < 256 || img.cols() < 256 || !full_rank || !dominant)
        return {false, "stand-in image violates its preconditions"};

    ExperimentParams p = default_params(ExperimentKind::Image);
    p.ranks = {5, 10, 20};
    p.fractions = {0.1};
    p.reps = 10;
    p.max_iters = 10;
    p.image_path = img_path.string();
    auto cells = cell_means(run_experiment(ExperimentKind::Image, p, 5005));

    std::string detail = "naive/pgd ratios:";
    bool pass = true;
    for (const auto& [key, c] : cells) {
        double ratio = (c.naive_sum / c.count) / (c.pgd_sum / c.count);
        detail += " r" + std::to_string(key.first) + "=" + fmt(ratio);
        if (!(ratio >= 2.0))
            pass = false;
    }
    return {pass, detail + " (need >= 2)"};
}

// 6. Unbiasedness: Monte Carlo mean of 10,000 weighted sketches matches the
//    source entrywise within four standard errors.
Outcome criterion6() {
    Matrix a(5, 5);
    for (Index i = 0; i < 5; ++i)
        for (Index j = 0; j < 5; ++j)
            a(i, j) = static_cast<double>((i * 5 + j) % 7) - 3.0 + 0.5 * (i == j);
    ProbabilityMatrix p = compute_probabilities(a, SamplingScheme::RowColWeighted, 12.0);

    const int trials = 10000;
    Matrix mean = Matrix::Zero(5, 5);
    for (int t = 0; t < trials; ++t) {
        Mask mask = draw_mask(p, derive_seed(606060, t));
        mean += sketch_to_dense(build_sketch(a, p, mask, SamplingScheme::RowColWeighted, 12.0, 0));
    }
    mean /= trials;

    int outside = 0;
    for (Index i = 0; i < 5; ++i)
        for (Index j = 0; j < 5; ++j) {
            double pij = p(i, j);
            double se = std::abs(a(i, j)) * std::sqrt((1.0 - pij) / (pij * trials));
            if (std::abs(mean(i, j) - a(i, j)) > 4.0 * se + 1e-12)
                ++outside;
        }
    return {outside == 0, std::to_string(outside) + " of 25 entries outside 4 standard errors"};
}

// 7. Gradient correctness: analytic vs central finite differences on 20
//    random instances, relative error at most 1e-5.
Outcome criterion7() {
    double worst = 0.0;
    for (std::uint64_t inst = 0; inst < 20; ++inst) {
        Matrix a = random_gaussian(derive_seed(707070, inst), 7, 6);
        SketchBundle s = sample_sketch(a, SamplingScheme::RowColWeighted, 20.0, inst);
        FactorStack f{random_gaussian(derive_seed(717171, inst), 7, 2),
                      random_gaussian(derive_seed(727272, inst), 6, 2)};
        FactorStack g = objective_gradient(s, f);

        FactorStack fd = f;
        double num2 = 0.0, den2 = 0.0;
        auto probe = [&](Matrix& m, const Matrix& exact, Index i, Index j) {
            double saved = m(i, j);
            double h = 1e-6 * std::max(1.0, std::abs(saved));
            m(i, j) = saved + h;
            double fp = objective_value(s, fd);
            m(i, j) = saved - h;
            double fm = objective_value(s, fd);
            m(i, j) = saved;
            double diff = (fp - fm) / (2.0 * h) - exact(i, j);
            num2 += diff * diff;
            den2 += exact(i, j) * exact(i, j);
        };
        for (Index i = 0; i < 7; ++i)
            for (Index j = 0; j < 2; ++j)
                probe(fd.top, g.top, i, j);
        for (Index i = 0; i < 6; ++i)
            for (Index j = 0; j < 2; ++j)
                probe(fd.bottom, g.bottom, i, j);
        worst = std::max(worst, std::sqrt(num2 / den2));
    }
    return {worst <= 1e-5, "worst relative gradient error " + fmt(worst) + " (need <= 1e-5)"};
}

// 8. Tail-energy identity of the truncation on random matrices up to 20x20,
//    every rank, within 1e-8 relative.
Outcome criterion8() {
    double worst = 0.0;
    for (std::uint64_t inst = 0; inst < 12; ++inst) {
        Index rows = 3 + static_cast<Index>(inst % 18);
        Index cols = 3 + static_cast<Index>((7 * inst + 5) % 18);
        Matrix a = random_gaussian(derive_seed(808080, inst), rows, cols);
        SvdResult svd = svd_deterministic(a);
        Index k = std::min(rows, cols);
        for (int r = 1; r <= k; ++r) {
            double tail = 0.0;
            for (Index i = r; i < k; ++i)
                tail += svd.sigma(i) * svd.sigma(i);
            double resid = (a - truncate_rank(svd, r).matrix).squaredNorm();
            worst = std::max(worst, std::abs(resid - tail) / std::max(1.0, a.squaredNorm()));
        }
    }
    return {worst <= 1e-8, "worst identity error " + fmt(worst) + " (need <= 1e-8)"};
}

// 9. Calibration accuracy: budgets hit their expected-count targets within
//    max(1, 0.1%) on random 100x100 matrices for both schemes.
Outcome criterion9() {
    Matrix a = random_gaussian(909090, 100, 100);
    double worst = 0.0;
    for (auto scheme : {SamplingScheme::EntryWeighted, SamplingScheme::RowColWeighted}) {
        for (double target : {500.0, 2500.0, 7500.0}) {
            double n = calibrate_budget(a, scheme, target);
            double e = expected_count(compute_probabilities(a, scheme, n));
            double excess = std::abs(e - target) / std::max(1.0, 1e-3 * target);
            worst = std::max(worst, excess);
        }
    }
    return {worst <= 1.0, "worst calibration error at " + fmt(worst) + "x the allowance"};
}

// 10. CLI determinism: every command rerun with identical flags and seed
//     yields byte-identical output files (and stdout).
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool run_cli(const std::string& args, const fs::path& stdout_file) {
    std::string cmd = "\"" + cli_path + "\" " + args + " > \"" + stdout_file.string() + "\"";
    int rc = std::system(cmd.c_str());
    return rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
}

Outcome criterion10() {
    fs::path dir = work_dir / "cli";
    fs::create_directories(dir);
    auto file = [&](const char* name) { return (dir / name).string(); };

    struct Step {
        std::string name;
        std::string args;
        std::vector<std::string> outputs; // files to compare across reruns
    };
    std::vector<Step> steps = {
        {"gen",
         "gen --kind noisy --d 60 --sigma 0.1 --seed 7 --out " + file("a.csv"),
         {file("a.csv")}},
        {"sample",
         "sample --in " + file("a.csv") + " --scheme rowcol --frac 0.3 --seed 11 --out " +
             file("a.skz"),
         {file("a.skz")}},
        {"estimate-naive",
         "estimate --sketch " + file("a.skz") + " --method naive --rank 4 --out " +
             file("naive.csv"),
         {file("naive.csv")}},
        {"estimate-pgd",
         "estimate --sketch " + file("a.skz") +
             " --method pgd --rank 4 --max-iter 20 --out " + file("pgd.csv"),
         {file("pgd.csv")}},
        {"diag", "diag --in " + file("a.csv") + " --rank 4", {}},
        {"bench",
         "bench rank-sweep --d 30 --ranks 3,4 --fracs 0.25 --sigma 0.05 --reps 2 --seed 13 "
         "--out " + file("report.csv"),
         {file("report.csv")}},
    };

    for (const Step& step : steps) {
        fs::path out1 = dir / (step.name + ".stdout1");
        if (!run_cli(step.args, out1))
            return {false, step.name + " failed on first invocation"};
        std::vector<std::string> first;
        for (const std::string& f : step.outputs)
            first.push_back(slurp(f));
        std::string stdout_first = slurp(out1);

        fs::path out2 = dir / (step.name + ".stdout2");
        if (!run_cli(step.args, out2))
            return {false, step.name + " failed on second invocation"};
        for (std::size_t k = 0; k < step.outputs.size(); ++k)
            if (slurp(step.outputs[k]) != first[k])
                return {false, step.name + " produced different bytes in " + step.outputs[k]};
        if (slurp(out2) != stdout_first)
            return {false, step.name + " produced different stdout"};
    }
    return {true, std::to_string(steps.size()) + " commands byte-stable on rerun"};
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance_tests <path-to-cli-binary>\n";
        return 2;
    }
    cli_path = argv[1];

    work_dir = fs::temp_directory_path() /
               ("lowrank_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(work_dir);

    struct Criterion {
        int number;
        const char* label;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria = {
        {1, "exact recovery of a rank-3 matrix from 60% sampling", criterion1},
        {2, "error profile at d = 1000 with 50% sampling", criterion2},
        {3, "rank sweep superiority and overshoot robustness", criterion3},
        {4, "noise grid superiority at 10% and 40% sampling", criterion4},
        {5, "image study error ratio at 10% sampling", criterion5},
        {6, "sketch unbiasedness over 10000 masks", criterion6},
        {7, "analytic gradient matches finite differences", criterion7},
        {8, "truncation tail-energy identity", criterion8},
        {9, "budget calibration accuracy", criterion9},
        {10, "CLI determinism across reruns", criterion10},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.label
                  << " -- " << out.detail << std::endl;
        if (!out.pass)
            ++failures;
    }

    std::error_code ec;
    fs::remove_all(work_dir, ec);
    return failures;
}
