#pragma once

#include "lowrank/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lowrank {

enum class ExperimentKind {
    /// Noiseless rank-5 source, error versus sampling fraction.
    LowRank,
    /// Noisy source at a fixed fraction, error versus target rank.
    RankSweep,
    /// Noise-level grid at two fractions, error versus eigengap.
    Eigengap,
    /// Grayscale image source, error versus target rank.
    Image,
};

const char* experiment_name(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& name);

/// Grid and protocol knobs. default_params fills the grid used by each
/// experiment; callers may override any field before running.
struct ExperimentParams {
    int d = 1000;                  // synthetic dimension
    int rank = 5;                  // target rank where the grid is not over ranks
    double sigma = 0.05;           // noise level where fixed
    std::vector<double> fractions; // sampling-fraction grid
    std::vector<int> ranks;        // rank grid
    std::vector<double> sigmas;    // noise grid (eigengap experiment)
    int reps = 100;
    int max_iters = 10;
    std::string image_path;        // image experiment input
    bool measure_time = false;     // fill wall_ms (off keeps reports reproducible)
};

ExperimentParams default_params(ExperimentKind kind);

/// One estimator applied to one sampled sketch of one source matrix.
struct RunRecord {
    std::int64_t run_id = 0;
    std::string method;          // "naive" or "pgd"
    std::string scheme;          // "entry" or "rowcol"
    Index d1 = 0;
    Index d2 = 0;
    int rank = 0;
    double expected_fraction = 0.0;
    std::int64_t actual_count = 0;
    double rel_err_fro = 0.0;
    double rel_err_spec = 0.0;
    int iterations = 0;
    double final_grad_inf = 0.0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
};

/// Runs the protocol: per grid point and replication, calibrate both
/// sampling schemes to the same expected entry count, sample, run the naive
/// estimator on the entry-weighted sketch and gradient descent on the
/// row/column-weighted one, and compare both against the exact rank-r
/// truncation of the source. Per-run seeds derive from (seed, run index),
/// so replications are order-independent.
std::vector<RunRecord> run_experiment(ExperimentKind kind, const ExperimentParams& params,
                                      std::uint64_t seed);

/// CSV report, one row per record, ordered by (run_id, method). The header
/// is fixed; see RunRecord for field meanings.
void write_report(std::ostream& out, const std::vector<RunRecord>& records);
void write_report(const std::string& path, const std::vector<RunRecord>& records);

extern const char* const kReportHeader;

} // namespace lowrank
