#pragma once

#include "lowrank/sampling.hpp"
#include "lowrank/types.hpp"

#include <optional>
#include <string>

namespace lowrank {

/// How much of the matrix mass the best rank-r approximation captures,
/// row by row and column by column, plus the spectral quantities that
/// control estimator error.
struct StructureReport {
    /// Largest ratio of a rank-r-approximation row (or column) norm to the
    /// matching source norm; 1 means some row/column is fully captured.
    double mu_r = 0.0;
    /// sqrt(1 - min over rows/columns of the squared captured fraction);
    /// 0 exactly when the matrix has rank at most r.
    double nu_r = 0.0;
    /// Largest entrywise tail deviation |a_ij - (a_r)_ij| relative to
    /// |a_ij| + (||A_i.||^2 + ||A_.j||^2) / ||A||_F.
    double nu_r_inf = 0.0;
    double eigengap = 0.0;  // sigma_r - sigma_{r+1}
    double kappa_r = 0.0;   // sigma_{r+1} / sigma_r
    double kappa = 0.0;     // sigma_1 / sigma_r
};

struct ErrorMetrics {
    double rel_fro = 0.0;  // ||est - ref||_F / ||ref||_F
    double rel_spec = 0.0; // ||est - ref||_2 / ||ref||_2
    double abs_fro = 0.0;
};

/// Closed-form error predictions evaluated with all universal constants set
/// to 1; useful for shape comparisons, not absolute calibration.
enum class BoundId {
    /// Truncated-sketch error: ||A||_F sqrt(r d / n) (1 + sqrt(sigma_{r+1}
    /// sigma_1) / (sigma_r - sigma_{r+1})), d = max(d1, d2).
    NaiveError,
    /// Tail-sketch deviation via nu_r and nu_r_inf:
    /// (nu_r + nu_r_inf sqrt(d log d / n)) ||A||_F sqrt(d / n).
    TailDeviationNuInf,
    /// Tail-sketch deviation via mu_r:
    /// max{nu_r, (1 + mu_r^2 ||A||_F / sigma_r) sqrt(d log d / n)}
    ///   * ||A||_F sqrt(d / n).
    TailDeviationMu,
    /// Iterate contraction factor [max(0, 1 - eta (sigma_r - sigma_{r+1})
    /// / 5)]^{t/2}; needs step_size and iterations.
    PgdContraction,
    /// Stationary error floor sqrt(r) dev sigma_r / (sigma_r - sigma_{r+1});
    /// needs measured_deviation.
    PgdNoiseFloor,
};

/// Extra inputs for the iteration-dependent bounds.
struct BoundExtras {
    std::optional<double> step_size;
    std::optional<int> iterations;
    std::optional<double> measured_deviation;
};

struct BoundReport {
    BoundId id = BoundId::NaiveError;
    double value = 0.0;
    std::string constants_note;
};

/// Requires a nonzero matrix and 1 <= r <= min(d1, d2). Rows and columns
/// of the source that are exactly zero are skipped in the ratio scans.
StructureReport structure_coefficients(const Matrix& a, int r);

/// Requires a nonzero reference (relative metrics are always computed).
ErrorMetrics error_metrics(const Matrix& estimate, const Matrix& reference);

/// Evaluates one bound for matrix a at rank r and expected budget n.
/// Requires a positive eigengap sigma_r > sigma_{r+1}.
BoundReport evaluate_bound(BoundId id, const Matrix& a, int r, double n,
                           const BoundExtras& extras = {});

/// Spectral norm of the sketch-minus-identity action on b: the dense matrix
/// with entries b_ij / p_ij - b_ij at sampled positions and -b_ij elsewhere,
/// using the sketch's positions and probabilities.
double measure_sketch_deviation(const SketchBundle& s, const Matrix& b);

} // namespace lowrank
