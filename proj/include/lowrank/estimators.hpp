#pragma once

#include "lowrank/matrix_core.hpp"
#include "lowrank/sampling.hpp"
#include "lowrank/types.hpp"

#include <optional>
#include <vector>

namespace lowrank {

/// Backtracking (Armijo) line search parameters. Each iteration starts a
/// trial at initial_step and multiplies it by shrink until the sufficient
/// decrease condition f(trial) <= f(current) - c1 * eta * ||grad||_F^2
/// holds, where the trial point is projected onto the feasible set before f
/// is evaluated. After max_halvings failed trials the smallest step is
/// taken regardless.
struct LineSearchRule {
    double c1 = 1e-4;
    double shrink = 0.5;
    double initial_step = 1.0;
    int max_halvings = 30;
};

struct EstimatorConfig {
    int rank = 1;
    /// Row-cap parameter; unset selects sqrt(sigma_r(sketch) / 2).
    std::optional<double> beta;
    /// Constant step size; unset selects backtracking line search.
    std::optional<double> fixed_step;
    LineSearchRule line_search;
    int max_iters = 100;
    /// Stop once the max-abs gradient entry falls to this level.
    double grad_tol = 1e-6;
};

enum class StopReason { GradTol, MaxIters };

/// One line per visited iterate: objective and max-abs gradient entry on
/// entry to the iteration, and the step length taken from it (0 for the
/// final record).
struct TraceRow {
    double objective = 0.0;
    double grad_inf = 0.0;
    double step = 0.0;
};

struct PgdResult {
    FactorStack factors;
    Matrix estimate; // factors.top * factors.bottom^T
    std::vector<TraceRow> trace;
    int iterations = 0;
    StopReason reason = StopReason::GradTol;
    double beta = 0.0; // cap parameter actually used
};

/// Rank-r truncation of the importance-weighted dense sketch.
Matrix naive_estimate(const SketchBundle& s, int r);

/// Sum over sampled entries of squared residuals divided by the inclusion
/// probability, halved, plus a balance penalty
/// ||top^T top - bottom^T bottom||_F^2 / 8.
double objective_value(const SketchBundle& s, const FactorStack& f);

/// Exact gradient of objective_value with respect to both factors.
FactorStack objective_gradient(const SketchBundle& s, const FactorStack& f);

/// Caps row i of the top factor at row_norm_i / beta and row j of the
/// bottom factor at col_norm_j / beta, rescaling rows that exceed their cap.
/// beta = 0 leaves rows unconstrained; a zero source row pins the factor
/// row to zero. Idempotent, and interior rows pass through bit-identically.
FactorStack project_feasible(const FactorStack& f, const SketchBundle& s, double beta);

/// Balanced spectral initialization: with U S V^T the rank-r decomposition
/// of the dense sketch, top = U sqrt(S) and bottom = V sqrt(S), projected
/// onto the feasible set.
FactorStack init_factors(const SketchBundle& s, int r, double beta);

/// Projected gradient descent on the weighted completion objective,
/// starting from init_factors. Throws DivergenceError when the objective
/// turns non-finite.
PgdResult pgd_estimate(const SketchBundle& s, const EstimatorConfig& cfg);

} // namespace lowrank
