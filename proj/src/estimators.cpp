#include "lowrank/estimators.hpp"

#include <cmath>
#include <limits>

namespace lowrank {

namespace {

void check_sketch(const SketchBundle& s) {
    if (s.d1 < 1 || s.d2 < 1)
        throw InputError("estimator: sketch has empty dimensions");
    if (s.row_norms.size() != s.d1 || s.col_norms.size() != s.d2)
        throw InputError("estimator: sketch norm vectors do not match dimensions");
}

void check_factors(const SketchBundle& s, const FactorStack& f, const char* what) {
    if (f.top.rows() != s.d1 || f.bottom.rows() != s.d2 || f.top.cols() != f.bottom.cols() ||
        f.top.cols() < 1)
        throw InputError(std::string(what) + ": factor shapes do not match the sketch");
}

int check_rank(const SketchBundle& s, int r, const char* what) {
    Index k = std::min(s.d1, s.d2);
    if (r < 1 || r > k)
        throw InputError(std::string(what) + ": rank " + std::to_string(r) + " outside [1, " +
                         std::to_string(k) + "]");
    return r;
}

// Rows whose norm exceeds the cap are rescaled onto it; a sliver of slack
// keeps the operation exactly idempotent under floating point.
void cap_rows(Matrix& m, const Vector& norms, double beta) {
    if (beta == 0.0)
        return;
    for (Index i = 0; i < m.rows(); ++i) {
        double cap = norms(i) / beta;
        double nrm = m.row(i).norm();
        if (nrm > cap * (1.0 + 1e-12))
            m.row(i) *= cap / nrm;
    }
}

FactorStack initial_factors_from_svd(const SvdResult& svd, int r) {
    Vector scale = svd.sigma.head(r).cwiseSqrt();
    FactorStack f;
    f.top = svd.u.leftCols(r) * scale.asDiagonal();
    f.bottom = svd.v.leftCols(r) * scale.asDiagonal();
    return f;
}

double grad_inf_norm(const FactorStack& g) {
    double a = g.top.size() ? g.top.cwiseAbs().maxCoeff() : 0.0;
    double b = g.bottom.size() ? g.bottom.cwiseAbs().maxCoeff() : 0.0;
    return std::max(a, b);
}

} // namespace

Matrix naive_estimate(const SketchBundle& s, int r) {
    check_sketch(s);
    check_rank(s, r, "naive_estimate");
    return truncate_rank(sketch_to_dense(s), r).matrix;
}

double objective_value(const SketchBundle& s, const FactorStack& f) {
    check_sketch(s);
    check_factors(s, f, "objective_value");
    double fit = 0.0;
    for (const SketchEntry& e : s.entries) {
        double rsd = e.value - f.top.row(e.i).dot(f.bottom.row(e.j));
        fit += rsd * rsd / e.prob;
    }
    Matrix gram = f.top.transpose() * f.top - f.bottom.transpose() * f.bottom;
    return 0.5 * fit + 0.125 * gram.squaredNorm();
}

FactorStack objective_gradient(const SketchBundle& s, const FactorStack& f) {
    check_sketch(s);
    check_factors(s, f, "objective_gradient");
    FactorStack g;
    g.top = Matrix::Zero(f.top.rows(), f.top.cols());
    g.bottom = Matrix::Zero(f.bottom.rows(), f.bottom.cols());
    for (const SketchEntry& e : s.entries) {
        double w = (f.top.row(e.i).dot(f.bottom.row(e.j)) - e.value) / e.prob;
        g.top.row(e.i) += w * f.bottom.row(e.j);
        g.bottom.row(e.j) += w * f.top.row(e.i);
    }
    Matrix gram = f.top.transpose() * f.top - f.bottom.transpose() * f.bottom;
    g.top += 0.5 * f.top * gram;
    g.bottom -= 0.5 * f.bottom * gram;
    return g;
}

FactorStack project_feasible(const FactorStack& f, const SketchBundle& s, double beta) {
    check_sketch(s);
    check_factors(s, f, "project_feasible");
    if (beta < 0.0 || !std::isfinite(beta))
        throw InputError("project_feasible: beta must be finite and nonnegative");
    FactorStack out = f;
    cap_rows(out.top, s.row_norms, beta);
    cap_rows(out.bottom, s.col_norms, beta);
    return out;
}

FactorStack init_factors(const SketchBundle& s, int r, double beta) {
    check_sketch(s);
    check_rank(s, r, "init_factors");
    SvdResult svd = svd_deterministic(sketch_to_dense(s));
    return project_feasible(initial_factors_from_svd(svd, r), s, beta);
}

PgdResult pgd_estimate(const SketchBundle& s, const EstimatorConfig& cfg) {
    check_sketch(s);
    int r = check_rank(s, cfg.rank, "pgd_estimate");
    if (cfg.max_iters < 0)
        throw InputError("pgd_estimate: max_iters must be nonnegative");
    if (!(cfg.grad_tol > 0.0))
        throw InputError("pgd_estimate: grad_tol must be positive");
    if (cfg.beta && (!(*cfg.beta >= 0.0) || !std::isfinite(*cfg.beta)))
        throw InputError("pgd_estimate: beta must be finite and nonnegative");
    if (cfg.fixed_step && !(*cfg.fixed_step > 0.0))
        throw InputError("pgd_estimate: fixed step must be positive");
    const LineSearchRule& ls = cfg.line_search;
    if (!cfg.fixed_step &&
        (!(ls.c1 > 0.0) || !(ls.shrink > 0.0 && ls.shrink < 1.0) || !(ls.initial_step > 0.0) ||
         ls.max_halvings < 0))
        throw InputError("pgd_estimate: invalid line search parameters");

    SvdResult svd = svd_deterministic(sketch_to_dense(s));
    double beta = cfg.beta ? *cfg.beta : std::sqrt(svd.sigma(r - 1) / 2.0);
    FactorStack x = project_feasible(initial_factors_from_svd(svd, r), s, beta);

    PgdResult out;
    out.beta = beta;
    double f_cur = objective_value(s, x);

    int t = 0;
    for (;; ++t) {
        if (!std::isfinite(f_cur))
            throw DivergenceError("pgd_estimate: objective became non-finite", t);
        FactorStack g = objective_gradient(s, x);
        double ginf = grad_inf_norm(g);
        if (ginf <= cfg.grad_tol || t >= cfg.max_iters) {
            out.trace.push_back({f_cur, ginf, 0.0});
            out.reason = (ginf <= cfg.grad_tol) ? StopReason::GradTol : StopReason::MaxIters;
            break;
        }

        double f_next = 0.0;
        FactorStack next;
        double step = 0.0;
        if (cfg.fixed_step) {
            step = *cfg.fixed_step;
            next.top = x.top - step * g.top;
            next.bottom = x.bottom - step * g.bottom;
            next = project_feasible(next, s, beta);
            f_next = objective_value(s, next);
        } else {
            double g2 = g.top.squaredNorm() + g.bottom.squaredNorm();
            double eta = ls.initial_step;
            for (int h = 0;; ++h) {
                next.top = x.top - eta * g.top;
                next.bottom = x.bottom - eta * g.bottom;
                next = project_feasible(next, s, beta);
                f_next = objective_value(s, next);
                // Accept on sufficient decrease, or keep the smallest step
                // once the halving budget is spent.
                if (f_next <= f_cur - ls.c1 * eta * g2 || h >= ls.max_halvings)
                    break;
                eta *= ls.shrink;
            }
            step = eta;
        }
        if (!std::isfinite(f_next))
            throw DivergenceError("pgd_estimate: objective became non-finite", t);
        out.trace.push_back({f_cur, ginf, step});
        x = std::move(next);
        f_cur = f_next;
    }

    out.iterations = t;
    out.factors = std::move(x);
    out.estimate = out.factors.top * out.factors.bottom.transpose();
    return out;
}

} // namespace lowrank
