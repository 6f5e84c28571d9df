#include "lowrank/diagnostics.hpp"

#include "lowrank/matrix_core.hpp"

#include <algorithm>
#include <cmath>

namespace lowrank {

namespace {

constexpr const char* kConstantsNote = "universal constants set to 1; shape-only";

struct SpectralTriple {
    double sigma_1 = 0.0;
    double sigma_r = 0.0;
    double sigma_r1 = 0.0; // 0 when r = min(d1, d2)
};

SpectralTriple spectral_triple(const Vector& sigma, int r) {
    SpectralTriple t;
    t.sigma_1 = sigma(0);
    t.sigma_r = sigma(r - 1);
    t.sigma_r1 = (r < sigma.size()) ? sigma(r) : 0.0;
    return t;
}

int check_rank_for(const Matrix& a, int r, const char* what) {
    Index k = std::min(a.rows(), a.cols());
    if (r < 1 || r > k)
        throw InputError(std::string(what) + ": rank " + std::to_string(r) + " outside [1, " +
                         std::to_string(k) + "]");
    return r;
}

} // namespace

StructureReport structure_coefficients(const Matrix& a, int r) {
    check_rank_for(a, r, "structure_coefficients");
    require_finite(a, "structure_coefficients");
    if (a.cwiseAbs().maxCoeff() == 0.0)
        throw InputError("structure_coefficients: matrix is identically zero");

    SvdResult svd = svd_deterministic(a);
    Matrix ar = truncate_rank(svd, r).matrix;
    SpectralTriple t = spectral_triple(svd.sigma, r);

    double fro = a.norm();
    auto [row_a, col_a] = row_col_norms(a);
    auto [row_r, col_r] = row_col_norms(ar);

    double mu = 0.0;
    double min_ratio2 = 1.0;
    auto scan = [&](const Vector& approx, const Vector& source) {
        for (Index i = 0; i < source.size(); ++i) {
            if (source(i) == 0.0)
                continue; // zero rows/columns carry no mass to capture
            double ratio = approx(i) / source(i);
            mu = std::max(mu, ratio);
            min_ratio2 = std::min(min_ratio2, ratio * ratio);
        }
    };
    scan(row_r, row_a);
    scan(col_r, col_a);

    StructureReport rep;
    rep.mu_r = mu;
    rep.nu_r = std::sqrt(std::max(0.0, 1.0 - min_ratio2));

    Vector row2 = row_a.cwiseAbs2();
    Vector col2 = col_a.cwiseAbs2();
    double nu_inf = 0.0;
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) {
            double den = std::abs(a(i, j)) + (row2(i) + col2(j)) / fro;
            if (den == 0.0)
                continue;
            nu_inf = std::max(nu_inf, std::abs(a(i, j) - ar(i, j)) / den);
        }
    rep.nu_r_inf = nu_inf;

    rep.eigengap = std::max(0.0, t.sigma_r - t.sigma_r1);
    rep.kappa_r = t.sigma_r1 / t.sigma_r;
    rep.kappa = t.sigma_1 / t.sigma_r;
    return rep;
}

ErrorMetrics error_metrics(const Matrix& estimate, const Matrix& reference) {
    if (estimate.rows() != reference.rows() || estimate.cols() != reference.cols())
        throw InputError("error_metrics: estimate and reference shapes differ");
    require_finite(estimate, "error_metrics");
    require_finite(reference, "error_metrics");
    double ref_fro = reference.norm();
    if (ref_fro == 0.0)
        throw InputError("error_metrics: zero reference with relative metric requested");
    Matrix diff = estimate - reference;
    ErrorMetrics m;
    m.abs_fro = diff.norm();
    m.rel_fro = m.abs_fro / ref_fro;
    m.rel_spec = spectral_norm(diff) / spectral_norm(reference);
    return m;
}

BoundReport evaluate_bound(BoundId id, const Matrix& a, int r, double n,
                           const BoundExtras& extras) {
    check_rank_for(a, r, "evaluate_bound");
    require_finite(a, "evaluate_bound");
    if (!(n > 0.0) || !std::isfinite(n))
        throw InputError("evaluate_bound: budget n must be positive and finite");

    SvdResult svd = svd_deterministic(a);
    SpectralTriple t = spectral_triple(svd.sigma, r);
    double gap = t.sigma_r - t.sigma_r1;
    if (!(gap > 0.0))
        throw InputError("evaluate_bound: degenerate spectrum, sigma_r equals sigma_{r+1}");

    double d = static_cast<double>(std::max(a.rows(), a.cols()));
    double fro = a.norm();
    double tail_scale = fro * std::sqrt(d / n);
    double log_term = std::sqrt(d * std::log(d) / n);

    BoundReport rep;
    rep.id = id;
    rep.constants_note = kConstantsNote;
    switch (id) {
    case BoundId::NaiveError:
        rep.value = fro * std::sqrt(static_cast<double>(r) * d / n) *
                    (1.0 + std::sqrt(t.sigma_r1 * t.sigma_1) / gap);
        break;
    case BoundId::TailDeviationNuInf: {
        StructureReport sc = structure_coefficients(a, r);
        rep.value = (sc.nu_r + sc.nu_r_inf * log_term) * tail_scale;
        break;
    }
    case BoundId::TailDeviationMu: {
        StructureReport sc = structure_coefficients(a, r);
        rep.value =
            std::max(sc.nu_r, (1.0 + sc.mu_r * sc.mu_r * fro / t.sigma_r) * log_term) * tail_scale;
        break;
    }
    case BoundId::PgdContraction: {
        if (!extras.step_size || !extras.iterations)
            throw InputError("evaluate_bound: contraction bound needs step_size and iterations");
        if (!(*extras.step_size >= 0.0) || *extras.iterations < 0)
            throw InputError("evaluate_bound: invalid step_size or iterations");
        double base = std::max(0.0, 1.0 - *extras.step_size * gap / 5.0);
        rep.value = std::pow(base, 0.5 * static_cast<double>(*extras.iterations));
        break;
    }
    case BoundId::PgdNoiseFloor: {
        if (!extras.measured_deviation)
            throw InputError("evaluate_bound: noise floor bound needs measured_deviation");
        if (!(*extras.measured_deviation >= 0.0))
            throw InputError("evaluate_bound: measured_deviation must be nonnegative");
        rep.value = std::sqrt(static_cast<double>(r)) * *extras.measured_deviation * t.sigma_r / gap;
        break;
    }
    }
    return rep;
}

double measure_sketch_deviation(const SketchBundle& s, const Matrix& b) {
    if (b.rows() != s.d1 || b.cols() != s.d2)
        throw InputError("measure_sketch_deviation: matrix shape does not match the sketch");
    require_finite(b, "measure_sketch_deviation");
    Matrix m = -b;
    for (const SketchEntry& e : s.entries)
        m(e.i, e.j) += b(e.i, e.j) / e.prob;
    return spectral_norm(m);
}

} // namespace lowrank
