#include "lowrank/matrix_core.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace lowrank {

namespace {

void check_nonempty(const Matrix& a, const char* what) {
    if (a.rows() < 1 || a.cols() < 1)
        throw InputError(std::string(what) + ": matrix must have at least one row and column");
}

// Flips U/V column pairs so the largest-|entry| of each U column is
// nonnegative. Ties keep the smallest row index, which the first-strict-max
// scan below does naturally.
void apply_sign_convention(Matrix& u, Matrix& v) {
    for (Index k = 0; k < u.cols(); ++k) {
        Index best = 0;
        double best_abs = std::abs(u(0, k));
        for (Index i = 1; i < u.rows(); ++i) {
            double a = std::abs(u(i, k));
            if (a > best_abs) {
                best_abs = a;
                best = i;
            }
        }
        if (u(best, k) < 0.0) {
            u.col(k) = -u.col(k);
            v.col(k) = -v.col(k);
        }
    }
}

} // namespace

SvdResult svd_deterministic(const Matrix& a) {
    check_nonempty(a, "svd");
    require_finite(a, "svd");
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdResult out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
    apply_sign_convention(out.u, out.v);
    return out;
}

TruncationResult truncate_rank(const SvdResult& svd, int r) {
    Index k = svd.sigma.size();
    if (r < 1 || r > k)
        throw InputError("truncate_rank: rank " + std::to_string(r) +
                         " outside [1, " + std::to_string(k) + "]");
    TruncationResult out;
    out.matrix = svd.u.leftCols(r) * svd.sigma.head(r).asDiagonal() *
                 svd.v.leftCols(r).transpose();
    double next = (r < k) ? svd.sigma(r) : 0.0;
    out.degenerate = (svd.sigma(r - 1) - next) <= 1e-12 * svd.sigma(0);
    return out;
}

TruncationResult truncate_rank(const Matrix& a, int r) {
    return truncate_rank(svd_deterministic(a), r);
}

double spectral_norm(const Matrix& a) {
    check_nonempty(a, "spectral_norm");
    require_finite(a, "spectral_norm");
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

NormSuite norm_suite(const Matrix& a) {
    check_nonempty(a, "norm_suite");
    require_finite(a, "norm_suite");
    NormSuite out;
    out.frobenius = a.norm();
    out.spectral = spectral_norm(a);
    out.entry_l1 = a.cwiseAbs().sum();
    out.max_entry = a.cwiseAbs().maxCoeff();
    return out;
}

std::pair<Vector, Vector> row_col_norms(const Matrix& a) {
    check_nonempty(a, "row_col_norms");
    require_finite(a, "row_col_norms");
    Vector rows = a.rowwise().norm();
    Vector cols = a.colwise().norm().transpose();
    return {rows, cols};
}

double procrustes_distance(const FactorStack& f, const FactorStack& g) {
    if (f.top.cols() != f.bottom.cols() || g.top.cols() != g.bottom.cols())
        throw InputError("procrustes_distance: top and bottom must share the factor dimension");
    if (f.top.rows() != g.top.rows() || f.bottom.rows() != g.bottom.rows() ||
        f.top.cols() != g.top.cols())
        throw InputError("procrustes_distance: factor stacks have mismatched shapes");

    // min_R ||F - G R||_F^2 = ||F||^2 + ||G||^2 - 2 * nuclear_norm(G^T F).
    Matrix cross = g.top.transpose() * f.top + g.bottom.transpose() * f.bottom;
    Eigen::JacobiSVD<Matrix> svd(cross);
    double nuclear = svd.singularValues().sum();
    double d2 = f.top.squaredNorm() + f.bottom.squaredNorm() +
                g.top.squaredNorm() + g.bottom.squaredNorm() - 2.0 * nuclear;
    return std::sqrt(std::max(0.0, d2));
}

} // namespace lowrank
