#pragma once

#include "lowrank/types.hpp"

namespace lowrank {

/// Thin singular value decomposition A = U diag(sigma) V^T with
/// k = min(rows, cols) columns in U and V and sigma sorted descending.
struct SvdResult {
    Matrix u;     // rows x k, orthonormal columns
    Vector sigma; // k, nonnegative, descending
    Matrix v;     // cols x k, orthonormal columns
};

/// Rank-r truncation together with a spectral-gap warning.
struct TruncationResult {
    Matrix matrix;
    /// True when sigma_r and sigma_{r+1} coincide to relative precision
    /// 1e-12; the truncation is then not uniquely defined.
    bool degenerate = false;
};

/// Frobenius, spectral, entrywise-l1 and max-entry norms of one matrix.
struct NormSuite {
    double frobenius = 0.0;
    double spectral = 0.0;
    double entry_l1 = 0.0;
    double max_entry = 0.0;
};

/// A pair of factor matrices (top: d1 x r, bottom: d2 x r) whose product
/// top * bottom^T is a rank-r estimate.
struct FactorStack {
    Matrix top;
    Matrix bottom;
};

/// SVD with a deterministic sign convention: the largest-magnitude entry of
/// every column of U is nonnegative (ties broken by smallest row index), and
/// the corresponding V column is flipped alongside. Repeated calls on the
/// same input return bit-identical results.
SvdResult svd_deterministic(const Matrix& a);

/// Best rank-r approximation of a (Frobenius and spectral optimal).
/// Requires 1 <= r <= min(rows, cols).
TruncationResult truncate_rank(const Matrix& a, int r);

/// Truncation reusing an already computed decomposition of the same matrix.
TruncationResult truncate_rank(const SvdResult& svd, int r);

NormSuite norm_suite(const Matrix& a);

/// Largest singular value of a.
double spectral_norm(const Matrix& a);

/// Euclidean norms of all rows (first) and all columns (second).
std::pair<Vector, Vector> row_col_norms(const Matrix& a);

/// Distance between two factor stacks up to a shared r x r rotation:
/// min over orthogonal R of the Frobenius norm of stack(f) - stack(g) R,
/// where stack places top over bottom. Shapes must match.
double procrustes_distance(const FactorStack& f, const FactorStack& g);

} // namespace lowrank
