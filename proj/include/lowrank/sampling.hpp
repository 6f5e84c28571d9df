#pragma once

#include "lowrank/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lowrank {

/// How per-entry inclusion probabilities are allocated for a sampling
/// budget of n expected entries.
enum class SamplingScheme {
    /// p_ij proportional to a blend of the squared entry and its absolute
    /// value: p_ij = min{ (n/2)(a_ij^2/||A||_F^2 + |a_ij|/||A||_l1), 1 }.
    EntryWeighted,
    /// p_ij driven by row and column masses plus an absolute-value term:
    /// p_ij = min{ (n/3)(||A_i.||^2/(d2 ||A||_F^2) + ||A_.j||^2/(d1 ||A||_F^2)
    ///             + |a_ij|/||A||_l1), 1 }.
    RowColWeighted,
};

const char* scheme_name(SamplingScheme scheme);
SamplingScheme parse_scheme(const std::string& name);

using ProbabilityMatrix = Matrix;
using Mask = std::vector<std::pair<Index, Index>>;

/// One retained entry of a sketch: original value plus the inclusion
/// probability it was kept with.
struct SketchEntry {
    Index i = 0;
    Index j = 0;
    double value = 0.0;
    double prob = 0.0;
};

/// A sampled matrix: the kept entries together with the side information
/// (exact norms of the source) that samplers and estimators rely on.
struct SketchBundle {
    Index d1 = 0;
    Index d2 = 0;
    std::vector<SketchEntry> entries; // sorted by (i, j), no duplicates
    Vector row_norms;                 // of the source matrix, length d1
    Vector col_norms;                 // length d2
    double fro_norm = 0.0;
    double l1_norm = 0.0;
    SamplingScheme scheme = SamplingScheme::EntryWeighted;
    double budget_n = 0.0;
    std::uint64_t seed = 0;
};

/// Inclusion probabilities for budget n under the given scheme.
/// Requires n > 0 and a nonzero matrix.
ProbabilityMatrix compute_probabilities(const Matrix& a, SamplingScheme scheme, double n);

/// Sum of inclusion probabilities: the expected number of sampled entries.
double expected_count(const ProbabilityMatrix& p);

/// Budget n whose expected count matches target_count. Monotone bisection;
/// the result satisfies |expected_count - target| <= max(1, 1e-3 * target)
/// whenever the target is reachable. Entry weighting never samples exact
/// zeros; if that caps the expected count below the target, the budget at
/// which every positive-probability entry saturates is returned instead.
double calibrate_budget(const Matrix& a, SamplingScheme scheme, double target_count);

/// Independent Bernoulli draws, one per entry, keyed by (seed, i, j).
/// Identical inputs give identical masks regardless of traversal order.
Mask draw_mask(const ProbabilityMatrix& p, std::uint64_t seed);

/// Packages sampled entries with their probabilities and the source norms.
/// Every mask position must carry a positive probability and appear once.
SketchBundle build_sketch(const Matrix& a, const ProbabilityMatrix& p, const Mask& mask,
                          SamplingScheme scheme, double budget_n, std::uint64_t seed);

/// compute_probabilities + draw_mask + build_sketch in one step.
SketchBundle sample_sketch(const Matrix& a, SamplingScheme scheme, double n,
                           std::uint64_t seed);

/// The importance-weighted dense matrix: value/prob at sampled positions,
/// zero elsewhere. Unbiased for the source matrix entrywise.
Matrix sketch_to_dense(const SketchBundle& s);

// Sketch files are a small line-oriented text format:
//   line 1: magic "SKZ1"
//   line 2: "<d1> <d2> <entry_count> <scheme> <budget_n> <seed>"
//   line 3: "<fro_norm> <l1_norm>"
//   line 4: row norms, space-separated
//   line 5: col norms, space-separated
//   then one "<i> <j> <value> <prob>" line per entry, sorted by (i, j),
//   indices 0-based.
void write_sketch(std::ostream& out, const SketchBundle& s);
void write_sketch(const std::string& path, const SketchBundle& s);
SketchBundle read_sketch(std::istream& in, const std::string& name = "<stream>");
SketchBundle read_sketch(const std::string& path);

} // namespace lowrank
