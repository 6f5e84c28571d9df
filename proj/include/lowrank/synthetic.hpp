#pragma once

#include "lowrank/types.hpp"

#include <cstdint>

namespace lowrank {

enum class SyntheticKind {
    /// Exact rank-5 symmetric matrix U* S U*^T / ||U*||_F^2 with
    /// S = diag(1, 0.9, 0.8, 0.7, 0.6) and U* a d x 5 standard Gaussian.
    LowRank,
    /// The same plus sigma * E, where E has iid N(0, 1/(4d)) entries so
    /// its spectral norm is close to 1.
    NoisyLowRank,
};

struct SyntheticSpec {
    int d = 100;
    SyntheticKind kind = SyntheticKind::LowRank;
    double sigma = 0.0; // noise level, ignored for LowRank
    std::uint64_t seed = 0;
};

/// Deterministic in its arguments: identical inputs give identical matrices.
/// NoisyLowRank with sigma = 0 equals LowRank exactly. Requires d >= 5.
Matrix generate_synthetic(const SyntheticSpec& spec);

} // namespace lowrank
