#include "lowrank/synthetic.hpp"

#include "lowrank/rng.hpp"

#include <cmath>

namespace lowrank {

Matrix generate_synthetic(const SyntheticSpec& spec) {
    if (spec.d < 5)
        throw InputError("generate_synthetic: d must be at least 5");
    if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma))
        throw InputError("generate_synthetic: sigma must be finite and nonnegative");

    const Index d = spec.d;
    Matrix ustar(d, 5);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < 5; ++j)
            ustar(i, j) = gaussian_unit(spec.seed, 0, static_cast<std::uint64_t>(i * 5 + j));

    Vector sstar(5);
    sstar << 1.0, 0.9, 0.8, 0.7, 0.6;

    Matrix a = (ustar * sstar.asDiagonal() * ustar.transpose()) / ustar.squaredNorm();

    if (spec.kind == SyntheticKind::NoisyLowRank && spec.sigma > 0.0) {
        // Entry variance 1/(4d) puts the spectral norm of the noise near 1.
        double noise_sd = 0.5 / std::sqrt(static_cast<double>(d));
        for (Index i = 0; i < d; ++i)
            for (Index j = 0; j < d; ++j)
                a(i, j) += spec.sigma * noise_sd *
                           gaussian_unit(spec.seed, 1, static_cast<std::uint64_t>(i * d + j));
    }
    return a;
}

} // namespace lowrank
