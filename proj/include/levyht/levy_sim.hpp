#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "levyht/jump_measure.hpp"
#include "levyht/sample_path.hpp"

namespace levyht {

// Levy triplet of one coordinate process: drift, diffusion variance and a
// signed finite-activity jump measure (sign stored separately, magnitude
// simulated from |jumps|).
struct LevyCharacteristics {
    double drift = 0.0;
    double diffusion_var = 0.0;
    JumpMeasureSpec jumps = JumpMeasureSpec::zero();
    int jump_sign = +1;

    void validate() const;
};

// Symmetric 2x2 diffusion matrix [[xx, xy], [xy, yy]].
struct Sigma2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

// Euler path of dz = drift dt + vol dW on a uniform grid.
SamplePath simulate_bm_drift(double drift, double vol, double horizon, double dt,
                             std::uint64_t seed, std::uint64_t stream = 0);

// Event-driven compound Poisson path: exponential inter-arrivals with rate
// equal to the tilted total mass, sizes from the normalized tilted density.
SamplePath simulate_compound_poisson(const JumpMeasureSpec& spec, double horizon,
                                     std::uint64_t seed, std::uint64_t stream = 0);

// Two-dimensional Levy path: correlated diffusion via the square-root
// factorization of sigma, independent jump parts per coordinate, jump
// epochs merged exactly into the Euler grid.
SamplePath2D simulate_levy2d(std::array<double, 2> mu, const Sigma2& sigma,
                             std::pair<JumpMeasureSpec, JumpMeasureSpec> specs, double horizon,
                             double dt, std::uint64_t seed, std::uint64_t stream = 0);

// Path of a single characteristics triplet (drift + diffusion + signed
// compound-Poisson jumps, uncompensated), jump epochs merged into the grid.
SamplePath simulate_characteristics(const LevyCharacteristics& c, double horizon, double dt,
                                    std::uint64_t seed, std::uint64_t stream = 0);

// Pair of characteristics with diffusion correlation rho and independent
// jump parts (the rho=0 decision setting allows rho for evaluation only).
SamplePath2D simulate_characteristics_pair(const LevyCharacteristics& c1,
                                           const LevyCharacteristics& c2, double rho,
                                           double horizon, double dt, std::uint64_t seed,
                                           std::uint64_t stream = 0);

}  // namespace levyht
