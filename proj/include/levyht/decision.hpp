#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "levyht/likelihood.hpp"
#include "levyht/sample_path.hpp"
#include "levyht/thresholds.hpp"
#include "levyht/world.hpp"

namespace levyht {

enum class ExitSide { Left, Right, None };

struct DecisionOutcome {
    double tau1 = 0.0;
    double tau2 = 0.0;
    double tau = 0.0;  // tau1 v tau2
    ExitSide side1 = ExitSide::None;
    ExitSide side2 = ExitSide::None;
    bool decided = false;

    // digit k = 1 iff coordinate k exited right
    WorldIndex delta() const {
        return {side1 == ExitSide::Right ? 1 : 0, side2 == ExitSide::Right ? 1 : 0};
    }
};

struct OperatingStats {
    WorldIndex world;
    std::size_t n_paths = 0;
    std::size_t n_decided = 0;
    double no_decision_fraction = 0.0;
    double alpha_hat = 0.0;  // P(delta != world | decided)
    double alpha_se = 0.0;   // sqrt(p(1-p)/n_decided)
    std::array<double, 4> delta_freq{};  // 00, 01, 10, 11 among decided paths
    double mean_tau = 0.0, se_tau = 0.0;
    double mean_tau1 = 0.0, se_tau1 = 0.0;
    double gap = 0.0, gap_se = 0.0;  // paired mean of (tau1 v tau2) - tau1
};

struct DriftTestPair {
    DriftTestParams c1;
    DriftTestParams c2;
};

struct JumpTestPair {
    JumpTestParams c1;
    JumpTestParams c2;
    KForm kform = KForm::DensityTilt;
};

struct McOptions {
    std::size_t n_paths = 20000;
    double dt = 0.0;  // 0: per-coordinate default 2.5e-5 (r-l)^2 / diffusion
    double horizon = 1e4;
    std::uint64_t seed = 123456789;
    int threads = 1;
};

inline constexpr double kDefaultDtFactor = 2.5e-5;

// First exit of each coordinate from its interval; sides from the sign of
// the overshoot; no-decision marker if the grid ends inside the rectangle.
DecisionOutcome run_decision(const SamplePath2D& llr2d, const Rectangle& rect);

// Monte Carlo operating characteristics under the given world (rho = 0).
OperatingStats monte_carlo_operating_stats(const WorldIndex& world, const DriftTestPair& test,
                                           const Rectangle& rect, const McOptions& opts);
OperatingStats monte_carlo_operating_stats(const WorldIndex& world, const JumpTestPair& test,
                                           const Rectangle& rect, const McOptions& opts);

// P_0(hit r before l) for a drifted Brownian motion started at 0, by the
// scale function s(x) = exp(-2 drift x / variance).
double exit_probability_oracle_1d(double drift, double variance, double l, double r);

struct FirstExit {
    double tau = 0.0;
    ExitSide side = ExitSide::None;
};

// Streamed first exit of a one-coordinate characteristics process from
// [l, r], started at 0; same stepping as the Monte Carlo driver but without
// materializing the path.
FirstExit first_exit_1d(const LevyCharacteristics& c, double l, double r, double dt,
                        double horizon, std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace levyht
