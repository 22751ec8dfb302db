#include "levyht/levy_sim.hpp"

#include <algorithm>
#include <cmath>

#include "levyht/errors.hpp"

namespace levyht {

namespace {

constexpr std::uint64_t kStreamsPerCall = 8;

void check_grid_params(double horizon, double dt) {
    if (!(dt > 0)) throw parameter_error("simulate: dt must be > 0");
    if (!(horizon >= dt)) throw parameter_error("simulate: horizon must be >= dt");
}

// jump epochs of a homogeneous Poisson clock with the given rate on (0, horizon)
std::vector<double> draw_jump_epochs(double rate, double horizon, RngStream& rng) {
    std::vector<double> epochs;
    if (rate <= 0) return epochs;
    double t = rng.exponential(1.0 / rate);
    while (t < horizon) {
        epochs.push_back(t);
        t += rng.exponential(1.0 / rate);
    }
    return epochs;
}

// sorted union of the uniform grid {0, dt, ..., horizon} and extra epochs
std::vector<double> merged_grid(double horizon, double dt, const std::vector<double>& extra1,
                                const std::vector<double>& extra2 = {}) {
    const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    std::vector<double> grid;
    grid.reserve(n_steps + 1 + extra1.size() + extra2.size());
    for (std::size_t i = 0; i <= n_steps; ++i) grid.push_back(std::min(i * dt, horizon));
    grid.back() = horizon;
    grid.insert(grid.end(), extra1.begin(), extra1.end());
    grid.insert(grid.end(), extra2.begin(), extra2.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

std::vector<std::size_t> locate(const std::vector<double>& grid, const std::vector<double>& epochs) {
    std::vector<std::size_t> idx;
    idx.reserve(epochs.size());
    for (double t : epochs)
        idx.push_back(static_cast<std::size_t>(
            std::lower_bound(grid.begin(), grid.end(), t) - grid.begin()));
    return idx;
}

// lower-triangular square root of a symmetric nonnegative-definite 2x2 matrix
struct Chol2 {
    double l11, l21, l22;
};

Chol2 sqrt_factor(const Sigma2& s) {
    if (s.xx < 0 || s.yy < 0 || !(s.xx * s.yy - s.xy * s.xy >= -1e-12 * std::max(1.0, s.xx * s.yy)))
        throw parameter_error("simulate_levy2d: sigma must be nonnegative definite");
    Chol2 c{};
    c.l11 = std::sqrt(s.xx);
    if (c.l11 > 0) {
        c.l21 = s.xy / c.l11;
        c.l22 = std::sqrt(std::max(s.yy - c.l21 * c.l21, 0.0));
    } else {
        if (s.xy != 0) throw parameter_error("simulate_levy2d: sigma must be nonnegative definite");
        c.l21 = 0;
        c.l22 = std::sqrt(s.yy);
    }
    return c;
}

}  // namespace

void LevyCharacteristics::validate() const {
    if (diffusion_var < 0) throw parameter_error("characteristics: diffusion_var must be >= 0");
    if (jump_sign != 1 && jump_sign != -1)
        throw parameter_error("characteristics: jump_sign must be +1 or -1");
    if (!std::isfinite(drift)) throw parameter_error("characteristics: drift must be finite");
}

SamplePath simulate_bm_drift(double drift, double vol, double horizon, double dt,
                             std::uint64_t seed, std::uint64_t stream) {
    check_grid_params(horizon, dt);
    if (vol < 0) throw parameter_error("simulate_bm_drift: vol must be >= 0");
    RngStream rng(seed, stream * kStreamsPerCall);
    SamplePath path;
    path.dt = dt;
    const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    path.times.resize(n_steps + 1);
    path.values.resize(n_steps + 1);
    path.times[0] = 0.0;
    path.values[0] = 0.0;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const double t = std::min(i * dt, horizon);
        const double step = t - path.times[i - 1];
        path.times[i] = t;
        path.values[i] =
            path.values[i - 1] + drift * step + vol * std::sqrt(step) * rng.gaussian();
    }
    path.times.back() = horizon;
    return path;
}

SamplePath simulate_compound_poisson(const JumpMeasureSpec& spec, double horizon,
                                     std::uint64_t seed, std::uint64_t stream) {
    if (!(horizon > 0)) throw parameter_error("simulate_compound_poisson: horizon must be > 0");
    if (!std::isfinite(spec.total_mass()))
        throw parameter_error("simulate_compound_poisson: jump measure must have finite mass");
    RngStream rng(seed, stream * kStreamsPerCall + 1);
    SamplePath path;
    path.times.push_back(0.0);
    path.values.push_back(0.0);
    if (!spec.is_zero()) {
        const auto epochs = draw_jump_epochs(spec.total_mass(), horizon, rng);
        for (double t : epochs) {
            path.jump_indices.push_back(path.times.size());
            path.times.push_back(t);
            path.values.push_back(path.values.back() + spec.sample(rng));
        }
    }
    path.times.push_back(horizon);
    path.values.push_back(path.values.back());
    return path;
}

SamplePath2D simulate_levy2d(std::array<double, 2> mu, const Sigma2& sigma,
                             std::pair<JumpMeasureSpec, JumpMeasureSpec> specs, double horizon,
                             double dt, std::uint64_t seed, std::uint64_t stream) {
    check_grid_params(horizon, dt);
    const Chol2 chol = sqrt_factor(sigma);
    RngStream rng_w(seed, stream * kStreamsPerCall);
    RngStream rng_j1(seed, stream * kStreamsPerCall + 1);
    RngStream rng_j2(seed, stream * kStreamsPerCall + 2);

    const auto epochs1 = draw_jump_epochs(specs.first.total_mass(), horizon, rng_j1);
    const auto epochs2 = draw_jump_epochs(specs.second.total_mass(), horizon, rng_j2);

    SamplePath2D path;
    path.dt = dt;
    path.times = merged_grid(horizon, dt, epochs1, epochs2);
    path.jump_indices1 = locate(path.times, epochs1);
    path.jump_indices2 = locate(path.times, epochs2);
    const std::size_t n = path.times.size();
    path.values1.assign(n, 0.0);
    path.values2.assign(n, 0.0);

    std::size_t j1 = 0, j2 = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double step = path.times[i] - path.times[i - 1];
        const double sq = std::sqrt(step);
        const double z1 = rng_w.gaussian();
        const double z2 = rng_w.gaussian();
        path.values1[i] = path.values1[i - 1] + mu[0] * step + sq * chol.l11 * z1;
        path.values2[i] =
            path.values2[i - 1] + mu[1] * step + sq * (chol.l21 * z1 + chol.l22 * z2);
        if (j1 < path.jump_indices1.size() && path.jump_indices1[j1] == i) {
            path.values1[i] += specs.first.sample(rng_j1);
            ++j1;
        }
        if (j2 < path.jump_indices2.size() && path.jump_indices2[j2] == i) {
            path.values2[i] += specs.second.sample(rng_j2);
            ++j2;
        }
    }
    return path;
}

SamplePath simulate_characteristics(const LevyCharacteristics& c, double horizon, double dt,
                                    std::uint64_t seed, std::uint64_t stream) {
    c.validate();
    check_grid_params(horizon, dt);
    RngStream rng_w(seed, stream * kStreamsPerCall);
    RngStream rng_j(seed, stream * kStreamsPerCall + 1);
    const auto epochs = draw_jump_epochs(c.jumps.total_mass(), horizon, rng_j);

    SamplePath path;
    path.dt = dt;
    path.times = merged_grid(horizon, dt, epochs);
    path.jump_indices = locate(path.times, epochs);
    path.values.assign(path.times.size(), 0.0);
    const double vol = std::sqrt(c.diffusion_var);
    std::size_t j = 0;
    for (std::size_t i = 1; i < path.times.size(); ++i) {
        const double step = path.times[i] - path.times[i - 1];
        path.values[i] =
            path.values[i - 1] + c.drift * step + vol * std::sqrt(step) * rng_w.gaussian();
        if (j < path.jump_indices.size() && path.jump_indices[j] == i) {
            path.values[i] += c.jump_sign * c.jumps.sample(rng_j);
            ++j;
        }
    }
    return path;
}

SamplePath2D simulate_characteristics_pair(const LevyCharacteristics& c1,
                                           const LevyCharacteristics& c2, double rho,
                                           double horizon, double dt, std::uint64_t seed,
                                           std::uint64_t stream) {
    c1.validate();
    c2.validate();
    if (!(rho > -1.0001 && rho < 1.0001))
        throw parameter_error("simulate_characteristics_pair: rho must lie in [-1, 1]");
    Sigma2 sigma{c1.diffusion_var, rho * std::sqrt(c1.diffusion_var * c2.diffusion_var),
                 c2.diffusion_var};
    check_grid_params(horizon, dt);
    const Chol2 chol = sqrt_factor(sigma);
    RngStream rng_w(seed, stream * kStreamsPerCall);
    RngStream rng_j1(seed, stream * kStreamsPerCall + 1);
    RngStream rng_j2(seed, stream * kStreamsPerCall + 2);
    const auto epochs1 = draw_jump_epochs(c1.jumps.total_mass(), horizon, rng_j1);
    const auto epochs2 = draw_jump_epochs(c2.jumps.total_mass(), horizon, rng_j2);

    SamplePath2D path;
    path.dt = dt;
    path.times = merged_grid(horizon, dt, epochs1, epochs2);
    path.jump_indices1 = locate(path.times, epochs1);
    path.jump_indices2 = locate(path.times, epochs2);
    const std::size_t n = path.times.size();
    path.values1.assign(n, 0.0);
    path.values2.assign(n, 0.0);
    std::size_t j1 = 0, j2 = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double step = path.times[i] - path.times[i - 1];
        const double sq = std::sqrt(step);
        const double z1 = rng_w.gaussian();
        const double z2 = rng_w.gaussian();
        path.values1[i] = path.values1[i - 1] + c1.drift * step + sq * chol.l11 * z1;
        path.values2[i] =
            path.values2[i - 1] + c2.drift * step + sq * (chol.l21 * z1 + chol.l22 * z2);
        if (j1 < path.jump_indices1.size() && path.jump_indices1[j1] == i) {
            path.values1[i] += c1.jump_sign * c1.jumps.sample(rng_j1);
            ++j1;
        }
        if (j2 < path.jump_indices2.size() && path.jump_indices2[j2] == i) {
            path.values2[i] += c2.jump_sign * c2.jumps.sample(rng_j2);
            ++j2;
        }
    }
    return path;
}

}  // namespace levyht
