#include "levyht/decision.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "levyht/errors.hpp"
#include "levyht/rng.hpp"

namespace levyht {

namespace {

struct CoordExit {
    double tau = 0.0;
    ExitSide side = ExitSide::None;
};

CoordExit scan_exit(const std::vector<double>& times, const std::vector<double>& values,
                    double l, double r) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > r) return {times[i], ExitSide::Right};
        if (values[i] < l) return {times[i], ExitSide::Left};
    }
    return {times.back(), ExitSide::None};
}

// One coordinate of the Monte Carlo fast path: steps a drift+diffusion+
// signed-compound-Poisson LLR until it leaves [l, r] or the horizon ends.
// Law-equivalent to simulating the full path and scanning it.
CoordExit step_coordinate(double drift, double var, const JumpMeasureSpec& jumps, int jump_sign,
                          double l, double r, double dt, double horizon, RngStream& rng_w,
                          RngStream& rng_j) {
    const double vol = std::sqrt(var);
    const double rate = jumps.total_mass();
    double t = 0.0, x = 0.0;
    double next_jump = rate > 0 ? rng_j.exponential(1.0 / rate) : horizon * 2;
    while (t < horizon) {
        double t_next = std::min(t + dt, horizon);
        bool jump_now = false;
        if (next_jump <= t_next) {
            t_next = next_jump;
            jump_now = true;
        }
        const double step = t_next - t;
        x += drift * step + vol * std::sqrt(step) * rng_w.gaussian();
        if (jump_now) {
            x += jump_sign * jumps.sample(rng_j);
            next_jump += rng_j.exponential(1.0 / rate);
        }
        t = t_next;
        if (x > r) return {t, ExitSide::Right};
        if (x < l) return {t, ExitSide::Left};
    }
    return {horizon, ExitSide::None};
}

struct BlockStats {
    std::array<std::size_t, 4> delta_count{};
    std::size_t n_decided = 0;
    std::size_t n_wrong = 0;
    double sum_tau = 0, sum_tau2 = 0;
    double sum_tau1 = 0, sum_tau1_sq = 0;
    double sum_gap = 0, sum_gap_sq = 0;
};

struct CoordModel {
    double drift;
    double var;
    const JumpMeasureSpec* jumps;
    int jump_sign;
};

OperatingStats run_mc(const WorldIndex& world, const CoordModel& m1, const CoordModel& m2,
                      const Rectangle& rect, const McOptions& opts) {
    world.validate();
    rect.validate();
    if (opts.n_paths < 100)
        throw parameter_error("monte_carlo_operating_stats: n_paths must be >= 100");
    if (!(opts.horizon > 0)) throw parameter_error("monte_carlo_operating_stats: bad horizon");

    const double dt1 = opts.dt > 0
                           ? opts.dt
                           : kDefaultDtFactor * (rect.r1 - rect.l1) * (rect.r1 - rect.l1) /
                                 std::max(m1.var, 1e-12);
    const double dt2 = opts.dt > 0
                           ? opts.dt
                           : kDefaultDtFactor * (rect.r2 - rect.l2) * (rect.r2 - rect.l2) /
                                 std::max(m2.var, 1e-12);

    constexpr std::size_t kBlock = 1024;
    const std::size_t n_blocks = (opts.n_paths + kBlock - 1) / kBlock;
    std::vector<BlockStats> blocks(n_blocks);

    auto run_block = [&](std::size_t b) {
        BlockStats& st = blocks[b];
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(lo + kBlock, opts.n_paths);
        for (std::size_t p = lo; p < hi; ++p) {
            RngStream w1(opts.seed, p * 8 + 0), j1(opts.seed, p * 8 + 1);
            RngStream w2(opts.seed, p * 8 + 2), j2(opts.seed, p * 8 + 3);
            const CoordExit e1 = step_coordinate(m1.drift, m1.var, *m1.jumps, m1.jump_sign,
                                                 rect.l1, rect.r1, dt1, opts.horizon, w1, j1);
            const CoordExit e2 = step_coordinate(m2.drift, m2.var, *m2.jumps, m2.jump_sign,
                                                 rect.l2, rect.r2, dt2, opts.horizon, w2, j2);
            if (e1.side == ExitSide::None || e2.side == ExitSide::None) continue;
            const int d1 = e1.side == ExitSide::Right ? 1 : 0;
            const int d2 = e2.side == ExitSide::Right ? 1 : 0;
            ++st.n_decided;
            ++st.delta_count[static_cast<std::size_t>(d1 * 2 + d2)];
            if (d1 != world.i || d2 != world.j) ++st.n_wrong;
            const double tau = std::max(e1.tau, e2.tau);
            const double gap = tau - e1.tau;
            st.sum_tau += tau;
            st.sum_tau2 += tau * tau;
            st.sum_tau1 += e1.tau;
            st.sum_tau1_sq += e1.tau * e1.tau;
            st.sum_gap += gap;
            st.sum_gap_sq += gap * gap;
        }
    };

    const int n_threads = std::max(1, opts.threads);
    if (n_threads == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        std::atomic<std::size_t> counter{0};
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t b = counter.fetch_add(1); b < n_blocks; b = counter.fetch_add(1))
                    run_block(b);
            });
        for (auto& th : pool) th.join();
    }

    BlockStats total;
    for (const BlockStats& st : blocks) {
        for (int k = 0; k < 4; ++k) total.delta_count[k] += st.delta_count[k];
        total.n_decided += st.n_decided;
        total.n_wrong += st.n_wrong;
        total.sum_tau += st.sum_tau;
        total.sum_tau2 += st.sum_tau2;
        total.sum_tau1 += st.sum_tau1;
        total.sum_tau1_sq += st.sum_tau1_sq;
        total.sum_gap += st.sum_gap;
        total.sum_gap_sq += st.sum_gap_sq;
    }

    OperatingStats out;
    out.world = world;
    out.n_paths = opts.n_paths;
    out.n_decided = total.n_decided;
    out.no_decision_fraction =
        static_cast<double>(opts.n_paths - total.n_decided) / opts.n_paths;
    if (out.no_decision_fraction > 0.5)
        throw numerical_error(
            "monte_carlo_operating_stats: more than half of the paths never exited; "
            "increase the horizon");
    const double n = static_cast<double>(total.n_decided);
    out.alpha_hat = total.n_wrong / n;
    out.alpha_se = std::sqrt(std::max(out.alpha_hat * (1 - out.alpha_hat), 0.0) / n);
    for (int k = 0; k < 4; ++k) out.delta_freq[k] = total.delta_count[k] / n;
    auto mean_se = [n](double s, double s2, double& mean, double& se) {
        mean = s / n;
        const double var = std::max(s2 / n - mean * mean, 0.0) * n / std::max(n - 1, 1.0);
        se = std::sqrt(var / n);
    };
    mean_se(total.sum_tau, total.sum_tau2, out.mean_tau, out.se_tau);
    mean_se(total.sum_tau1, total.sum_tau1_sq, out.mean_tau1, out.se_tau1);
    mean_se(total.sum_gap, total.sum_gap_sq, out.gap, out.gap_se);
    return out;
}

}  // namespace

DecisionOutcome run_decision(const SamplePath2D& llr2d, const Rectangle& rect) {
    rect.validate();
    llr2d.validate();
    if (!rect.contains(llr2d.values1.front(), llr2d.values2.front()))
        throw parameter_error("run_decision: path must start strictly inside the rectangle");
    const CoordExit e1 = scan_exit(llr2d.times, llr2d.values1, rect.l1, rect.r1);
    const CoordExit e2 = scan_exit(llr2d.times, llr2d.values2, rect.l2, rect.r2);
    DecisionOutcome out;
    out.tau1 = e1.tau;
    out.tau2 = e2.tau;
    out.tau = std::max(e1.tau, e2.tau);
    out.side1 = e1.side;
    out.side2 = e2.side;
    out.decided = e1.side != ExitSide::None && e2.side != ExitSide::None;
    return out;
}

OperatingStats monte_carlo_operating_stats(const WorldIndex& world, const DriftTestPair& test,
                                           const Rectangle& rect, const McOptions& opts) {
    test.c1.validate();
    test.c2.validate();
    const LevyCharacteristics ch1 =
        drift_llr_characteristics(test.c1, world.i == 1 ? 0 : 1, SignConvention::Proof);
    const LevyCharacteristics ch2 =
        drift_llr_characteristics(test.c2, world.j == 1 ? 0 : 1, SignConvention::Proof);
    // statistic log dP1/dP0 per coordinate: drift +c under the signal digit,
    // -c under noise; the proof-convention index is the complement
    const CoordModel m1{ch1.drift, ch1.diffusion_var, &ch1.jumps, ch1.jump_sign};
    const CoordModel m2{ch2.drift, ch2.diffusion_var, &ch2.jumps, ch2.jump_sign};
    return run_mc(world, m1, m2, rect, opts);
}

OperatingStats monte_carlo_operating_stats(const WorldIndex& world, const JumpTestPair& test,
                                           const Rectangle& rect, const McOptions& opts) {
    const LlrCoefficients co1 = jump_llr_coefficients(test.c1, world.i, {}, test.kform);
    const LlrCoefficients co2 = jump_llr_coefficients(test.c2, world.j, {}, test.kform);
    const LevyCharacteristics ch1 = jump_llr_characteristics(co1, world.i);
    const LevyCharacteristics ch2 = jump_llr_characteristics(co2, world.j);
    const CoordModel m1{ch1.drift, ch1.diffusion_var, &ch1.jumps, ch1.jump_sign};
    const CoordModel m2{ch2.drift, ch2.diffusion_var, &ch2.jumps, ch2.jump_sign};
    return run_mc(world, m1, m2, rect, opts);
}

FirstExit first_exit_1d(const LevyCharacteristics& c, double l, double r, double dt,
                        double horizon, std::uint64_t seed, std::uint64_t stream) {
    c.validate();
    if (!(l < 0 && 0 < r)) throw parameter_error("first_exit_1d: requires l < 0 < r");
    if (!(dt > 0) || !(horizon > 0)) throw parameter_error("first_exit_1d: bad dt/horizon");
    RngStream w(seed, stream * 8 + 0), j(seed, stream * 8 + 1);
    const CoordExit e =
        step_coordinate(c.drift, c.diffusion_var, c.jumps, c.jump_sign, l, r, dt, horizon, w, j);
    return {e.tau, e.side};
}

double exit_probability_oracle_1d(double drift, double variance, double l, double r) {
    if (!(l < 0 && 0 < r)) throw parameter_error("exit oracle: requires l < 0 < r");
    if (variance < 0) throw parameter_error("exit oracle: variance must be >= 0");
    if (variance == 0) {
        if (drift > 0) return 1.0;
        if (drift < 0) return 0.0;
        throw parameter_error("exit oracle: degenerate motionless process");
    }
    const double theta = 2.0 * drift / variance;
    if (std::abs(theta) * (r - l) < 1e-12) return -l / (r - l);
    // s(x) = e^{-theta x}; P = (s(0)-s(l))/(s(r)-s(l))
    const double sl = std::exp(-theta * l);
    const double sr = std::exp(-theta * r);
    return (1.0 - sl) / (sr - sl);
}

}  // namespace levyht
