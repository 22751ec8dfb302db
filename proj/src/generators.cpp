#include "levyht/generators.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "levyht/errors.hpp"
#include "levyht/rng.hpp"

namespace levyht {

namespace {

double measure_cut(const JumpMeasureSpec& m) {
    return std::isfinite(m.support_upper()) ? m.support_upper() : m.scale() * 150.0;
}

FixedNodes measure_nodes(const JumpMeasureSpec& m, const QuadratureSpec& quad) {
    if (m.is_zero()) return {};
    return build_fixed_nodes([&m](double x) { return m.density(x); }, measure_cut(m), quad);
}

}  // namespace

void TestFunction::require_inside(double x, double y) const {
    if (domain && !(x >= domain->l1 && x <= domain->r1 && y >= domain->l2 && y <= domain->r2))
        throw parameter_error("test function evaluated outside its declared domain");
}

bool TestFunction::partials_consistent(double x, double y, double h) const {
    auto close = [](double got, double want) {
        const double scale = std::max({std::abs(got), std::abs(want), 1e-3});
        return std::abs(got - want) <= 1e-6 * scale + 1e-9;
    };
    const double dfx = (f(x + h, y) - f(x - h, y)) / (2 * h);
    const double dfy = (f(x, y + h) - f(x, y - h)) / (2 * h);
    const double dxx = (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / (h * h);
    const double dyy = (f(x, y + h) - 2 * f(x, y) + f(x, y - h)) / (h * h);
    const double dxy =
        (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h);
    return close(fx(x, y), dfx) && close(fy(x, y), dfy) && close(fxx(x, y), dxx) &&
           close(fyy(x, y), dyy) && close(fxy(x, y), dxy);
}

TestFunction tf_constant(double c) {
    auto zero = [](double, double) { return 0.0; };
    return {[c](double, double) { return c; }, zero, zero, zero, zero, zero, std::nullopt,
            "const"};
}

TestFunction tf_x1() {
    auto zero = [](double, double) { return 0.0; };
    return {[](double x, double) { return x; }, [](double, double) { return 1.0; }, zero, zero,
            zero, zero, std::nullopt, "x1"};
}

TestFunction tf_x2() {
    auto zero = [](double, double) { return 0.0; };
    return {[](double, double y) { return y; }, zero, [](double, double) { return 1.0; }, zero,
            zero, zero, std::nullopt, "x2"};
}

TestFunction tf_x1_squared() {
    auto zero = [](double, double) { return 0.0; };
    return {[](double x, double) { return x * x; },
            [](double x, double) { return 2 * x; },
            zero,
            [](double, double) { return 2.0; },
            zero,
            zero,
            std::nullopt,
            "x1^2"};
}

TestFunction tf_x1_x2() {
    auto zero = [](double, double) { return 0.0; };
    return {[](double x, double y) { return x * y; },
            [](double, double y) { return y; },
            [](double x, double) { return x; },
            zero,
            zero,
            [](double, double) { return 1.0; },
            std::nullopt,
            "x1*x2"};
}

TestFunction tf_exp_neg_x1() {
    auto zero = [](double, double) { return 0.0; };
    return {[](double x, double) { return std::exp(-x); },
            [](double x, double) { return -std::exp(-x); },
            zero,
            [](double x, double) { return std::exp(-x); },
            zero,
            zero,
            std::nullopt,
            "exp(-x1)"};
}

TestFunction tf_combine(double a, const TestFunction& u, double b, const TestFunction& v) {
    TestFunction out;
    auto mix = [a, b](TestFunction::Fn fu, TestFunction::Fn fv) {
        return [a, b, fu = std::move(fu), fv = std::move(fv)](double x, double y) {
            return a * fu(x, y) + b * fv(x, y);
        };
    };
    out.f = mix(u.f, v.f);
    out.fx = mix(u.fx, v.fx);
    out.fy = mix(u.fy, v.fy);
    out.fxx = mix(u.fxx, v.fxx);
    out.fyy = mix(u.fyy, v.fyy);
    out.fxy = mix(u.fxy, v.fxy);
    out.name = u.name + "+" + v.name;
    return out;
}

double apply_drift_generator(const WorldIndex& ij, const DriftTestPair& params,
                             const TestFunction& xi, double x, double y, SignConvention conv) {
    ij.validate();
    params.c1.validate();
    params.c2.validate();
    xi.require_inside(x, y);
    const double c1 = params.c1.m * params.c1.m / (2 * params.c1.sigma * params.c1.sigma);
    const double c2 = params.c2.m * params.c2.m / (2 * params.c2.sigma * params.c2.sigma);
    double s1 = ij.i == 0 ? -1.0 : +1.0;  // (-1)^{i+1}, as printed
    double s2 = ij.j == 0 ? -1.0 : +1.0;
    if (conv == SignConvention::Proof) {
        s1 = -s1;
        s2 = -s2;
    }
    return c1 * (xi.fxx(x, y) + s1 * xi.fx(x, y)) + c2 * (xi.fyy(x, y) + s2 * xi.fy(x, y));
}

JumpGenerator::JumpGenerator(const WorldIndex& ij, double rho, const LlrCoefficients& co1,
                             const LlrCoefficients& co2, const QuadratureSpec& quad,
                             SignConvention conv, JumpCompensation comp)
    : rho_(rho), compensate_(comp == JumpCompensation::Kernel) {
    ij.validate();
    quad.validate();
    const double sgn1 = ij.i == 0 ? -1.0 : +1.0;  // (-1)^{i+1}
    const double sgn2 = ij.j == 0 ? -1.0 : +1.0;
    if (conv == SignConvention::Statement) {
        g1_ = sgn1 * co1.gamma;
        g2_ = sgn2 * co2.gamma;
        nl_sign_ = (ij.i + ij.j) % 2 == 0 ? +1 : -1;  // (-1)^{i+j}
        s1_ = s2_ = +1;                               // displacement +y as printed
    } else {
        g1_ = -sgn1 * co1.gamma;  // (-1)^i
        g2_ = -sgn2 * co2.gamma;
        nl_sign_ = +1;
        s1_ = static_cast<int>(sgn1);  // (-1)^{i+1} K_k
        s2_ = static_cast<int>(sgn2);
    }
    b1sq_ = co1.beta * co1.beta;
    b2sq_ = co2.beta * co2.beta;
    cross_ = rho * co1.beta * co2.beta;
    nodes1_ = measure_nodes(co1.K, quad);
    nodes2_ = measure_nodes(co2.K, quad);
}

double JumpGenerator::operator()(const TestFunction& xi, double x, double y) const {
    xi.require_inside(x, y);
    const double fx = xi.fx(x, y);
    const double fy = xi.fy(x, y);
    double out = g1_ * fx + g2_ * fy + 0.5 * b1sq_ * xi.fxx(x, y) + 0.5 * b2sq_ * xi.fyy(x, y) +
                 cross_ * xi.fxy(x, y);
    if (!nodes1_.x.empty() && !nodes2_.x.empty()) {
        const double fxy0 = xi.f(x, y);
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes1_.x.size(); ++i) {
            const double y1 = nodes1_.x[i];
            const double w1 = nodes1_.w[i];
            double inner = 0.0;
            for (std::size_t j = 0; j < nodes2_.x.size(); ++j) {
                const double y2 = nodes2_.x[j];
                double term = xi.f(x + s1_ * y1, y + s2_ * y2) - fxy0;
                if (compensate_)
                    term -= (s1_ * y1 * fx + s2_ * y2 * fy) /
                            (1.0 + std::sqrt(y1 * y1 + y2 * y2));
                inner += nodes2_.w[j] * term;
            }
            acc += w1 * inner;
        }
        out += nl_sign_ * acc;
    }
    return out;
}

double apply_jump_generator(const WorldIndex& ij, double rho, const LlrCoefficients& co1,
                            const LlrCoefficients& co2, const TestFunction& xi, double x,
                            double y, const QuadratureSpec& quad, SignConvention conv) {
    return JumpGenerator(ij, rho, co1, co2, quad, conv)(xi, x, y);
}

double generator_from_characteristics(const LevyCharacteristics& c1,
                                      const LevyCharacteristics& c2, double rho,
                                      const TestFunction& xi, double x, double y,
                                      const QuadratureSpec& quad, JumpCompensation comp) {
    c1.validate();
    c2.validate();
    xi.require_inside(x, y);
    const double fx = xi.fx(x, y);
    const double fy = xi.fy(x, y);
    double out = c1.drift * fx + c2.drift * fy + 0.5 * c1.diffusion_var * xi.fxx(x, y) +
                 0.5 * c2.diffusion_var * xi.fyy(x, y) +
                 rho * std::sqrt(c1.diffusion_var * c2.diffusion_var) * xi.fxy(x, y);
    if (!c1.jumps.is_zero() && !c2.jumps.is_zero()) {
        const FixedNodes n1 = measure_nodes(c1.jumps, quad);
        const FixedNodes n2 = measure_nodes(c2.jumps, quad);
        const double f0 = xi.f(x, y);
        const bool kernel = comp == JumpCompensation::Kernel;
        double acc = 0.0;
        for (std::size_t i = 0; i < n1.x.size(); ++i) {
            const double y1 = n1.x[i];
            double inner = 0.0;
            for (std::size_t j = 0; j < n2.x.size(); ++j) {
                const double y2 = n2.x[j];
                double term = xi.f(x + c1.jump_sign * y1, y + c2.jump_sign * y2) - f0;
                if (kernel)
                    term -= (c1.jump_sign * y1 * fx + c2.jump_sign * y2 * fy) /
                            (1.0 + std::sqrt(y1 * y1 + y2 * y2));
                inner += n2.w[j] * term;
            }
            acc += n1.w[i] * inner;
        }
        out += acc;
    }
    return out;
}

double kernel_compensator(const JumpMeasureSpec& K1, const JumpMeasureSpec& K2, int coord,
                          const QuadratureSpec& quad) {
    if (coord != 1 && coord != 2) throw parameter_error("kernel_compensator: coord must be 1 or 2");
    if (K1.is_zero() || K2.is_zero()) return 0.0;
    const FixedNodes n1 = measure_nodes(K1, quad);
    const FixedNodes n2 = measure_nodes(K2, quad);
    double acc = 0.0;
    for (std::size_t i = 0; i < n1.x.size(); ++i) {
        const double y1 = n1.x[i];
        double inner = 0.0;
        for (std::size_t j = 0; j < n2.x.size(); ++j) {
            const double y2 = n2.x[j];
            const double yk = coord == 1 ? y1 : y2;
            inner += n2.w[j] * yk / (1.0 + std::sqrt(y1 * y1 + y2 * y2));
        }
        acc += n1.w[i] * inner;
    }
    return acc;
}

double jump_mass_M(const JumpMeasureSpec& K1, const JumpMeasureSpec& K2) {
    const double m = K1.total_mass() * K2.total_mass();
    if (!std::isfinite(m)) throw parameter_error("jump_mass_M: masses must be finite");
    return m;
}

DynkinResult dynkin_residual(const LevyCharacteristics& c1, const LevyCharacteristics& c2,
                             double rho, const TestFunction& xi, double x, double y,
                             double t_small, std::size_t n_mc, std::uint64_t seed,
                             JumpCompensation comp, int threads) {
    c1.validate();
    c2.validate();
    if (!(t_small > 0)) throw parameter_error("dynkin_residual: t_small must be > 0");
    if (n_mc < 100) throw parameter_error("dynkin_residual: n_mc must be >= 100");
    xi.require_inside(x, y);

    const bool jumps = !c1.jumps.is_zero() && !c2.jumps.is_zero();
    double d1 = c1.drift, d2 = c2.drift;
    if (jumps && comp == JumpCompensation::Kernel) {
        d1 -= c1.jump_sign * kernel_compensator(c1.jumps, c2.jumps, 1);
        d2 -= c2.jump_sign * kernel_compensator(c1.jumps, c2.jumps, 2);
    }
    const double rate = jumps ? c1.jumps.total_mass() * c2.jumps.total_mass() : 0.0;

    const double l11 = std::sqrt(c1.diffusion_var);
    const double l21 = l11 > 0 ? rho * std::sqrt(c2.diffusion_var) : 0.0;
    const double l22 = std::sqrt(std::max(c2.diffusion_var - l21 * l21, 0.0));
    const double sq = std::sqrt(t_small);

    constexpr std::size_t kBlock = 4096;
    const std::size_t n_blocks = (n_mc + kBlock - 1) / kBlock;
    std::vector<double> block_sum(n_blocks, 0.0), block_sq(n_blocks, 0.0);

    auto run_block = [&](std::size_t b) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(lo + kBlock, n_mc);
        double s = 0.0, s2 = 0.0;
        for (std::size_t p = lo; p < hi; ++p) {
            RngStream rng(seed, p);
            const double z1 = rng.gaussian();
            const double z2 = rng.gaussian();
            double u1 = x + d1 * t_small + sq * l11 * z1;
            double u2 = y + d2 * t_small + sq * (l21 * z1 + l22 * z2);
            if (rate > 0) {
                double t = rng.exponential(1.0 / rate);
                while (t < t_small) {
                    u1 += c1.jump_sign * c1.jumps.sample(rng);
                    u2 += c2.jump_sign * c2.jumps.sample(rng);
                    t += rng.exponential(1.0 / rate);
                }
            }
            const double v = xi.f(u1, u2);
            s += v;
            s2 += v * v;
        }
        block_sum[b] = s;
        block_sq[b] = s2;
    };

    const int n_threads = std::max(1, threads);
    if (n_threads == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> counter{0};
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t b = counter.fetch_add(1); b < n_blocks;
                     b = counter.fetch_add(1))
                    run_block(b);
            });
        for (auto& th : pool) th.join();
    }

    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        sum += block_sum[b];
        sum_sq += block_sq[b];
    }
    const double n = static_cast<double>(n_mc);
    const double mean = sum / n;
    const double var = std::max(sum_sq / n - mean * mean, 0.0) * n / (n - 1);

    DynkinResult out;
    out.mc_value = (mean - xi.f(x, y)) / t_small;
    out.standard_error = std::sqrt(var / n) / t_small;
    out.generator_value = generator_from_characteristics(c1, c2, rho, xi, x, y, {}, comp);
    out.estimate = out.mc_value - out.generator_value;
    return out;
}

}  // namespace levyht
