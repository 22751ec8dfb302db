#include "levyht/supersub.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levyht/errors.hpp"

namespace levyht {

namespace {

constexpr double kPi = 3.14159265358979323846;

// log(sinh(a)/sinh(w)) for 0 < a <= w, overflow-safe
double log_sinh_ratio(double a, double w) {
    return (a - w) + std::log1p(-std::exp(-2.0 * a)) - std::log1p(-std::exp(-2.0 * w));
}

struct Factor {
    double log_value = 0.0;
    bool zero = false;
    bool sin_branch = false;
    // first/second log-derivative building blocks, see factor_derivatives
    double e_part = 0.0;   // A_{(k, w+1)} (the exponent's A entry)
    double n_part = 0.0;   // A_{(k, 2-w)} (the ratio's A entry)
};

// One coordinate's envelope factor for world digit w:
//   f = exp(A_e B) sinh(A_n q)/sinh(W q),  q = sqrt(B^2 + Lsigned)
// with A_e = (x-l)/beta, A_n = (r-x)/beta for w = 0 and swapped for w = 1.
Factor factor_log(int w, double x, double l, double r, double beta, double B, double Lsigned) {
    Factor out;
    const double W = (r - l) / beta;
    const double ae = (w == 0 ? (x - l) : (r - x)) / beta;
    const double an = (w == 0 ? (r - x) : (x - l)) / beta;
    out.e_part = ae;
    out.n_part = an;
    const double disc = B * B + Lsigned;
    if (an <= 0.0) {
        out.zero = true;
        return out;
    }
    if (disc >= 0.0) {
        const double q = std::sqrt(disc);
        out.log_value = ae * B + (q == 0.0 ? std::log(an / W) : log_sinh_ratio(an * q, W * q));
    } else {
        const double qt = std::sqrt(-disc);
        out.sin_branch = true;
        if (W * qt >= kPi)
            throw numerical_error(
                "envelope: sin-branch continuation invalid (width * sqrt(L - B^2) >= pi)");
        out.log_value = ae * B + std::log(std::sin(an * qt)) - std::log(std::sin(W * qt));
    }
    return out;
}

double factor_value(int w, double x, double l, double r, double beta, double B, double Lsigned,
                    bool* continued) {
    const Factor f = factor_log(w, x, l, r, beta, B, Lsigned);
    if (continued && f.sin_branch) *continued = true;
    return f.zero ? 0.0 : std::exp(f.log_value);
}

// value, d/dx and d2/dx2 of one factor (used for the envelope TestFunction)
struct FactorDerivs {
    double f = 0.0, df = 0.0, d2f = 0.0;
    bool sin_branch = false;
};

FactorDerivs factor_derivs(int w, double x, double l, double r, double beta, double B,
                           double Lsigned) {
    FactorDerivs out;
    const double W = (r - l) / beta;
    const double ae = (w == 0 ? (x - l) : (r - x)) / beta;
    const double an = (w == 0 ? (r - x) : (x - l)) / beta;
    const double sgn = (w == 0 ? +1.0 : -1.0);  // d(ae)/dx = sgn/beta, d(an)/dx = -sgn/beta
    const double disc = B * B + Lsigned;
    const double E = std::exp(ae * B);
    if (disc >= 0.0) {
        const double q = std::sqrt(disc);
        double ratio_s, ratio_c;  // sinh(an q)/sinh(W q), cosh(an q)/sinh(W q)
        if (q == 0.0) {
            // degenerate q -> 0 limit: the ratio collapses to an/W
            out.f = E * an / W;
            out.df = (sgn / beta) * B * out.f + E * (-sgn / beta) / W;
            out.d2f = (B * B / (beta * beta)) * out.f -
                      2.0 * (B / (beta * beta)) * E / W;
            return out;
        }
        if (W * q > 30.0) {
            // large-argument regime: sinh/cosh ratios via exp differences
            const double lr = log_sinh_ratio(std::max(an, 1e-300) * q, W * q);
            ratio_s = an > 0 ? std::exp(lr) : 0.0;
            const double lc = (an * q - W * q) + std::log1p(std::exp(-2.0 * an * q)) -
                              std::log1p(-std::exp(-2.0 * W * q));
            ratio_c = std::exp(lc);
        } else {
            ratio_s = std::sinh(an * q) / std::sinh(W * q);
            ratio_c = std::cosh(an * q) / std::sinh(W * q);
        }
        out.f = E * ratio_s;
        // df = sgn/beta * (B f - q E ratio_c)
        out.df = (sgn / beta) * (B * out.f - q * E * ratio_c);
        // d2f = ((B^2+q^2) f - 2 B q E ratio_c)/beta^2
        out.d2f = ((B * B + q * q) * out.f - 2.0 * B * q * E * ratio_c) / (beta * beta);
    } else {
        const double qt = std::sqrt(-disc);
        out.sin_branch = true;
        if (W * qt >= kPi)
            throw numerical_error(
                "envelope: sin-branch continuation invalid (width * sqrt(L - B^2) >= pi)");
        const double den = std::sin(W * qt);
        const double ratio_s = std::sin(an * qt) / den;
        const double ratio_c = std::cos(an * qt) / den;
        out.f = E * ratio_s;
        out.df = (sgn / beta) * (B * out.f - qt * E * ratio_c);
        out.d2f = ((B * B - qt * qt) * out.f - 2.0 * B * qt * E * ratio_c) / (beta * beta);
    }
    return out;
}

double world_B1(const EnvelopeCoeffs& c, const WorldIndex& w) {
    return (c.gamma1 + (w.j == 0 ? +1.0 : -1.0) * c.C1) / c.beta1;  // (-1)^j on coordinate 1
}
double world_B2(const EnvelopeCoeffs& c, const WorldIndex& w) {
    return (c.gamma2 + (w.i == 0 ? +1.0 : -1.0) * c.C2) / c.beta2;  // (-1)^i on coordinate 2
}

}  // namespace

void EnvelopeCoeffs::validate() const {
    if (!(beta1 > 0) || !(beta2 > 0))
        throw parameter_error("envelope: beta entries must be positive");
    if (M < 0 || K_bound < 0 || L_const < 0)
        throw parameter_error("envelope: M, K_bound, L must be nonnegative");
    if (!L_overridden && M > 0 && L_const < M)
        throw parameter_error("envelope: L must satisfy L >= M when derived from jumps");
}

EnvelopeCoeffs EnvelopeCoeffs::from_llr(const LlrCoefficients& co1, const LlrCoefficients& co2,
                                        double k_bound, const QuadratureSpec& quad) {
    EnvelopeCoeffs out;
    out.beta1 = std::abs(co1.beta);
    out.beta2 = std::abs(co2.beta);
    out.gamma1 = co1.gamma;
    out.gamma2 = co2.gamma;
    out.C1 = compensator_constant(co1.K, co2.K, 1, quad);
    out.C2 = compensator_constant(co1.K, co2.K, 2, quad);
    out.M = jump_mass_M(co1.K, co2.K);
    out.K_bound = k_bound;
    out.L_const = std::max(k_bound * out.M, out.M);
    out.validate();
    return out;
}

double compensator_constant(const JumpMeasureSpec& K1, const JumpMeasureSpec& K2, int coord,
                            const QuadratureSpec& quad) {
    return kernel_compensator(K1, K2, coord, quad);
}

EnvelopeValue eval_envelopes(const EnvelopeParams& params, double x, double y) {
    params.coeffs.validate();
    params.rect.validate();
    params.world.validate();
    const Rectangle& R = params.rect;
    if (!(x >= R.l1 && x <= R.r1 && y >= R.l2 && y <= R.r2))
        throw parameter_error("eval_envelopes: point outside the closed rectangle");
    const double B1 = world_B1(params.coeffs, params.world);
    const double B2 = world_B2(params.coeffs, params.world);
    const double L = params.coeffs.L_const;
    EnvelopeValue out;
    const double f1l = factor_value(params.world.i, x, R.l1, R.r1, params.coeffs.beta1, B1, +L,
                                    &out.lower_continued);
    const double f2l = factor_value(params.world.j, y, R.l2, R.r2, params.coeffs.beta2, B2, +L,
                                    &out.lower_continued);
    const double f1u = factor_value(params.world.i, x, R.l1, R.r1, params.coeffs.beta1, B1, -L,
                                    &out.upper_continued);
    const double f2u = factor_value(params.world.j, y, R.l2, R.r2, params.coeffs.beta2, B2, -L,
                                    &out.upper_continued);
    out.lower = f1l * f2l;
    out.upper = f1u * f2u;
    return out;
}

TestFunction envelope_test_function(const EnvelopeParams& params, int branch) {
    if (branch != +1 && branch != -1)
        throw parameter_error("envelope_test_function: branch must be +1 (lower) or -1 (upper)");
    params.coeffs.validate();
    params.rect.validate();
    const EnvelopeParams p = params;  // captured by value
    const double B1 = world_B1(p.coeffs, p.world);
    const double B2 = world_B2(p.coeffs, p.world);
    const double Ls = branch * p.coeffs.L_const;

    auto clamp_x = [p](double x) { return std::clamp(x, p.rect.l1, p.rect.r1); };
    auto clamp_y = [p](double y) { return std::clamp(y, p.rect.l2, p.rect.r2); };
    auto d1 = [p, B1, Ls, clamp_x](double x) {
        return factor_derivs(p.world.i, clamp_x(x), p.rect.l1, p.rect.r1, p.coeffs.beta1, B1, Ls);
    };
    auto d2 = [p, B2, Ls, clamp_y](double y) {
        return factor_derivs(p.world.j, clamp_y(y), p.rect.l2, p.rect.r2, p.coeffs.beta2, B2, Ls);
    };
    TestFunction tf;
    tf.name = branch > 0 ? "envelope_lower" : "envelope_upper";
    tf.f = [d1, d2](double x, double y) { return d1(x).f * d2(y).f; };
    tf.fx = [d1, d2](double x, double y) { return d1(x).df * d2(y).f; };
    tf.fy = [d1, d2](double x, double y) { return d1(x).f * d2(y).df; };
    tf.fxx = [d1, d2](double x, double y) { return d1(x).d2f * d2(y).f; };
    tf.fyy = [d1, d2](double x, double y) { return d1(x).f * d2(y).d2f; };
    tf.fxy = [d1, d2](double x, double y) { return d1(x).df * d2(y).df; };
    return tf;
}

double estimate_k_bound(const EnvelopeCoeffs& coeffs, const Rectangle& rect,
                        const JumpMeasureSpec& K1, const JumpMeasureSpec& K2, double cap) {
    if (K1.is_zero() || K2.is_zero()) return 0.0;
    EnvelopeParams ref;
    ref.coeffs = coeffs;
    ref.coeffs.L_const = 0.0;
    ref.coeffs.L_overridden = true;
    ref.rect = rect;
    ref.world = {0, 0};
    const TestFunction xi = envelope_test_function(ref, +1);

    // deterministic jump sample spread around the mean jump size
    auto quantiles = [](const JumpMeasureSpec& K) {
        std::vector<double> qs;
        for (int k = 1; k <= 8; ++k) qs.push_back(K.mean_jump() * k / 4.0);
        return qs;
    };
    const auto q1 = quantiles(K1);
    const auto q2 = quantiles(K2);
    double sup = 0.0;
    for (int a = 1; a <= 5; ++a) {
        for (int b = 1; b <= 5; ++b) {
            const double x = rect.l1 + (rect.r1 - rect.l1) * a / 6.0;
            const double y = rect.l2 + (rect.r2 - rect.l2) * b / 6.0;
            const double base = xi.f(x, y);
            if (!(base > 1e-300)) continue;
            for (double j1 : q1)
                for (double j2 : q2)
                    sup = std::max(sup, (xi.f(x + j1, y + j2) - base) / base);
        }
    }
    return std::min(std::max(sup, 0.0), cap);
}

double envelope1d_value(const Envelope1D& env, int w, double l, double r, double x, int branch,
                        bool* continued) {
    if (!(env.beta > 0)) throw parameter_error("envelope1d: beta must be > 0");
    if (w != 0 && w != 1) throw parameter_error("envelope1d: world digit must be 0 or 1");
    return factor_value(w, x, l, r, env.beta, env.B(w), branch * env.L_const, continued);
}

double solve_r_1d(const Envelope1D& env, int w, double l, double target, int branch) {
    if (!(l < 0)) throw parameter_error("solve_r_1d: l must be negative");
    if (!(target > 0 && target < 1)) throw parameter_error("solve_r_1d: target must be in (0,1)");
    auto value = [&](double r) -> double {
        try {
            return envelope1d_value(env, w, l, r, 0.0, branch);
        } catch (const numerical_error&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    const double r_max = 100.0;
    const int n_scan = 800;
    double prev_r = 0.0, prev_g = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k <= n_scan; ++k) {
        const double r = 1e-7 * std::pow(r_max / 1e-7, static_cast<double>(k) / n_scan);
        const double g = value(r) - target;
        if (std::isnan(g)) {
            prev_g = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        if (!std::isnan(prev_g) && prev_g * g <= 0.0) {
            double lo = prev_r, hi = r;
            for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = value(mid) - target;
                if (std::isnan(gm)) break;
                ((gm < 0) == (prev_g < 0) ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev_r = r;
        prev_g = g;
    }
    throw infeasible_error("solve_r_1d: envelope target unreachable for any r in the bracket");
}

EnvelopeRectangles rectangle_from_envelopes(const ErrorSpec& alphas,
                                            const EnvelopeCoeffs& coeffs, double l1, double l2) {
    alphas.validate();
    coeffs.validate();
    if (!(l1 < 0 && l2 < 0))
        throw parameter_error("rectangle_from_envelopes: l1, l2 must be negative");
    // independence split of the world-00 target across the two coordinates
    const double target = std::sqrt(1.0 - alphas.alpha00);
    const Envelope1D e1{coeffs.beta1, coeffs.gamma1, coeffs.C1, coeffs.L_const};
    const Envelope1D e2{coeffs.beta2, coeffs.gamma2, coeffs.C2, coeffs.L_const};
    EnvelopeRectangles out;
    out.lower_rect = Rectangle{l1, solve_r_1d(e1, 0, l1, target, +1), l2,
                               solve_r_1d(e2, 0, l2, target, +1)};
    out.upper_rect = Rectangle{l1, solve_r_1d(e1, 0, l1, target, -1), l2,
                               solve_r_1d(e2, 0, l2, target, -1)};
    out.combined = Rectangle{l1, std::max(out.lower_rect.r1, out.upper_rect.r1), l2,
                             std::max(out.lower_rect.r2, out.upper_rect.r2)};
    int idx = 0;
    for (int i = 0; i <= 1; ++i)
        for (int j = 0; j <= 1; ++j) {
            EnvelopeParams p{coeffs, out.combined, WorldIndex{i, j}};
            const EnvelopeValue v = eval_envelopes(p, 0.0, 0.0);
            out.audit_upper[idx] = v.upper;
            out.audit_lower[idx] = v.lower;
            ++idx;
        }
    return out;
}

PideSignReport envelope_pide_sign_check(const EnvelopeParams& params,
                                        const LlrCoefficients& co1, const LlrCoefficients& co2,
                                        int grid_n, const QuadratureSpec& quad) {
    if (grid_n < 8) throw parameter_error("envelope_pide_sign_check: grid_n must be >= 8");
    params.coeffs.validate();
    params.rect.validate();
    const JumpGenerator gen(params.world, 0.0, co1, co2, quad, SignConvention::Statement,
                            JumpCompensation::Kernel);
    PideSignReport rep;
    rep.world = params.world;
    rep.grid_n = grid_n;
    const TestFunction lo = envelope_test_function(params, +1);
    const TestFunction up = envelope_test_function(params, -1);
    auto scan = [&](const TestFunction& xi, PideSignReport::Signs& s, double& max_abs) {
        for (int a = 1; a < grid_n - 1; ++a) {
            for (int b = 1; b < grid_n - 1; ++b) {
                const double x =
                    params.rect.l1 + (params.rect.r1 - params.rect.l1) * a / (grid_n - 1.0);
                const double y =
                    params.rect.l2 + (params.rect.r2 - params.rect.l2) * b / (grid_n - 1.0);
                const double r = gen(xi, x, y);
                max_abs = std::max(max_abs, std::abs(r));
                if (r > 1e-12)
                    ++s.n_pos;
                else if (r < -1e-12)
                    ++s.n_neg;
                else
                    ++s.n_zero;
            }
        }
        s.uniform = (s.n_pos == 0) || (s.n_neg == 0);
        s.role = !s.uniform ? "mixed" : (s.n_pos > 0 ? "sub-solution" : "super-solution");
    };
    scan(lo, rep.lower, rep.max_abs_residual_lower);
    scan(up, rep.upper, rep.max_abs_residual_upper);
    return rep;
}

}  // namespace levyht
