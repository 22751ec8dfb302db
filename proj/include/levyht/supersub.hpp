#pragma once

#include <array>
#include <string>
#include <vector>

#include "levyht/generators.hpp"
#include "levyht/likelihood.hpp"
#include "levyht/thresholds.hpp"
#include "levyht/world.hpp"

namespace levyht {

// World-independent scalars of the envelope formulas. beta enters
// denominators and is kept positive (|beta| of the LLR coefficient).
struct EnvelopeCoeffs {
    double beta1 = 1.0, beta2 = 1.0;
    double gamma1 = 0.0, gamma2 = 0.0;
    double C1 = 0.0, C2 = 0.0;  // kernel compensator per coordinate
    double M = 0.0;             // product jump mass M1*M2
    double K_bound = 1.0;       // the proof's K > 0
    double L_const = 0.0;       // max{K M, M}; may be overridden explicitly
    bool L_overridden = false;

    void validate() const;
    static EnvelopeCoeffs from_llr(const LlrCoefficients& co1, const LlrCoefficients& co2,
                                   double k_bound, const QuadratureSpec& quad = {});
};

struct EnvelopeParams {
    EnvelopeCoeffs coeffs;
    Rectangle rect;
    WorldIndex world;
};

struct EnvelopeValue {
    double lower = 0.0;  // L_ij(x, y), +L under the roots
    double upper = 0.0;  // U_ij(x, y), -L under the roots
    bool lower_continued = false;  // sin-ratio analytic continuation used
    bool upper_continued = false;
};

// C_k = int int y_k/(1+|y|) K1(dy1) K2(dy2); the paper's index read as the
// coordinate index.
double compensator_constant(const JumpMeasureSpec& K1, const JumpMeasureSpec& K2, int coord,
                            const QuadratureSpec& quad = {});

EnvelopeValue eval_envelopes(const EnvelopeParams& params, double x, double y);

// Envelope as a TestFunction with analytic partials; outside the rectangle
// the value is clamped to the nearest boundary point (the decision state
// freezes at exit, so the nonlocal term sees boundary values).
TestFunction envelope_test_function(const EnvelopeParams& params, int branch /* +1 lower, -1 upper */);

// Heuristic bound K with xi(x+y) - xi(x) <= K xi(x), sampled over jump
// quantiles and interior points of the no-jump reference envelope.
double estimate_k_bound(const EnvelopeCoeffs& coeffs, const Rectangle& rect,
                        const JumpMeasureSpec& K1, const JumpMeasureSpec& K2,
                        double cap = 1e6);

// One-dimensional reduction: coordinate-1 machinery, second coordinate's
// ratio factors set to 1, diagonal-world sign on C.
struct Envelope1D {
    double beta = 1.0;
    double gamma = 0.0;
    double C = 0.0;
    double L_const = 0.0;

    double B(int w) const { return (gamma + (w == 0 ? +1.0 : -1.0) * C) / beta; }
};

double envelope1d_value(const Envelope1D& env, int w, double l, double r, double x, int branch,
                        bool* continued = nullptr);

// Bisect r > 0 so the 1-D envelope at x = 0 equals target (in (0,1)).
double solve_r_1d(const Envelope1D& env, int w, double l, double target, int branch);

struct EnvelopeRectangles {
    Rectangle lower_rect;  // solved from the lower envelopes
    Rectangle upper_rect;  // solved from the upper envelopes
    Rectangle combined;    // per-coordinate max of the two (conservative)
    // world-by-world values of U_ij(0,0) and L_ij(0,0) under combined
    std::array<double, 4> audit_upper{};
    std::array<double, 4> audit_lower{};
};

// Solve the envelope inequality system for the rectangle given the left
// thresholds: per coordinate and per envelope the world-0 1-D reduction is
// solved at the independence-split target sqrt(1 - alpha00); the remaining
// worlds' inequalities are evaluated and returned for audit.
EnvelopeRectangles rectangle_from_envelopes(const ErrorSpec& alphas,
                                            const EnvelopeCoeffs& coeffs, double l1, double l2);

struct PideSignReport {
    WorldIndex world;
    int grid_n = 0;
    struct Signs {
        int n_pos = 0, n_neg = 0, n_zero = 0;
        bool uniform = false;
        std::string role;  // "sub-solution" / "super-solution" / "mixed"
    };
    Signs lower, upper;
    double max_abs_residual_lower = 0.0;
    double max_abs_residual_upper = 0.0;
};

// Applies the printed jump generator numerically to both envelopes on an
// interior grid and reports the residual sign pattern per function.
PideSignReport envelope_pide_sign_check(const EnvelopeParams& params,
                                        const LlrCoefficients& co1, const LlrCoefficients& co2,
                                        int grid_n, const QuadratureSpec& quad = {});

}  // namespace levyht
