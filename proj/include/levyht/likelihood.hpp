#pragma once

#include <cstdint>
#include <string>

#include "levyht/levy_sim.hpp"
#include "levyht/quadrature.hpp"

namespace levyht {

// The paper's theorem statements and their proofs disagree on the sign of
// the first-order terms; both conventions are exposed. Proof is the
// characteristics-level convention ((-1)^i on the drift), Statement the
// printed generator convention ((-1)^{i+1}).
enum class SignConvention { Proof, Statement };

// Reading of the log-transformed LLR jump measure: a density multiplier on
// the tilted measure (as printed), or the pushforward of the base measure
// under x -> log(1 + a x).
enum class KForm { DensityTilt, Pushforward };

struct DriftTestParams {
    double m = 1.0;      // drift alternative (1/time)
    double sigma = 1.0;  // diffusion scale

    void validate() const;
};

struct JumpTestParams {
    double a = 1.0;      // tilt alternative, > 0 under the signal hypothesis
    double sigma = 1.0;  // diffusion scale entering the beta integral
    JumpMeasureSpec nu = JumpMeasureSpec::exponential(1.0, 1.0);  // base measure

    void validate() const;
};

// Coefficients of the jump-test LLR triplet for one coordinate.
struct LlrCoefficients {
    double beta = 0.0;    // Gaussian part loading (negative by construction)
    double m_jump = 0.0;  // large-jump linear term
    double gamma = 0.0;   // drift magnitude
    JumpMeasureSpec K = JumpMeasureSpec::zero();  // log-transformed jump measure
    int sign = +1;        // (-1)^{i+1} stored at construction

    double K_mass() const { return K.total_mass(); }
    std::string to_json() const;  // {beta, m, gamma, K_mass, sign}
};

// Drift-test LLR triplet: drift (-1)^i m^2/(2 sigma^2) under the proof
// convention, diffusion m^2/sigma^2, no jumps. diffusion == 2|drift| always.
LevyCharacteristics drift_llr_characteristics(const DriftTestParams& params, int index,
                                              SignConvention conv = SignConvention::Proof);

// Pathwise LLR u_t = (m/sigma^2) z_t - m^2/(2 sigma^2) t from an observation
// path simulated with diffusion scale sigma; starts at 0.
SamplePath drift_llr_from_observation(const SamplePath& obs, double m, double sigma);

// Eqs for beta, m, gamma and the measure K by adaptive quadrature.
LlrCoefficients jump_llr_coefficients(const JumpTestParams& params, int index,
                                      const QuadratureSpec& quad = {},
                                      KForm kform = KForm::DensityTilt);

// Triplet ((-1)^i gamma, beta^2, (-1)^{i+1} K).
LevyCharacteristics jump_llr_characteristics(const LlrCoefficients& coeffs, int index);

}  // namespace levyht
