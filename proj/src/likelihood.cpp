#include "levyht/likelihood.hpp"

#include <cmath>
#include <sstream>

#include "levyht/errors.hpp"

namespace levyht {

void DriftTestParams::validate() const {
    if (m == 0) throw parameter_error("drift test: m must be nonzero");
    if (!(sigma > 0)) throw parameter_error("drift test: sigma must be > 0");
}

void JumpTestParams::validate() const {
    if (a < 0) throw parameter_error("jump test: tilt a must be >= 0");
    if (!(sigma > 0)) throw parameter_error("jump test: sigma must be > 0");
    if (!std::isfinite(nu.total_mass()) || !std::isfinite(nu.mean_jump()))
        throw parameter_error("jump test: base measure needs finite mass and first moment");
}

std::string LlrCoefficients::to_json() const {
    std::ostringstream os;
    os.precision(12);
    os << "{\"beta\":" << beta << ",\"m\":" << m_jump << ",\"gamma\":" << gamma
       << ",\"K_mass\":" << K_mass() << ",\"sign\":" << sign << "}";
    return os.str();
}

LevyCharacteristics drift_llr_characteristics(const DriftTestParams& params, int index,
                                              SignConvention conv) {
    params.validate();
    if (index != 0 && index != 1) throw parameter_error("hypothesis index must be 0 or 1");
    const double c = params.m * params.m / (2.0 * params.sigma * params.sigma);
    int sign = (index == 0) ? +1 : -1;  // (-1)^i
    if (conv == SignConvention::Statement) sign = -sign;
    LevyCharacteristics out;
    out.drift = sign * c;
    out.diffusion_var = 2.0 * c;
    out.jumps = JumpMeasureSpec::zero();
    out.jump_sign = +1;
    return out;
}

SamplePath drift_llr_from_observation(const SamplePath& obs, double m, double sigma) {
    if (!(sigma > 0)) throw parameter_error("drift_llr_from_observation: sigma must be > 0");
    obs.validate();
    SamplePath u;
    u.times = obs.times;
    u.dt = obs.dt;
    u.jump_indices = obs.jump_indices;
    u.values.resize(obs.values.size());
    const double scale = m / (sigma * sigma);
    const double decay = m * m / (2.0 * sigma * sigma);
    const double z0 = obs.values.front();
    for (std::size_t i = 0; i < obs.values.size(); ++i)
        u.values[i] = scale * (obs.values[i] - z0) - decay * obs.times[i];
    return u;
}

LlrCoefficients jump_llr_coefficients(const JumpTestParams& params, int index,
                                      const QuadratureSpec& quad, KForm kform) {
    params.validate();
    if (index != 0 && index != 1) throw parameter_error("hypothesis index must be 0 or 1");
    quad.validate();
    LlrCoefficients out;
    out.sign = (index == 0) ? -1 : +1;  // (-1)^{i+1}
    if (params.a == 0 || params.nu.is_zero()) return out;

    const double a = params.a;
    const auto& nu = params.nu;
    out.beta = -(a / params.sigma) *
               nu.integrate([](double x) { return std::min(1.0, x) * x; }, quad.abs_tol);
    out.m_jump = a * nu.integrate([](double x) { return x > 1.0 ? x : 0.0; }, quad.abs_tol);
    const double small = a * nu.integrate(
        [](double x) {
            if (x >= 1.0) return 0.0;
            const double lg = std::log1p(x);
            return lg * lg - x;
        },
        quad.abs_tol);
    out.gamma = out.m_jump - 0.5 * out.beta * out.beta + small;

    const double base_cut =
        std::isfinite(nu.support_upper()) ? nu.support_upper() : nu.scale() * 150.0;
    if (kform == KForm::DensityTilt) {
        auto kdens = [a, nu](double y) {
            return a * std::log1p(y) * (1.0 + a * y) * nu.density(y);
        };
        out.K = JumpMeasureSpec::from_density(kdens, base_cut, quad);
    } else {
        // pushforward of the base measure under x -> log(1 + a x)
        auto kdens = [a, nu](double y) {
            const double x = std::expm1(y) / a;
            return nu.density(x) * std::exp(y) / a;
        };
        out.K = JumpMeasureSpec::from_density(kdens, std::log1p(a * base_cut), quad);
    }
    return out;
}

LevyCharacteristics jump_llr_characteristics(const LlrCoefficients& coeffs, int index) {
    if (index != 0 && index != 1) throw parameter_error("hypothesis index must be 0 or 1");
    if (!std::isfinite(coeffs.gamma) || !std::isfinite(coeffs.beta))
        throw parameter_error("jump_llr_characteristics: coefficients must be finite");
    LevyCharacteristics out;
    out.drift = (index == 0 ? +1.0 : -1.0) * coeffs.gamma;
    out.diffusion_var = coeffs.beta * coeffs.beta;
    out.jumps = coeffs.K;
    out.jump_sign = (index == 0) ? -1 : +1;
    return out;
}

}  // namespace levyht
