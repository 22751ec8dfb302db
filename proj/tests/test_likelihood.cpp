#include <doctest.h>

#include <cmath>

#include "levyht/likelihood.hpp"
#include "test_util.hpp"

using namespace levyht;

TEST_CASE("drift llr characteristics: proof-convention signs") {
    const auto c1 = drift_llr_characteristics({1.0, 1.0}, 1);
    CHECK(c1.drift == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(c1.diffusion_var == doctest::Approx(1.0).epsilon(1e-14));

    const auto c0 = drift_llr_characteristics({2.0, 1.0}, 0);
    CHECK(c0.drift == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c0.diffusion_var == doctest::Approx(4.0).epsilon(1e-14));

    const auto cs = drift_llr_characteristics({2.0, 1.0}, 0, SignConvention::Statement);
    CHECK(cs.drift == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("drift llr characteristics: diffusion equals 2|drift| on a grid") {
    for (double m : {0.3, 1.0, 2.5}) {
        for (double s : {0.5, 1.0, 3.0}) {
            for (int i : {0, 1}) {
                const auto c = drift_llr_characteristics({m, s}, i);
                CHECK(c.diffusion_var == doctest::Approx(2 * std::abs(c.drift)).epsilon(1e-12));
            }
        }
    }
    CHECK_THROWS_AS(drift_llr_characteristics({1.0, 0.0}, 0), parameter_error);
}

TEST_CASE("drift llr from observation: degenerate paths") {
    SamplePath zero;
    zero.times = {0, 0.5, 1.0};
    zero.values = {0, 0, 0};
    const SamplePath u = drift_llr_from_observation(zero, 1.0, 1.0);
    CHECK(u.values[1] == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(u.values[2] == doctest::Approx(-0.5).epsilon(1e-14));

    SamplePath signal;
    signal.times = {0, 0.5, 1.0};
    signal.values = {0, 0.5, 1.0};  // z_t = m t with m = 1
    const SamplePath u1 = drift_llr_from_observation(signal, 1.0, 1.0);
    CHECK(u1.values[2] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("drift llr under the signal world drifts at +m^2/(2 sigma^2)") {
    const double m = 1.0, sigma = 1.0, T = 4.0;
    std::vector<double> slopes;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const SamplePath z = simulate_bm_drift(m, sigma, T, 0.02, 14, s);
        slopes.push_back(drift_llr_from_observation(z, m, sigma).terminal() / T);
    }
    const auto mv = testutil::mean_var(slopes);
    CHECK(std::abs(mv.mean - 0.5) < 3 * mv.se);
}

TEST_CASE("jump coefficients: zero tilt is fully degenerate") {
    JumpTestParams p;
    p.a = 0.0;
    const auto co = jump_llr_coefficients(p, 0);
    CHECK(co.beta == 0.0);
    CHECK(co.m_jump == 0.0);
    CHECK(co.gamma == 0.0);
    CHECK(co.K.is_zero());
}

TEST_CASE("jump coefficients: narrow tabulated point mass at x = 2") {
    const double w = 1e-3;
    JumpTestParams p;
    p.a = 1.0;
    p.sigma = 1.0;
    p.nu = JumpMeasureSpec::tabulated({2 - w, 2.0, 2 + w}, {0.0, 1.0 / w, 0.0});
    const auto co = jump_llr_coefficients(p, 1);
    CHECK(co.m_jump == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(co.beta == doctest::Approx(-2.0).epsilon(1e-5));
}

TEST_CASE("jump coefficients: frozen quadrature oracles for exponential nu") {
    JumpTestParams p;
    p.a = 1.0;
    p.sigma = 1.0;
    p.nu = JumpMeasureSpec::exponential(1.0, 1.0);
    const auto co = jump_llr_coefficients(p, 1);
    // independent high-precision values fixed before the build
    CHECK(std::abs(co.beta - (-0.89636167648567304)) < 1e-8);  // -(2 - 3/e)
    CHECK(std::abs(co.m_jump - 0.73575888234288464) < 1e-10);  // 2/e
    CHECK(std::abs(co.gamma - 0.16314224271012998) < 1e-8);
    CHECK(std::abs(co.K.total_mass() - 1.5963473623231941) < 1e-8);
    CHECK(std::abs(co.K.integrate([](double y) { return y; }) - 3.5963473623231941) < 1e-8);
}

TEST_CASE("jump characteristics: index flip negates drift, keeps diffusion") {
    JumpTestParams p;
    p.a = 1.0;
    p.sigma = 1.0;
    p.nu = JumpMeasureSpec::exponential(1.0, 1.0);
    const auto co = jump_llr_coefficients(p, 1);
    const auto c0 = jump_llr_characteristics(co, 0);
    const auto c1 = jump_llr_characteristics(co, 1);
    CHECK(c0.drift == doctest::Approx(-c1.drift).epsilon(1e-14));
    CHECK(c0.diffusion_var == doctest::Approx(c1.diffusion_var).epsilon(1e-14));
    CHECK(c0.jump_sign == -1);
    CHECK(c1.jump_sign == +1);
}

TEST_CASE("jump llr paths: empirical slope matches drift plus jump mean") {
    JumpTestParams p;
    p.a = 1.0;
    p.sigma = 1.0;
    p.nu = JumpMeasureSpec::exponential(1.0, 1.0);
    const auto co = jump_llr_coefficients(p, 1);
    const auto ch = jump_llr_characteristics(co, 1);
    const double expected = ch.drift + ch.jump_sign * co.K.integrate([](double y) { return y; });
    const double T = 2.0;
    std::vector<double> slopes;
    for (std::uint64_t s = 0; s < 10000; ++s)
        slopes.push_back(simulate_characteristics(ch, T, 0.01, 29, s).terminal() / T);
    const auto mv = testutil::mean_var(slopes);
    CHECK(std::abs(mv.mean - expected) < 3 * mv.se);
}

TEST_CASE("coefficient monotonicity in the tilt") {
    double prev_beta = 1.0, prev_m = -1.0, prev_mass = -1.0;
    for (double a : {0.5, 1.0, 2.0, 4.0}) {
        JumpTestParams p;
        p.a = a;
        p.sigma = 1.0;
        p.nu = JumpMeasureSpec::exponential(1.0, 1.0);
        const auto co = jump_llr_coefficients(p, 1);
        CHECK(co.beta < prev_beta);
        CHECK(co.m_jump > prev_m);
        CHECK(co.K.total_mass() > prev_mass);
        prev_beta = co.beta;
        prev_m = co.m_jump;
        prev_mass = co.K.total_mass();
    }
}

TEST_CASE("pushforward K-form: mass equals the base mass") {
    JumpTestParams p;
    p.a = 2.0;
    p.sigma = 1.0;
    p.nu = JumpMeasureSpec::exponential(1.5, 0.8);
    const auto co = jump_llr_coefficients(p, 1, {}, KForm::Pushforward);
    CHECK(co.K.total_mass() == doctest::Approx(1.5).epsilon(1e-8));
    // sizes live on (0, log(1 + a x_max))
    CHECK(co.K.support_upper() < std::log1p(2.0 * 0.8 * 151.0));
}

TEST_CASE("coefficients export as audit JSON") {
    JumpTestParams p;
    p.a = 1.0;
    p.sigma = 1.0;
    p.nu = JumpMeasureSpec::exponential(1.0, 1.0);
    const auto co = jump_llr_coefficients(p, 1);
    const std::string js = co.to_json();
    CHECK(js.find("\"beta\":") != std::string::npos);
    CHECK(js.find("\"gamma\":") != std::string::npos);
    CHECK(js.find("\"K_mass\":") != std::string::npos);
    CHECK(js.find("\"sign\":1") != std::string::npos);
}
