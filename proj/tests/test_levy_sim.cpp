#include <doctest.h>

#include <cmath>

#include "levyht/levy_sim.hpp"
#include "test_util.hpp"

using namespace levyht;

TEST_CASE("bm: degenerate diffusion stays at zero") {
    const SamplePath p = simulate_bm_drift(0.0, 0.0, 1.0, 0.01, 42);
    for (double v : p.values) CHECK(v == 0.0);
    CHECK(p.times.front() == 0.0);
    CHECK(p.times.back() == doctest::Approx(1.0));
}

TEST_CASE("bm: pure drift reaches drift * horizon") {
    const SamplePath p = simulate_bm_drift(1.0, 0.0, 1.0, 0.01, 42);
    CHECK(p.terminal() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bm: standard terminal moments over 10000 paths") {
    std::vector<double> terminals;
    terminals.reserve(10000);
    for (std::uint64_t s = 0; s < 10000; ++s)
        terminals.push_back(simulate_bm_drift(0.0, 1.0, 1.0, 0.01, 7, s).terminal());
    const auto mv = testutil::mean_var(terminals);
    CHECK(std::abs(mv.mean) < 3.0 / std::sqrt(10000.0));
    CHECK(mv.var == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("bm: parameter validation") {
    CHECK_THROWS_AS(simulate_bm_drift(0, 1, 1.0, 0.0, 1), parameter_error);
    CHECK_THROWS_AS(simulate_bm_drift(0, 1, 0.001, 0.01, 1), parameter_error);
    CHECK_THROWS_AS(simulate_bm_drift(0, -1, 1.0, 0.01, 1), parameter_error);
}

TEST_CASE("compound poisson: zero intensity gives a flat path") {
    const SamplePath p = simulate_compound_poisson(JumpMeasureSpec::zero(), 5.0, 3);
    CHECK(p.jump_indices.empty());
    for (double v : p.values) CHECK(v == 0.0);
}

TEST_CASE("compound poisson: jump-count matches the Poisson mean") {
    const double lam = 2.0, T = 3.0;
    const auto spec = JumpMeasureSpec::exponential(lam, 0.5);
    double total = 0;
    const int n = 10000;
    for (int s = 0; s < n; ++s)
        total += static_cast<double>(
            simulate_compound_poisson(spec, T, 11, static_cast<std::uint64_t>(s))
                .jump_indices.size());
    const double mean = total / n;
    CHECK(std::abs(mean - lam * T) < 3.0 * std::sqrt(lam * T / n));
}

TEST_CASE("compound poisson: exponential sizes hit the mean oracle") {
    const double lam = 2.0, T = 3.0, eta = 0.7;
    const auto spec = JumpMeasureSpec::exponential(lam, eta);
    std::vector<double> terminals;
    const int n = 10000;
    terminals.reserve(n);
    for (int s = 0; s < n; ++s)
        terminals.push_back(
            simulate_compound_poisson(spec, T, 5, static_cast<std::uint64_t>(s)).terminal());
    const auto mv = testutil::mean_var(terminals);
    CHECK(std::abs(mv.mean - lam * T * eta) < 3.0 * mv.se);
}

TEST_CASE("levy2d: identity diffusion gives uncorrelated increments") {
    const Sigma2 sigma{1.0, 0.0, 1.0};
    const auto path = simulate_levy2d({0, 0}, sigma,
                                      {JumpMeasureSpec::zero(), JumpMeasureSpec::zero()}, 100.0,
                                      0.01, 21);
    std::vector<double> d1, d2;
    for (std::size_t i = 1; i < path.size(); ++i) {
        d1.push_back(path.values1[i] - path.values1[i - 1]);
        d2.push_back(path.values2[i] - path.values2[i - 1]);
    }
    CHECK(std::abs(testutil::pearson(d1, d2)) < 0.05);
}

TEST_CASE("levy2d: rank-1 diffusion gives proportional increments") {
    const double s1 = 0.5, s2 = 2.0;
    const Sigma2 sigma{s1 * s1, s1 * s2, s2 * s2};
    const auto path = simulate_levy2d({0, 0}, sigma,
                                      {JumpMeasureSpec::zero(), JumpMeasureSpec::zero()}, 1.0,
                                      0.01, 33);
    for (std::size_t i = 1; i < path.size(); ++i) {
        const double inc1 = path.values1[i] - path.values1[i - 1];
        const double inc2 = path.values2[i] - path.values2[i - 1];
        CHECK(inc2 == doctest::Approx(inc1 * s2 / s1).epsilon(1e-12));
    }
}

TEST_CASE("levy2d: pure drift terminal") {
    const auto path = simulate_levy2d({1, -1}, Sigma2{0, 0, 0},
                                      {JumpMeasureSpec::zero(), JumpMeasureSpec::zero()}, 2.0,
                                      0.01, 1);
    CHECK(path.values1.back() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(path.values2.back() == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("levy2d: rejects indefinite sigma") {
    CHECK_THROWS_AS(simulate_levy2d({0, 0}, Sigma2{1.0, 2.0, 1.0},
                                    {JumpMeasureSpec::zero(), JumpMeasureSpec::zero()}, 1.0,
                                    0.01, 1),
                    parameter_error);
}

TEST_CASE("subordinator paths are nondecreasing") {
    const auto spec = JumpMeasureSpec::exponential(3.0, 1.0, 0.5);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const SamplePath p = simulate_compound_poisson(spec, 10.0, 17, s);
        for (std::size_t i = 1; i < p.size(); ++i) CHECK(p.values[i] >= p.values[i - 1]);
    }
}

TEST_CASE("simulators are bit-reproducible for a fixed seed") {
    const auto spec = JumpMeasureSpec::exponential(1.0, 1.0);
    const auto a = simulate_levy2d({0.1, 0.2}, Sigma2{1, 0.3, 1}, {spec, spec}, 5.0, 0.01, 77);
    const auto b = simulate_levy2d({0.1, 0.2}, Sigma2{1, 0.3, 1}, {spec, spec}, 5.0, 0.01, 77);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.times[i] == b.times[i]);
        CHECK(a.values1[i] == b.values1[i]);
        CHECK(a.values2[i] == b.values2[i]);
    }
}

TEST_CASE("characteristics pair: mean slopes follow drift when no jumps") {
    LevyCharacteristics c1{0.5, 1.0, JumpMeasureSpec::zero(), +1};
    LevyCharacteristics c2{-0.25, 0.5, JumpMeasureSpec::zero(), +1};
    std::vector<double> s1, s2;
    for (std::uint64_t s = 0; s < 4000; ++s) {
        const auto p = simulate_characteristics_pair(c1, c2, 0.0, 4.0, 0.02, 3, s);
        s1.push_back(p.values1.back() / 4.0);
        s2.push_back(p.values2.back() / 4.0);
    }
    const auto m1 = testutil::mean_var(s1), m2 = testutil::mean_var(s2);
    CHECK(std::abs(m1.mean - 0.5) < 3 * m1.se);
    CHECK(std::abs(m2.mean + 0.25) < 3 * m2.se);
}

TEST_CASE("csv export marks jump rows") {
    const auto spec = JumpMeasureSpec::exponential(2.0, 1.0);
    const SamplePath p = simulate_compound_poisson(spec, 5.0, 9);
    const std::string csv = to_csv(p);
    CHECK(csv.rfind("time,value,is_jump\n", 0) == 0);
    std::size_t ones = 0;
    for (std::size_t pos = 0; (pos = csv.find(",1\n", pos)) != std::string::npos; ++pos) ++ones;
    CHECK(ones == p.jump_indices.size());
}
