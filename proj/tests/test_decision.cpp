#include <doctest.h>

#include <cmath>

#include "levyht/decision.hpp"
#include "test_util.hpp"

using namespace levyht;

namespace {

SamplePath2D make_linear_pair(double slope1, double slope2, double horizon, double dt) {
    SamplePath2D p;
    p.dt = dt;
    for (double t = 0.0; t <= horizon + 1e-12; t += dt) {
        p.times.push_back(t);
        p.values1.push_back(slope1 * t);
        p.values2.push_back(slope2 * t);
    }
    return p;
}

}  // namespace

TEST_CASE("run_decision: deterministic linear crossings") {
    const Rectangle rect{-1, 1, -1, 1};
    const auto up_up = run_decision(make_linear_pair(1.0, 1.0, 2.0, 0.01), rect);
    CHECK(up_up.decided);
    CHECK(up_up.delta().label() == "11");
    CHECK(up_up.tau1 == doctest::Approx(1.0).epsilon(0.02));
    CHECK(up_up.tau == doctest::Approx(std::max(up_up.tau1, up_up.tau2)).epsilon(1e-14));

    const auto down_up = run_decision(make_linear_pair(-1.0, 1.0, 2.0, 0.01), rect);
    CHECK(down_up.delta().label() == "01");
    CHECK(down_up.side1 == ExitSide::Left);
    CHECK(down_up.side2 == ExitSide::Right);
}

TEST_CASE("run_decision: horizon without exit yields the no-decision marker") {
    const Rectangle rect{-1, 1, -1, 1};
    const auto flat = run_decision(make_linear_pair(0.0, 1.0, 2.0, 0.01), rect);
    CHECK_FALSE(flat.decided);
    CHECK(flat.side1 == ExitSide::None);
}

TEST_CASE("run_decision: starting outside the rectangle is a precondition error") {
    SamplePath2D p = make_linear_pair(1.0, 1.0, 1.0, 0.01);
    p.values1[0] = 2.0;
    CHECK_THROWS_AS(run_decision(p, Rectangle{-1, 1, -1, 1}), parameter_error);
}

TEST_CASE("run_decision: delta digit k depends only on coordinate k") {
    const Rectangle rect{-1, 1, -1, 1};
    SamplePath2D p = make_linear_pair(1.0, -0.5, 3.0, 0.01);
    const auto d = run_decision(p, rect);
    std::swap(p.values1, p.values2);
    const auto swapped = run_decision(p, rect);
    CHECK(d.delta().i == swapped.delta().j);
    CHECK(d.delta().j == swapped.delta().i);
    CHECK(d.tau1 == swapped.tau2);
}

TEST_CASE("exit probability oracle: closed forms") {
    CHECK(exit_probability_oracle_1d(0.0, 1.0, -2.0, 1.0) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    // drift-test LLR under the signal world: theta = 1
    CHECK(exit_probability_oracle_1d(0.5, 1.0, -1.0, 1.0) ==
          doctest::Approx(0.73105857863000488).epsilon(1e-12));
    CHECK(exit_probability_oracle_1d(-0.5, 1.0, -1.0, 1.0) ==
          doctest::Approx(0.26894142136999512).epsilon(1e-12));
    CHECK(exit_probability_oracle_1d(1.0, 0.0, -1.0, 1.0) == 1.0);
    CHECK(exit_probability_oracle_1d(-1.0, 0.0, -1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(exit_probability_oracle_1d(0.0, 0.0, -1.0, 1.0), parameter_error);
}

TEST_CASE("monte carlo: degenerate coordinate triggers the horizon diagnostic") {
    DriftTestPair tp;
    tp.c1 = {1e-6, 1.0};  // effectively frozen LLR
    tp.c2 = {1.0, 1.0};
    McOptions opt;
    opt.n_paths = 200;
    opt.horizon = 50.0;
    opt.seed = 5;
    CHECK_THROWS_AS(
        monte_carlo_operating_stats(WorldIndex{0, 0}, tp, Rectangle{-1, 1, -1, 1}, opt),
        numerical_error);
}

TEST_CASE("monte carlo: n_paths precondition") {
    DriftTestPair tp;
    McOptions opt;
    opt.n_paths = 10;
    CHECK_THROWS_AS(
        monte_carlo_operating_stats(WorldIndex{0, 0}, tp, Rectangle{-1, 1, -1, 1}, opt),
        parameter_error);
}

TEST_CASE("monte carlo results are independent of the thread count") {
    DriftTestPair tp;
    tp.c1 = {1.0, 1.0};
    tp.c2 = {1.0, 1.0};
    McOptions opt;
    opt.n_paths = 2000;
    opt.seed = 31;
    opt.threads = 1;
    const auto a = monte_carlo_operating_stats(WorldIndex{1, 1}, tp, Rectangle{-1, 1, -1, 1}, opt);
    opt.threads = 2;
    const auto b = monte_carlo_operating_stats(WorldIndex{1, 1}, tp, Rectangle{-1, 1, -1, 1}, opt);
    CHECK(a.alpha_hat == b.alpha_hat);
    CHECK(a.mean_tau == b.mean_tau);
    CHECK(a.gap == b.gap);
}

TEST_CASE("first_exit_1d matches the scale-function oracle") {
    LevyCharacteristics c{0.5, 1.0, JumpMeasureSpec::zero(), +1};
    int right = 0;
    const int n = 4000;
    for (int s = 0; s < n; ++s) {
        const auto e = first_exit_1d(c, -1.0, 1.0, 1e-4, 200.0, 71, static_cast<std::uint64_t>(s));
        REQUIRE(e.side != ExitSide::None);
        if (e.side == ExitSide::Right) ++right;
    }
    const double p = static_cast<double>(right) / n;
    const double target = 0.73105857863000488;
    CHECK(std::abs(p - target) < 3 * std::sqrt(target * (1 - target) / n) + 0.003);
}

TEST_CASE("exit times of the two coordinates are uncorrelated when rho = 0") {
    LevyCharacteristics c{-0.5, 1.0, JumpMeasureSpec::zero(), +1};
    std::vector<double> t1, t2;
    const int n = 10000;
    for (int s = 0; s < n; ++s) {
        t1.push_back(first_exit_1d(c, -1, 1, 5e-4, 500.0, 3, 2 * s).tau);
        t2.push_back(first_exit_1d(c, -1, 1, 5e-4, 500.0, 3, 2 * s + 1).tau);
    }
    CHECK(std::abs(testutil::pearson(t1, t2)) < 0.05);
}
