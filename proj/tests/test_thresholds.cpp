#include <doctest.h>

#include <cmath>

#include "levyht/errors.hpp"
#include "levyht/thresholds.hpp"

using namespace levyht;

TEST_CASE("induce_fourth_alpha: symmetric and asymmetric cases") {
    CHECK(induce_fourth_alpha(0.05, 0.05, 0.05) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(induce_fourth_alpha(0.05, 0.10, 0.10) ==
          doctest::Approx(0.14736842105263158).epsilon(1e-12));
    CHECK_THROWS_AS(induce_fourth_alpha(0.10, 0.05, 0.05), infeasible_error);
    CHECK_THROWS_AS(induce_fourth_alpha(0.0, 0.05, 0.05), parameter_error);
}

TEST_CASE("induced alpha satisfies the product constraint exactly") {
    const double a00 = 0.03, a01 = 0.07, a10 = 0.11;
    const double a11 = induce_fourth_alpha(a00, a01, a10);
    CHECK(std::abs((1 - a00) * (1 - a11) - (1 - a01) * (1 - a10)) < 1e-12);
    const ErrorSpec spec{a00, a01, a10, a11};
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("l1 feasible interval: frozen endpoints") {
    const auto [lo, hi] = l1_feasible_interval(0.05, 0.10);
    CHECK(lo == doctest::Approx(-2.9444389791664405).epsilon(1e-12));
    CHECK(hi == doctest::Approx(-2.2512917986064952).epsilon(1e-12));
    CHECK(lo < hi);
}

TEST_CASE("l1 feasible interval: width tends to ln 2 when a10 = 2 a00") {
    for (double eps : {1e-3, 1e-6, 1e-9}) {
        const auto [lo, hi] = l1_feasible_interval(eps, 2 * eps);
        CHECK(hi - lo == doctest::Approx(std::log(2.0)).epsilon(1e-9));
        CHECK(hi < -1.0);
    }
}

TEST_CASE("l1 feasible interval: upper endpoint round-trips") {
    const auto [lo, hi] = l1_feasible_interval(0.02, 0.09);
    (void)lo;
    CHECK(std::exp(hi) == doctest::Approx(0.09 / 0.98).epsilon(1e-15));
    CHECK_THROWS_AS(l1_feasible_interval(0.10, 0.10), infeasible_error);
}

TEST_CASE("solve_rectangle: symmetric alphas reduce r1 to -l1") {
    const ErrorSpec errs{0.05, 0.05, 0.05, 0.05};
    for (double l1 : {-3.2, -4.0, -5.5}) {
        const Rectangle r = solve_rectangle(errs, l1);
        CHECK(r.r1 == doctest::Approx(-l1).epsilon(1e-12));
        CHECK(r.l2 == doctest::Approx(-r.r2).epsilon(1e-12));
    }
}

TEST_CASE("solve_rectangle: frozen r1 for the worked example") {
    const double a11 = induce_fourth_alpha(0.05, 0.05, 0.10);
    const ErrorSpec errs{0.05, 0.05, 0.10, a11};
    const Rectangle r = solve_rectangle(errs, -2.5);
    CHECK(r.r1 == doctest::Approx(3.4708780363068748).epsilon(1e-10));
}

TEST_CASE("solve_rectangle: all four printed equations round-trip") {
    const double a00 = 0.04, a01 = 0.06, a10 = 0.09;
    const ErrorSpec errs{a00, a01, a10, induce_fourth_alpha(a00, a01, a10)};
    for (const auto variant : {CouplingVariant::Printed, CouplingVariant::Corrected}) {
        const auto [lo, hi] = l1_feasible_interval(a00, a10);
        const double l1 = 0.5 * (lo + hi);
        const Rectangle r = solve_rectangle(errs, l1, variant);
        // eq for r1
        const double C1 = (1 - a10) / (1 - a00);
        CHECK(r.r1 == doctest::Approx(-std::log(1 - (1 - std::exp(l1)) / C1)).epsilon(1e-10));
        // coupled equation
        const double er2 = std::exp(r.r2);
        const double denom = variant == CouplingVariant::Printed
                                 ? (1 - a01) + (1 - a00 * er2)
                                 : (1 - a01) + (1 - a00) * er2;
        CHECK(std::exp(r.r1) == doctest::Approx(C1 / (er2 / denom - 1)).epsilon(1e-10));
        // eq for r2 from l2
        const double C2p = (1 - a01) / (1 - a00);
        CHECK(r.r2 ==
              doctest::Approx(-std::log(1 - (1 - std::exp(r.l2)) / C2p)).epsilon(1e-10));
        CHECK(l1 > lo);
        CHECK(l1 < hi);
    }
}

TEST_CASE("solve_rectangle: r1 strictly decreasing in l1") {
    const double a00 = 0.05, a01 = 0.05, a10 = 0.10;
    const ErrorSpec errs{a00, a01, a10, induce_fourth_alpha(a00, a01, a10)};
    const auto [lo, hi] = l1_feasible_interval(a00, a10);
    double prev_r1 = 1e300;
    for (int k = 1; k <= 8; ++k) {
        const double l1 = lo + (hi - lo) * k / 9.0;
        const Rectangle r = solve_rectangle(errs, l1);
        CHECK(r.r1 < prev_r1);
        prev_r1 = r.r1;
    }
}

TEST_CASE("solve_rectangle: corrected variant has square thresholds as alphas vanish") {
    // along the constraint surface a00 = s, a10 = a01 = 2s
    double prev_ratio = 1e300;
    double prev_r1 = 0.0;
    for (double s : {1e-2, 1e-3, 1e-4}) {
        const ErrorSpec errs{s, 2 * s, 2 * s, induce_fourth_alpha(s, 2 * s, 2 * s)};
        const auto [lo, hi] = l1_feasible_interval(s, 2 * s);
        (void)lo;
        const double l1 = hi - 0.5 * std::log(2.0);
        const Rectangle r = solve_rectangle(errs, l1, CouplingVariant::Corrected);
        CHECK(r.r1 > prev_r1);  // r grows without bound
        const double ratio = std::abs(r.l2 + r.r2) / r.r2;
        CHECK(ratio < prev_ratio);  // |l + r| / r -> 0
        prev_ratio = ratio;
        prev_r1 = r.r1;
    }
    CHECK(prev_ratio < 0.15);
}

TEST_CASE("solve_rectangle: infeasible l1 rejected") {
    const ErrorSpec errs{0.05, 0.05, 0.10, induce_fourth_alpha(0.05, 0.05, 0.10)};
    CHECK_THROWS_AS(solve_rectangle(errs, -3.5), infeasible_error);  // below the interval
    CHECK_THROWS_AS(solve_rectangle(errs, -2.0), infeasible_error);  // above the interval
}

TEST_CASE("error spec constraint violation is rejected") {
    ErrorSpec bad{0.05, 0.06, 0.10, 0.20};
    CHECK_THROWS_AS(bad.validate(), parameter_error);
    Rectangle r{-1, 1, 0.5, 1};
    CHECK_THROWS_AS(r.validate(), parameter_error);
}
