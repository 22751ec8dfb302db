#include "levyht/thresholds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "levyht/errors.hpp"

namespace levyht {

namespace {

void check_prob(double a, const char* name) {
    if (!(a > 0.0 && a < 1.0)) {
        std::ostringstream os;
        os << "thresholds: " << name << " = " << a << " must lie in (0,1)";
        throw parameter_error(os.str());
    }
}

}  // namespace

void ErrorSpec::validate() const {
    check_prob(alpha00, "alpha00");
    check_prob(alpha01, "alpha01");
    check_prob(alpha10, "alpha10");
    check_prob(alpha11, "alpha11");
    const double lhs = (1 - alpha00) * (1 - alpha11);
    const double rhs = (1 - alpha01) * (1 - alpha10);
    if (std::abs(lhs - rhs) > 1e-12) {
        std::ostringstream os;
        os << "thresholds: error constraint violated, (1-a00)(1-a11) = " << lhs
           << " but (1-a01)(1-a10) = " << rhs;
        throw parameter_error(os.str());
    }
}

void Rectangle::validate() const {
    if (!(l1 < 0 && 0 < r1 && l2 < 0 && 0 < r2))
        throw parameter_error("rectangle: requires l_k < 0 < r_k");
}

double induce_fourth_alpha(double a00, double a01, double a10) {
    check_prob(a00, "alpha00");
    check_prob(a01, "alpha01");
    check_prob(a10, "alpha10");
    const double product = (1 - a01) * (1 - a10) / (1 - a00);
    const double a11 = 1.0 - product;
    if (!(a11 > 0.0 && a11 < 1.0)) {
        std::ostringstream os;
        os << "thresholds: induced alpha11 infeasible, (1-a01)(1-a10)/(1-a00) = " << product
           << " does not lie in (0,1)";
        throw infeasible_error(os.str());
    }
    return a11;
}

std::pair<double, double> l1_feasible_interval(double a00, double a10) {
    check_prob(a00, "alpha00");
    check_prob(a10, "alpha10");
    if (!(a10 > a00))
        throw infeasible_error(
            "thresholds: l1 interval undefined for alpha10 <= alpha00 (open case in the "
            "threshold system)");
    return {std::log((a10 - a00) / (1 - a00)), std::log(a10 / (1 - a00))};
}

Rectangle solve_rectangle(const ErrorSpec& errors, double l1, CouplingVariant variant) {
    errors.validate();
    const double a00 = errors.alpha00, a01 = errors.alpha01, a10 = errors.alpha10;
    const double upper = std::log(a10 / (1 - a00));
    if (!(l1 < upper)) throw infeasible_error("thresholds: l1 must be < ln(a10/(1-a00))");
    if (a10 > a00) {
        const double lower = std::log((a10 - a00) / (1 - a00));
        if (!(l1 > lower))
            throw infeasible_error("thresholds: l1 must be > ln((a10-a00)/(1-a00))");
    }
    if (!(l1 < 0)) throw infeasible_error("thresholds: l1 must be negative");

    const double C1 = (1 - a10) / (1 - a00);
    const double arg1 = 1.0 - (1.0 - std::exp(l1)) / C1;
    if (!(arg1 > 0))
        throw infeasible_error("thresholds: r1 logarithm argument nonpositive (l1 too negative)");
    const double r1 = -std::log(arg1);

    // coupled equation: D(r2) = C1 * e^{-r1}; D is strictly increasing in r2
    const double target = C1 * std::exp(-r1);
    auto D = [&](double r2) {
        const double er = std::exp(r2);
        const double denom =
            variant == CouplingVariant::Printed ? (1 - a01) + (1 - a00 * er)
                                                : (1 - a01) + (1 - a00) * er;
        if (denom <= 0) return std::numeric_limits<double>::infinity();
        return er / denom - 1.0;
    };

    double lo = 1e-8, hi = 50.0;
    if (variant == CouplingVariant::Printed) {
        const double pole = std::log((2 - a01) / a00);
        hi = std::min(hi, pole * (1 - 1e-12));
        int guard = 0;
        while (D(hi) < target && guard++ < 200) hi = pole - 0.5 * (pole - hi);
    } else {
        int guard = 0;
        while (D(hi) < target && hi < 1e4 && guard++ < 20) hi *= 2.0;
    }
    if (D(lo) > target || D(hi) < target)
        throw infeasible_error("thresholds: no r2 bracket for the coupled equation");
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (D(mid) < target ? lo : hi) = mid;
    }
    const double r2 = 0.5 * (lo + hi);

    const double C2p = (1 - a01) / (1 - a00);
    const double arg2 = 1.0 - C2p * (1.0 - std::exp(-r2));
    if (!(arg2 > 0)) throw infeasible_error("thresholds: l2 logarithm argument nonpositive");
    const double l2 = std::log(arg2);

    Rectangle rect{l1, r1, l2, r2};
    rect.validate();
    return rect;
}

}  // namespace levyht
