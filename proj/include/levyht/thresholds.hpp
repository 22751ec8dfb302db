#pragma once

#include <utility>

namespace levyht {

// Type I error targets for the four worlds. Only three are free; the
// fourth is induced by the product constraint
// (1-a00)(1-a11) = (1-a01)(1-a10), enforced to 1e-12 at construction.
struct ErrorSpec {
    double alpha00 = 0.05;
    double alpha01 = 0.05;
    double alpha10 = 0.05;
    double alpha11 = 0.05;

    void validate() const;
};

struct Rectangle {
    double l1 = -1.0;
    double r1 = 1.0;
    double l2 = -1.0;
    double r2 = 1.0;

    void validate() const;  // l_k < 0 < r_k
    bool contains(double x, double y) const {
        return x > l1 && x < r1 && y > l2 && y < r2;
    }
};

// The coupled r1-r2 equation is kept in two forms: exactly as printed
// (denominator (1-a01) + (1 - a00 e^{r2}), a suspected typo) and with the
// alternate parenthesization (1-a01) + (1-a00) e^{r2}.
enum class CouplingVariant { Printed, Corrected };

// alpha11 induced by the product constraint from the other three.
double induce_fourth_alpha(double a00, double a01, double a10);

// Open interval of admissible l1: ( ln((a10-a00)/(1-a00)), ln(a10/(1-a00)) ).
// Requires a10 > a00; the paper leaves a10 <= a00 open.
std::pair<double, double> l1_feasible_interval(double a00, double a10);

// Solve the threshold system for a rectangle given l1: r1 in closed form,
// r2 by bisection of the coupled equation (tolerance 1e-12), l2 by
// inverting the fourth equation.
Rectangle solve_rectangle(const ErrorSpec& errors, double l1,
                          CouplingVariant variant = CouplingVariant::Printed);

}  // namespace levyht
