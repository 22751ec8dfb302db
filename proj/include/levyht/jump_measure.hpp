#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levyht/quadrature.hpp"
#include "levyht/rng.hpp"

namespace levyht {

enum class JumpDensityKind { Zero, Exponential, Tabulated, Callable };

// A finite-activity Levy measure on (0, inf) with an optional linear tilt:
// the measure used everywhere is (1 + tilt_a * x) * nu(dx).
//
// Three base families:
//   Exponential  nu(dx) = intensity * exp(-x/scale)/scale dx
//   Tabulated    piecewise-linear density from user knots
//   Callable     arbitrary density (used for the log-transformed LLR
//                measures), sampled through an internal inverse-CDF table
//
// Immutable after construction; all derived quantities are precomputed, so
// instances can be shared freely across threads.
class JumpMeasureSpec {
public:
    static JumpMeasureSpec zero();
    static JumpMeasureSpec exponential(double intensity, double scale, double tilt_a = 0.0);
    static JumpMeasureSpec tabulated(std::vector<double> xs, std::vector<double> density,
                                     double tilt_a = 0.0);
    // density already includes any tilt; support truncated at x_max
    static JumpMeasureSpec from_density(std::function<double(double)> density, double x_max,
                                        const QuadratureSpec& quad = {});

    JumpDensityKind kind() const { return kind_; }
    bool is_zero() const;
    double tilt() const { return tilt_a_; }
    double intensity() const { return intensity_; }
    double scale() const { return scale_; }

    // tilted density (1 + a x) nu(x); zero outside (0, support_upper)
    double density(double x) const;
    double base_density(double x) const;

    double total_mass() const { return total_mass_; }  // int (1+ax) nu(dx)
    double base_mass() const { return base_mass_; }    // int nu(dx)
    double mean_jump() const { return mean_jump_; }    // int x (1+ax) nu(dx) / total mass
    double support_upper() const { return x_max_; }

    // int f(x) (1+ax) nu(dx) over (0, inf), adaptive to tol
    double integrate(const std::function<double(double)>& f, double abs_tol = 1e-10) const;

    // one jump size from the normalized tilted density
    double sample(RngStream& rng) const;

    std::string describe() const;

private:
    JumpMeasureSpec() = default;
    void build_table(const std::function<double(double)>& tilted_density, double x_max,
                     int knots);
    void validate_and_finalize(const QuadratureSpec& quad);

    JumpDensityKind kind_ = JumpDensityKind::Zero;
    double intensity_ = 0.0;
    double scale_ = 1.0;
    double tilt_a_ = 0.0;
    double x_max_ = 0.0;  // infinity represented by the exponential kind

    std::function<double(double)> fn_;  // callable kind only

    // sampling table (tabulated + callable kinds): piecewise-linear tilted
    // density with cumulative masses per knot
    std::vector<double> tab_x_;
    std::vector<double> tab_d_;
    std::vector<double> tab_cum_;

    double total_mass_ = 0.0;
    double base_mass_ = 0.0;
    double mean_jump_ = 0.0;
};

}  // namespace levyht
