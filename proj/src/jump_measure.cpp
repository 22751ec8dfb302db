#include "levyht/jump_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levyht/errors.hpp"

namespace levyht {

JumpMeasureSpec JumpMeasureSpec::zero() {
    JumpMeasureSpec s;
    s.kind_ = JumpDensityKind::Zero;
    return s;
}

JumpMeasureSpec JumpMeasureSpec::exponential(double intensity, double scale, double tilt_a) {
    if (intensity < 0) throw parameter_error("jump measure: intensity must be >= 0");
    if (!(scale > 0)) throw parameter_error("jump measure: scale must be > 0");
    if (tilt_a < 0) throw parameter_error("jump measure: tilt coefficient must be >= 0");
    if (intensity == 0) return zero();
    JumpMeasureSpec s;
    s.kind_ = JumpDensityKind::Exponential;
    s.intensity_ = intensity;
    s.scale_ = scale;
    s.tilt_a_ = tilt_a;
    s.x_max_ = std::numeric_limits<double>::infinity();
    s.base_mass_ = intensity;
    s.total_mass_ = intensity * (1.0 + tilt_a * scale);
    // int x (1+ax) nu(dx) = lam (eta + 2 a eta^2)
    s.mean_jump_ = intensity * (scale + 2.0 * tilt_a * scale * scale) / s.total_mass_;
    return s;
}

JumpMeasureSpec JumpMeasureSpec::tabulated(std::vector<double> xs, std::vector<double> density,
                                           double tilt_a) {
    if (xs.size() != density.size() || xs.size() < 2)
        throw parameter_error("jump measure: tabulated density needs >= 2 matching knots");
    if (tilt_a < 0) throw parameter_error("jump measure: tilt coefficient must be >= 0");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0 && !(xs[i] > xs[i - 1]))
            throw parameter_error("jump measure: tabulated knots must be strictly increasing");
        if (xs[i] < 0) throw parameter_error("jump measure: tabulated support must lie in [0, inf)");
        if (!(density[i] >= 0) || !std::isfinite(density[i]))
            throw parameter_error("jump measure: tabulated density must be finite and nonnegative");
    }
    JumpMeasureSpec s;
    s.kind_ = JumpDensityKind::Tabulated;
    s.tilt_a_ = tilt_a;
    s.x_max_ = xs.back();
    // refine the user grid so the tilted density is well represented by a
    // piecewise-linear table
    auto base = [&xs, &density](double x) {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.begin() || it == xs.end()) return 0.0;
        const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
        const double t = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
        return density[hi - 1] * (1 - t) + density[hi] * t;
    };
    const int per_seg = 8;
    s.tab_x_.reserve(xs.size() * per_seg);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        for (int j = 0; j < per_seg; ++j)
            s.tab_x_.push_back(xs[i] + (xs[i + 1] - xs[i]) * j / per_seg);
    s.tab_x_.push_back(xs.back());
    s.tab_d_.resize(s.tab_x_.size());
    for (std::size_t i = 0; i < s.tab_x_.size(); ++i)
        s.tab_d_[i] = (1.0 + tilt_a * s.tab_x_[i]) * base(s.tab_x_[i]);
    s.validate_and_finalize({});
    return s;
}

JumpMeasureSpec JumpMeasureSpec::from_density(std::function<double(double)> density, double x_max,
                                              const QuadratureSpec& quad) {
    if (!(x_max > 0)) throw parameter_error("jump measure: x_max must be > 0");
    JumpMeasureSpec s;
    s.kind_ = JumpDensityKind::Callable;
    s.fn_ = std::move(density);
    s.x_max_ = x_max;
    const int knots = 16385;
    s.tab_x_.resize(knots);
    s.tab_d_.resize(knots);
    for (int i = 0; i < knots; ++i) {
        s.tab_x_[i] = x_max * i / (knots - 1);
        const double d = s.fn_(s.tab_x_[i]);
        if (!(d >= 0) || !std::isfinite(d))
            throw parameter_error("jump measure: density must be finite and nonnegative");
        s.tab_d_[i] = d;
    }
    s.validate_and_finalize(quad);
    return s;
}

void JumpMeasureSpec::validate_and_finalize(const QuadratureSpec& quad) {
    tab_cum_.assign(tab_x_.size(), 0.0);
    for (std::size_t i = 1; i < tab_x_.size(); ++i)
        tab_cum_[i] = tab_cum_[i - 1] +
                      0.5 * (tab_d_[i] + tab_d_[i - 1]) * (tab_x_[i] - tab_x_[i - 1]);
    if (kind_ == JumpDensityKind::Callable) {
        total_mass_ = integrate_0_inf(
            [this](double x) { return x < x_max_ ? std::max(fn_(x), 0.0) : 0.0; }, quad);
        const double m1 = integrate_0_inf(
            [this](double x) { return x < x_max_ ? x * std::max(fn_(x), 0.0) : 0.0; }, quad);
        base_mass_ = total_mass_;
        mean_jump_ = total_mass_ > 0 ? m1 / total_mass_ : 0.0;
    } else {
        total_mass_ = tab_cum_.back();
        double m1 = 0.0, b0 = 0.0;
        for (std::size_t i = 1; i < tab_x_.size(); ++i) {
            const double h = tab_x_[i] - tab_x_[i - 1];
            m1 += 0.5 * (tab_d_[i] * tab_x_[i] + tab_d_[i - 1] * tab_x_[i - 1]) * h;
            const double u0 = tab_d_[i - 1] / (1.0 + tilt_a_ * tab_x_[i - 1]);
            const double u1 = tab_d_[i] / (1.0 + tilt_a_ * tab_x_[i]);
            b0 += 0.5 * (u0 + u1) * h;
        }
        base_mass_ = b0;
        mean_jump_ = total_mass_ > 0 ? m1 / total_mass_ : 0.0;
    }
    if (!std::isfinite(total_mass_))
        throw parameter_error("jump measure: total (tilted) mass must be finite");
    if (total_mass_ == 0.0) kind_ = JumpDensityKind::Zero;
}

bool JumpMeasureSpec::is_zero() const { return kind_ == JumpDensityKind::Zero; }

double JumpMeasureSpec::base_density(double x) const {
    switch (kind_) {
        case JumpDensityKind::Zero:
            return 0.0;
        case JumpDensityKind::Exponential:
            return x > 0 ? intensity_ * std::exp(-x / scale_) / scale_ : 0.0;
        case JumpDensityKind::Callable:
            return density(x);  // callable densities carry no separate tilt
        case JumpDensityKind::Tabulated:
            return x > 0 ? density(x) / (1.0 + tilt_a_ * x) : 0.0;
    }
    return 0.0;
}

double JumpMeasureSpec::density(double x) const {
    if (x <= 0) return 0.0;
    switch (kind_) {
        case JumpDensityKind::Zero:
            return 0.0;
        case JumpDensityKind::Exponential:
            return (1.0 + tilt_a_ * x) * intensity_ * std::exp(-x / scale_) / scale_;
        case JumpDensityKind::Callable:
            return x < x_max_ ? std::max(fn_(x), 0.0) : 0.0;
        case JumpDensityKind::Tabulated: {
            auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
            if (it == tab_x_.begin() || it == tab_x_.end()) return 0.0;
            const std::size_t hi = static_cast<std::size_t>(it - tab_x_.begin());
            const double t = (x - tab_x_[hi - 1]) / (tab_x_[hi] - tab_x_[hi - 1]);
            return tab_d_[hi - 1] * (1 - t) + tab_d_[hi] * t;
        }
    }
    return 0.0;
}

double JumpMeasureSpec::integrate(const std::function<double(double)>& f, double abs_tol) const {
    QuadratureSpec quad;
    quad.abs_tol = abs_tol;
    switch (kind_) {
        case JumpDensityKind::Zero:
            return 0.0;
        case JumpDensityKind::Exponential:
        case JumpDensityKind::Callable:
            return integrate_0_inf([this, &f](double x) { return f(x) * density(x); }, quad);
        case JumpDensityKind::Tabulated:
            return levyht::integrate([this, &f](double x) { return f(x) * density(x); },
                                     tab_x_.front(), tab_x_.back(), quad);
    }
    return 0.0;
}

double JumpMeasureSpec::sample(RngStream& rng) const {
    switch (kind_) {
        case JumpDensityKind::Zero:
            throw parameter_error("jump measure: cannot sample from the zero measure");
        case JumpDensityKind::Exponential: {
            // (1+ax) e^{-x/eta} splits into Exp(eta) and Gamma(2, eta) parts
            const double w_exp = 1.0 / (1.0 + tilt_a_ * scale_);
            if (rng.uniform() < w_exp) return rng.exponential(scale_);
            return rng.exponential(scale_) + rng.exponential(scale_);
        }
        case JumpDensityKind::Tabulated:
        case JumpDensityKind::Callable: {
            const double target = rng.uniform() * total_mass_;
            auto it = std::upper_bound(tab_cum_.begin(), tab_cum_.end(), target);
            std::size_t hi = static_cast<std::size_t>(it - tab_cum_.begin());
            if (hi == 0) hi = 1;
            if (hi >= tab_cum_.size()) hi = tab_cum_.size() - 1;
            const double m = target - tab_cum_[hi - 1];
            const double h = tab_x_[hi] - tab_x_[hi - 1];
            const double d0 = tab_d_[hi - 1], d1 = tab_d_[hi];
            // invert the linear-density segment: m = d0 t + (d1-d0) t^2/(2h) * h ... in t in [0,1]
            const double a2 = 0.5 * (d1 - d0) * h;
            const double b1 = d0 * h;
            double t;
            if (std::abs(a2) < 1e-300) {
                t = b1 > 0 ? m / b1 : 0.5;
            } else {
                const double disc = std::max(b1 * b1 + 4.0 * a2 * m, 0.0);
                t = (-b1 + std::sqrt(disc)) / (2.0 * a2);
            }
            t = std::clamp(t, 0.0, 1.0);
            return tab_x_[hi - 1] + t * h;
        }
    }
    return 0.0;
}

std::string JumpMeasureSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case JumpDensityKind::Zero:
            os << "zero";
            break;
        case JumpDensityKind::Exponential:
            os << "exponential(intensity=" << intensity_ << ", scale=" << scale_
               << ", tilt=" << tilt_a_ << ")";
            break;
        case JumpDensityKind::Tabulated:
            os << "tabulated(" << tab_x_.size() << " knots, tilt=" << tilt_a_ << ")";
            break;
        case JumpDensityKind::Callable:
            os << "density(x_max=" << x_max_ << ", mass=" << total_mass_ << ")";
            break;
    }
    return os.str();
}

}  // namespace levyht
