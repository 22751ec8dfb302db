#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <vector>

#include "levyht/errors.hpp"

namespace levyht {

// Tolerances and panel policy for the coefficient and generator integrals.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    int max_panels = 4000;
    bool tail_substitution = true;  // map (1,inf) -> (0,1) via x = 1/u

    void validate() const {
        if (!(abs_tol > 0)) throw parameter_error("QuadratureSpec: abs_tol must be > 0");
        if (max_panels < 2) throw parameter_error("QuadratureSpec: max_panels must be >= 2");
    }
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1,1].
inline constexpr double kGkNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkResult {
    double value;
    double error;
};

template <typename F>
GkResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kGkNodes[i]);
        fv[14 - i] = f(c + h * kGkNodes[i]);
    }
    fv[7] = f(c);
    double kron = kKronrodW[7] * fv[7];
    double gauss = kGaussW[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kron += kKronrodW[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gauss += kGaussW[i / 2] * (fv[i] + fv[14 - i]);
    }
    kron *= h;
    gauss *= h;
    double err = std::abs(kron - gauss);
    // standard sharpened estimate
    err = std::pow(200.0 * err, 1.5);
    if (err > std::abs(kron - gauss)) err = std::abs(kron - gauss);
    if (err < 1e-300) err = 0.0;
    return {kron, err == 0.0 ? std::abs(kron) * 1e-16 : err};
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace detail

// Adaptive Gauss-Kronrod on a finite interval, absolute tolerance.
template <typename F>
double integrate(const F& f, double a, double b, const QuadratureSpec& spec = {}) {
    if (a == b) return 0.0;
    auto first = detail::gk15(f, a, b);
    std::priority_queue<detail::Panel> panels;
    panels.push({a, b, first.value, first.error});
    double total = first.value;
    double total_err = first.error;
    int n = 1;
    while (total_err > spec.abs_tol && n < spec.max_panels) {
        detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            panels.push(worst);  // interval at floating-point resolution
            break;
        }
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push({worst.a, mid, left.value, left.error});
        panels.push({mid, worst.b, right.value, right.error});
        ++n;
    }
    if (!std::isfinite(total)) throw numerical_error("integrate: divergent or non-finite integral");
    return total;
}

// Integral over (0, inf): adaptive panels on (0,1) plus the tail mapped
// through x = 1/u, i.e. int_1^inf f = int_0^1 f(1/u)/u^2 du.
template <typename F>
double integrate_0_inf(const F& f, const QuadratureSpec& spec = {}) {
    QuadratureSpec half = spec;
    half.abs_tol = 0.5 * spec.abs_tol;
    const double head = integrate(f, 0.0, 1.0, half);
    double tail;
    if (spec.tail_substitution) {
        tail = integrate([&f](double u) { return f(1.0 / u) / (u * u); }, 0.0, 1.0, half);
    } else {
        // fallback: expanding panels until the contribution is negligible
        tail = 0.0;
        double lo = 1.0;
        for (int k = 0; k < 64; ++k) {
            const double hi = lo * 2.0;
            const double piece = integrate(f, lo, hi, half);
            tail += piece;
            if (std::abs(piece) < 0.25 * half.abs_tol && k > 4) break;
            lo = hi;
        }
    }
    return head + tail;
}

// Fixed node/weight set for integrating smooth functions against a weight
// w(x) on (0, inf). The panelization is refined against w alone, so two
// integrals against the same FixedNodes object share identical nodes and
// the map f -> sum w_i f(x_i) is exactly linear.
struct FixedNodes {
    std::vector<double> x;
    std::vector<double> w;  // includes the weight-function value

    template <typename F>
    double apply(const F& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
        return s;
    }
};

// Build fixed nodes for weight w on (0, x_max), subdividing until the
// GK error of each panel's weight mass is below tol (absolute, summed).
template <typename W>
FixedNodes build_fixed_nodes(const W& weight, double x_max, const QuadratureSpec& spec = {}) {
    struct Seg {
        double a, b, err;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    std::priority_queue<Seg> q;
    auto seed = detail::gk15(weight, 0.0, x_max);
    q.push({0.0, x_max, seed.error});
    double total_err = seed.error;
    int n = 1;
    while (total_err > spec.abs_tol && n < spec.max_panels) {
        Seg worst = q.top();
        q.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            q.push(worst);
            break;
        }
        auto left = detail::gk15(weight, worst.a, mid);
        auto right = detail::gk15(weight, mid, worst.b);
        total_err += left.error + right.error - worst.err;
        q.push({worst.a, mid, left.error});
        q.push({mid, worst.b, right.error});
        ++n;
    }
    std::vector<Seg> segs;
    segs.reserve(static_cast<std::size_t>(n));
    while (!q.empty()) {
        segs.push_back(q.top());
        q.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Seg& l, const Seg& r) { return l.a < r.a; });
    FixedNodes nodes;
    nodes.x.reserve(segs.size() * 15);
    nodes.w.reserve(segs.size() * 15);
    for (const Seg& s : segs) {
        const double c = 0.5 * (s.a + s.b);
        const double h = 0.5 * (s.b - s.a);
        for (int i = 0; i < 7; ++i) {
            nodes.x.push_back(c - h * detail::kGkNodes[i]);
            nodes.w.push_back(h * detail::kKronrodW[i] * weight(nodes.x.back()));
        }
        nodes.x.push_back(c);
        nodes.w.push_back(h * detail::kKronrodW[7] * weight(c));
        for (int i = 6; i >= 0; --i) {
            nodes.x.push_back(c + h * detail::kGkNodes[i]);
            nodes.w.push_back(h * detail::kKronrodW[i] * weight(nodes.x.back()));
        }
    }
    return nodes;
}

}  // namespace levyht
