#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace trimlevy {

namespace detail {

// Gauss 7 / Kronrod 15 abscissae and weights on [-1,1].
inline constexpr double kGk15Nodes[8] = {
    0.000000000000000000, 0.207784955007898468, 0.405845151377397167,
    0.586087235467691130, 0.741531185599394440, 0.864864423359769073,
    0.949107912342758525, 0.991455371120812639};
inline constexpr double kGk15WeightsK[8] = {
    0.209482141084727828, 0.204432940075298892, 0.190350578064785410,
    0.169004726639267903, 0.140653259715525919, 0.104790010322250184,
    0.063092092629978553, 0.022935322010529225};
inline constexpr double kGk15WeightsG[4] = {
    0.417959183673469388, 0.381830050505118945, 0.279705391489276668,
    0.129484966168869693};

template <typename T, typename F>
void gk15_panel(const F& f, double a, double b, T& kronrod, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    T f0 = f(mid);
    T resk = kGk15WeightsK[0] * f0;
    T resg = kGk15WeightsG[0] * f0;
    for (int i = 1; i < 8; ++i) {
        double dx = half * kGk15Nodes[i];
        T fs = f(mid + dx) + f(mid - dx);
        resk += kGk15WeightsK[i] * fs;
        if (i % 2 == 0) resg += kGk15WeightsG[i / 2] * fs;
    }
    kronrod = resk * half;
    err = std::abs((resk - resg) * half);
    err = std::pow(200.0 * err, 1.5);
    if (!(err == err)) err = std::abs(kronrod);
}

}  // namespace detail

template <typename T>
struct QuadResult {
    T value;
    double error;
};

// Adaptive Gauss-Kronrod on a finite interval, absolute tolerance.
// Bisects the worst panel first (simple stack-based refinement).
template <typename T, typename F>
QuadResult<T> adaptive_gk(const F& f, double a, double b, double abstol = 1e-10,
                          int max_panels = 4000) {
    struct Panel {
        double a, b, err;
        T val;
    };
    std::vector<Panel> panels;
    T v;
    double e;
    detail::gk15_panel<T>(f, a, b, v, e);
    panels.push_back({a, b, e, v});
    double total_err = e;
    while (total_err > abstol && static_cast<int>(panels.size()) < max_panels) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].err > panels[worst].err) worst = i;
        Panel p = panels[worst];
        if (p.b - p.a < 1e-15 * (std::fabs(p.a) + std::fabs(p.b) + 1.0)) break;
        double mid = 0.5 * (p.a + p.b);
        Panel left, right;
        left.a = p.a;
        left.b = mid;
        right.a = mid;
        right.b = p.b;
        detail::gk15_panel<T>(f, left.a, left.b, left.val, left.err);
        detail::gk15_panel<T>(f, right.a, right.b, right.val, right.err);
        total_err += left.err + right.err - p.err;
        panels[worst] = left;
        panels.push_back(right);
    }
    T sum = panels[0].val;
    for (std::size_t i = 1; i < panels.size(); ++i) sum += panels[i].val;
    return {sum, total_err};
}

// Gauss-Legendre nodes/weights on [0,1]; results are cached per order.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre_01(int n);

// T(theta, c) = integral_c^inf e^{i theta x} alpha x^{-alpha-1} dx for c > 0,
// evaluated by rotating the contour to kill the oscillation.  At theta = 0
// this is c^{-alpha}.
std::complex<double> stable_tail_cf(double alpha, double theta, double c,
                                    double abstol = 1e-11);

}  // namespace trimlevy
