#include "trimlevy/quadrature.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace trimlevy {

namespace {

GaussLegendre compute_gauss_legendre(int n) {
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    // Newton iteration on Legendre polynomials, standard recurrence.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        // Map from [-1,1] to [0,1].
        gl.nodes[i] = 0.5 * (1.0 - x);
        gl.weights[i] = 0.5 * w;
        gl.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        gl.weights[n - 1 - i] = 0.5 * w;
    }
    return gl;
}

}  // namespace

const GaussLegendre& gauss_legendre_01(int n) {
    static std::mutex mu;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

std::complex<double> stable_tail_cf(double alpha, double theta, double c, double abstol) {
    if (!(alpha > 0.0) || !(c > 0.0)) throw std::invalid_argument("stable_tail_cf: bad arguments");
    if (theta == 0.0) return std::pow(c, -alpha);
    if (theta < 0.0) return std::conj(stable_tail_cf(alpha, -theta, c, abstol));
    // Rotate x = c + i s:  i e^{i theta c} int_0^inf e^{-theta s} alpha (c+is)^{-alpha-1} ds.
    const std::complex<double> I(0.0, 1.0);
    auto integrand = [&](double s) {
        return std::exp(-theta * s) * alpha * std::pow(c + I * s, -alpha - 1.0);
    };
    // Choose an upper limit so the dropped tail is below tolerance:
    // |tail| <= alpha S^{-alpha-1} e^{-theta S} / theta.
    double S = std::max(c, 1.0 / theta);
    while (alpha * std::pow(S, -alpha - 1.0) * std::exp(-theta * S) / theta > 0.1 * abstol)
        S *= 2.0;
    auto inner = adaptive_gk<std::complex<double>>(integrand, 0.0, S, abstol);
    return I * std::exp(I * theta * c) * inner.value;
}

}  // namespace trimlevy
