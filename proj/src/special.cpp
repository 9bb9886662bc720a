#include "trimlevy/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace trimlevy {

namespace {

// Series representation, converges fast for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), x >= a + 1 (modified Lentz).
double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double lower_reg_gamma(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("lower_reg_gamma: bad arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

double upper_reg_gamma(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("upper_reg_gamma: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

double inv_lower_reg_gamma(double a, double p) {
    if (!(a > 0.0) || p < 0.0 || p > 1.0)
        throw std::invalid_argument("inv_lower_reg_gamma: bad arguments");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    double lo = 0.0;
    double hi = a + 1.0;
    while (lower_reg_gamma(a, hi) < p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (lower_reg_gamma(a, mid) < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

double exp_integral_e1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("exp_integral_e1: requires x > 0");
    if (x <= 1.0) {
        // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
        const double euler = 0.57721566490153286060651209;
        double sum = 0.0;
        double term = 1.0;
        for (int k = 1; k < 60; ++k) {
            term *= -x / k;
            double add = -term / k;
            sum += add;
            if (std::fabs(add) < 1e-17 * (std::fabs(sum) + 1.0)) break;
        }
        return -euler - std::log(x) + sum;
    }
    // Continued fraction e^{-x}/(x+1-1/(x+3-4/(x+5-...))) via Lentz.
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 300; ++i) {
        double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x);
}

double ln_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double kolmogorov_q(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 1.18) {
        // Jacobi-theta form, accurate for small x.
        double y = std::exp(-1.23370055013616983 / (x * x));  // exp(-pi^2/(8x^2))
        double q = 2.50662827463100050 / x * (y + std::pow(y, 9) + std::pow(y, 25));
        return 1.0 - q;
    }
    double u = std::exp(-2.0 * x * x);
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 100; ++k) {
        double term = sign * std::pow(u, k * k);
        sum += term;
        if (std::fabs(term) < 1e-17) break;
        sign = -sign;
    }
    return 2.0 * sum;
}

double kolmogorov_q_inv(double q) {
    if (!(q > 0.0) || !(q < 1.0)) throw std::invalid_argument("kolmogorov_q_inv: q in (0,1)");
    double lo = 1e-3, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (kolmogorov_q(mid) > q)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace trimlevy
