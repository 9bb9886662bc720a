#include "trimlevy/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "trimlevy/quadrature.hpp"
#include "trimlevy/special.hpp"

namespace trimlevy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// e^{i theta x} - 1 - i theta x, stable for small theta*x.
std::complex<double> expm1_compensated(double theta, double x) {
    std::complex<double> z(0.0, theta * x);
    if (std::fabs(theta * x) < 1e-4) {
        // h = z^2/2 (1 + z/3 + z^2/12 + z^3/60)
        std::complex<double> z2 = z * z;
        return z2 * 0.5 * (1.0 + z / 3.0 + z2 / 12.0 + z2 * z / 60.0);
    }
    return std::exp(z) - 1.0 - z;
}

std::complex<double> expm1_i(double theta, double x) {
    std::complex<double> z(0.0, theta * x);
    if (std::fabs(theta * x) < 1e-6) return z * (1.0 + z * 0.5 * (1.0 + z / 3.0));
    return std::exp(z) - 1.0;
}

}  // namespace

void LevyModel::validate() const {
    if (kind != ModelKind::GammaSubordinator) {
        if (!(alpha > 0.0) || !(alpha < 2.0))
            throw std::invalid_argument("LevyModel: alpha must be in (0,2)");
    }
    if (!(a_plus > 0.0)) throw std::invalid_argument("LevyModel: a_plus must be positive");
    if (a_minus < 0.0) throw std::invalid_argument("LevyModel: a_minus must be nonnegative");
    if (std::fabs(a_plus + a_minus - 1.0) > 1e-12)
        throw std::invalid_argument("LevyModel: a_plus + a_minus must equal 1");
    if (sigma2 < 0.0) throw std::invalid_argument("LevyModel: sigma2 must be nonnegative");
    double prev = 0.0;
    for (const auto& a : atoms) {
        if (!(a.location > prev)) throw std::invalid_argument("LevyModel: atoms must be sorted ascending with positive locations");
        if (!(a.mass > 0.0)) throw std::invalid_argument("LevyModel: atom mass must be positive");
        prev = a.location;
    }
    if (!atoms.empty() && kind != ModelKind::AtomicStable)
        throw std::invalid_argument("LevyModel: atoms only supported on AtomicStable");
    if (drift.has_value()) {
        if (a_minus != 0.0) throw std::invalid_argument("LevyModel: subordinators have no negative jumps");
        if (sigma2 != 0.0) throw std::invalid_argument("LevyModel: subordinators have no Gaussian part");
        if (*drift < 0.0) throw std::invalid_argument("LevyModel: subordinator drift must be nonnegative");
        if (kind != ModelKind::GammaSubordinator && alpha >= 1.0)
            throw std::invalid_argument("LevyModel: subordinator requires alpha < 1");
    }
    if (truncation.has_value() && !(*truncation > 0.0))
        throw std::invalid_argument("LevyModel: truncation must be positive");
}

// Continuous tail shape with unit coefficient, no atoms/truncation.
static double tail_shape(ModelKind kind, double alpha, double x) {
    switch (kind) {
        case ModelKind::PureStable:
        case ModelKind::AtomicStable:
            return std::pow(x, -alpha);
        case ModelKind::TemperedStable:
            return std::pow(x, -alpha) * std::exp(-x);
        case ModelKind::GammaSubordinator:
            return exp_integral_e1(x);
    }
    return 0.0;
}

static double density_shape(ModelKind kind, double alpha, double x) {
    switch (kind) {
        case ModelKind::PureStable:
        case ModelKind::AtomicStable:
            return alpha * std::pow(x, -alpha - 1.0);
        case ModelKind::TemperedStable:
            return (alpha * std::pow(x, -alpha - 1.0) + std::pow(x, -alpha)) * std::exp(-x);
        case ModelKind::GammaSubordinator:
            return std::exp(-x) / x;
    }
    return 0.0;
}

double LevyModel::positive_tail(double x) const {
    if (!(x > 0.0)) throw std::domain_error("positive_tail: requires x > 0");
    if (truncation && x >= *truncation) return 0.0;
    double v = tail_shape(kind, alpha, x);
    for (const auto& a : atoms)
        if (a.location > x && (!truncation || a.location < *truncation)) v += a.mass;
    if (truncation) v -= positive_tail_left_full(*truncation);
    return std::max(v, 0.0);
}

double LevyModel::positive_tail_left(double x) const {
    if (!(x > 0.0)) throw std::domain_error("positive_tail_left: requires x > 0");
    if (truncation && x > *truncation) return 0.0;
    double v = tail_shape(kind, alpha, x);
    for (const auto& a : atoms)
        if (a.location >= x && (!truncation || a.location < *truncation)) v += a.mass;
    if (truncation) v -= positive_tail_left_full(*truncation);
    return std::max(v, 0.0);
}

double LevyModel::positive_tail_left_full(double x) const {
    double v = tail_shape(kind, alpha, x);
    for (const auto& a : atoms)
        if (a.location >= x) v += a.mass;
    return v;
}

double LevyModel::negative_tail(double x) const {
    if (!(x > 0.0)) throw std::domain_error("negative_tail: requires x > 0");
    double r = neg_ratio();
    if (r == 0.0) return 0.0;
    return r * tail_shape(kind, alpha, x);
}

double LevyModel::inverse_positive_tail(double y) const {
    if (!(y > 0.0)) throw std::domain_error("inverse_positive_tail: requires y > 0");
    // Atom plateaus first: the inverse is constant on [tail(a), tail(a-)).
    for (const auto& a : atoms) {
        if (truncation && a.location >= *truncation) continue;
        if (positive_tail(a.location) <= y && y < positive_tail_left(a.location))
            return a.location;
    }
    if ((kind == ModelKind::PureStable || kind == ModelKind::AtomicStable) && atoms.empty()) {
        double base = truncation ? positive_tail_left_full(*truncation) : 0.0;
        return std::pow(y + base, -1.0 / alpha);
    }
    // Monotone bisection on the right-continuous tail.
    double hi = 1.0;
    if (positive_tail(hi) > y) {
        while (positive_tail(hi) > y) {
            hi *= 2.0;
            if (hi > 1e300) return hi;
        }
    } else {
        double lo = hi;
        while (positive_tail(lo * 0.5) <= y) {
            lo *= 0.5;
            if (lo < 1e-300) return 0.0;
        }
        hi = lo;
    }
    double lo = hi * 0.5;
    // Invariant: tail(lo) > y >= tail(hi).
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (positive_tail(mid) > y)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * hi) break;
    }
    return hi;
}

double LevyModel::inverse_negative_tail(double y) const {
    if (!(y > 0.0)) throw std::domain_error("inverse_negative_tail: requires y > 0");
    double r = neg_ratio();
    if (r == 0.0) return 0.0;
    if (kind == ModelKind::PureStable || kind == ModelKind::AtomicStable)
        return std::pow(y / r, -1.0 / alpha);
    double hi = 1.0;
    while (negative_tail(hi) > y) hi *= 2.0;
    double lo = hi;
    while (lo > 1e-300 && negative_tail(lo * 0.5) > y) lo *= 0.5;
    if (negative_tail(lo) <= y) {
        // bracket below
        while (lo > 1e-300 && negative_tail(lo) <= y) lo *= 0.5;
    }
    lo = std::min(lo, hi * 0.5);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (negative_tail(mid) > y)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * hi) break;
    }
    return hi;
}

double LevyModel::positive_density(double x) const {
    if (!(x > 0.0)) return 0.0;
    if (truncation && x >= *truncation) return 0.0;
    return density_shape(kind, alpha, x);
}

double LevyModel::negative_density(double u) const {
    if (!(u > 0.0)) return 0.0;
    double r = neg_ratio();
    if (r == 0.0) return 0.0;
    return r * density_shape(kind, alpha, u);
}

double LevyModel::truncated_moment1(double eps) const {
    if (truncation) eps = std::min(eps, *truncation);
    if (!(eps > 0.0)) return 0.0;
    double m = 0.0;
    switch (kind) {
        case ModelKind::PureStable:
        case ModelKind::AtomicStable:
            if (alpha >= 1.0) return kInf;
            m = alpha * std::pow(eps, 1.0 - alpha) / (1.0 - alpha);
            break;
        case ModelKind::TemperedStable: {
            if (alpha >= 1.0) return kInf;
            double t = std::pow(eps, -alpha) * std::exp(-eps);
            m = -eps * t + std::tgamma(1.0 - alpha) * lower_reg_gamma(1.0 - alpha, eps);
            break;
        }
        case ModelKind::GammaSubordinator:
            m = 1.0 - std::exp(-eps);
            break;
    }
    for (const auto& a : atoms)
        if (a.location <= eps) m += a.location * a.mass;
    return m;
}

double LevyModel::truncated_moment2(double eps) const {
    if (truncation) eps = std::min(eps, *truncation);
    if (!(eps > 0.0)) return 0.0;
    double m = 0.0;
    switch (kind) {
        case ModelKind::PureStable:
        case ModelKind::AtomicStable:
            m = alpha * std::pow(eps, 2.0 - alpha) / (2.0 - alpha);
            break;
        case ModelKind::TemperedStable: {
            double t = std::pow(eps, -alpha) * std::exp(-eps);
            m = -eps * eps * t +
                2.0 * std::tgamma(2.0 - alpha) * lower_reg_gamma(2.0 - alpha, eps);
            break;
        }
        case ModelKind::GammaSubordinator:
            m = 1.0 - (1.0 + eps) * std::exp(-eps);
            break;
    }
    for (const auto& a : atoms)
        if (a.location <= eps) m += a.location * a.location * a.mass;
    return m;
}

double LevyModel::truncated_moment1_neg(double eps) const {
    double r = neg_ratio();
    if (r == 0.0 || !(eps > 0.0)) return 0.0;
    LevyModel cont = *this;
    cont.atoms.clear();
    cont.truncation.reset();
    cont.kind = kind;
    double m = cont.truncated_moment1(eps);
    // atoms are positive-side only; scale the continuous part
    for (const auto& a : atoms)
        if (a.location <= eps) m -= a.location * a.mass;
    return r * m;
}

double LevyModel::truncated_moment2_neg(double eps) const {
    double r = neg_ratio();
    if (r == 0.0 || !(eps > 0.0)) return 0.0;
    LevyModel cont = *this;
    cont.atoms.clear();
    cont.truncation.reset();
    double m = cont.truncated_moment2(eps);
    for (const auto& a : atoms)
        if (a.location <= eps) m -= a.location * a.location * a.mass;
    return r * m;
}

double LevyModel::band_moment1(double a, double b) const {
    if (truncation) b = std::min(b, *truncation);
    if (!(a > 0.0)) throw std::domain_error("band_moment1: requires a > 0");
    if (!(b > a)) return 0.0;
    double m = 0.0;
    switch (kind) {
        case ModelKind::PureStable:
        case ModelKind::AtomicStable:
            // finite for every alpha since a > 0
            m = alpha == 1.0
                    ? std::log(b / a)
                    : alpha * (std::pow(b, 1.0 - alpha) - std::pow(a, 1.0 - alpha)) /
                          (1.0 - alpha);
            break;
        case ModelKind::TemperedStable:
            if (alpha < 1.0) {
                auto closed = [&](double e) {
                    return -e * std::pow(e, -alpha) * std::exp(-e) +
                           std::tgamma(1.0 - alpha) * lower_reg_gamma(1.0 - alpha, e);
                };
                m = closed(b) - closed(a);
            } else {
                m = adaptive_gk<double>(
                        [&](double x) {
                            return x * (alpha * std::pow(x, -alpha - 1.0) +
                                        std::pow(x, -alpha)) *
                                   std::exp(-x);
                        },
                        a, b, 1e-11)
                        .value;
            }
            break;
        case ModelKind::GammaSubordinator:
            m = std::exp(-a) - std::exp(-b);
            break;
    }
    for (const auto& at : atoms)
        if (at.location > a && at.location <= b) m += at.location * at.mass;
    return m;
}

double LevyModel::band_moment1_neg(double a, double b) const {
    double r = neg_ratio();
    if (r == 0.0) return 0.0;
    LevyModel cont = *this;
    cont.atoms.clear();
    cont.truncation.reset();
    cont.a_minus = 0.0;
    cont.a_plus = 1.0;
    return r * cont.band_moment1(a, b);
}

// gamma of the compensated-form triplet, whichever convention the model uses.
double LevyModel::canonical_gamma() const {
    if (!drift) return gamma_shift;
    double m1 = truncated_moment1(1.0);
    if (!std::isfinite(m1)) throw std::domain_error("LevyModel: drift form needs integrable small jumps");
    return *drift + m1;
}

double LevyModel::centering_rho(double w) const {
    if (!(w > 0.0)) throw std::domain_error("centering_rho: requires w > 0");
    double g = canonical_gamma();
    auto pos_int = [&](double a, double b) {  // continuous part of int x dPi on (a,b)
        if (b <= a) return 0.0;
        return adaptive_gk<double>([&](double x) { return x * positive_density(x); }, a, b, 1e-11)
            .value;
    };
    auto neg_int = [&](double a, double b) {  // int u dPi^- over magnitudes (a,b)
        if (b <= a || neg_ratio() == 0.0) return 0.0;
        return adaptive_gk<double>([&](double u) { return u * negative_density(u); }, a, b, 1e-11)
            .value;
    };
    if (w <= 1.0) {
        double pos = pos_int(w, 1.0);
        for (const auto& a : atoms)
            if (a.location >= w && a.location <= 1.0 && (!truncation || a.location < *truncation))
                pos += a.location * a.mass;
        double neg = -neg_int(w, 1.0);  // int_{[-1,-w)} x dPi
        return g - (pos + neg);
    }
    double hi = truncation ? std::min(w, *truncation) : w;
    double pos = pos_int(1.0, hi);
    for (const auto& a : atoms)
        if (a.location > 1.0 && a.location < hi) pos += a.location * a.mass;
    double neg = -neg_int(1.0, w);  // int_{[-w,-1)} x dPi
    return g + (pos + neg);
}

// Compensated integral of e^{i t x}-1-i t x over (0, cap) against the
// continuous positive part, cap <= 1.  The substitution x = u^m flattens the
// small-x singularity.
std::complex<double> LevyModel::compensated_small_pos(double theta, double cap) const {
    if (!(cap > 0.0)) return 0.0;
    double aeff = (kind == ModelKind::GammaSubordinator) ? 0.0 : alpha;
    double m = 1.0 / (2.0 - aeff);
    double ucap = std::pow(cap, 1.0 / m);
    auto f = [&](double u) -> std::complex<double> {
        double x = std::pow(u, m);
        return expm1_compensated(theta, x) * positive_density(x) * m * std::pow(u, m - 1.0);
    };
    return adaptive_gk<std::complex<double>>(f, 0.0, ucap, 1e-11).value;
}

std::complex<double> LevyModel::compensated_small_neg(double theta, double cap) const {
    if (!(cap > 0.0) || neg_ratio() == 0.0) return 0.0;
    double aeff = (kind == ModelKind::GammaSubordinator) ? 0.0 : alpha;
    double m = 1.0 / (2.0 - aeff);
    double ucap = std::pow(cap, 1.0 / m);
    auto f = [&](double u) -> std::complex<double> {
        double x = std::pow(u, m);
        return expm1_compensated(-theta, x) * negative_density(x) * m * std::pow(u, m - 1.0);
    };
    return adaptive_gk<std::complex<double>>(f, 0.0, ucap, 1e-11).value;
}

// Plain integral of e^{i theta x} over the continuous positive part on (a,b),
// b possibly infinite.
std::complex<double> LevyModel::plain_pos(double theta, double a, double b) const {
    if (truncation) b = std::min(b, *truncation);
    if (b <= a) return 0.0;
    if (std::isinf(b)) {
        if (kind == ModelKind::PureStable || kind == ModelKind::AtomicStable)
            return stable_tail_cf(alpha, theta, a);
        b = a + 80.0;  // e^{-x} decay: truncated mass below 1e-30
    }
    auto f = [&](double x) -> std::complex<double> {
        return std::exp(std::complex<double>(0.0, theta * x)) * positive_density(x);
    };
    return adaptive_gk<std::complex<double>>(f, a, b, 1e-11).value;
}

std::complex<double> LevyModel::plain_neg(double theta, double a, double b) const {
    if (neg_ratio() == 0.0 || b <= a) return 0.0;
    if (std::isinf(b)) {
        if (kind == ModelKind::PureStable || kind == ModelKind::AtomicStable)
            return neg_ratio() * std::conj(stable_tail_cf(alpha, theta, a));
        b = a + 80.0;
    }
    auto f = [&](double u) -> std::complex<double> {
        return std::exp(std::complex<double>(0.0, -theta * u)) * negative_density(u);
    };
    return adaptive_gk<std::complex<double>>(f, a, b, 1e-11).value;
}

std::complex<double> LevyModel::truncated_exp_moment(double theta, double lower, double upper,
                                                     bool compensated) const {
    if (!(lower < upper)) throw std::invalid_argument("truncated_exp_moment: empty range");
    if (!compensated && lower <= 0.0 && upper >= 0.0)
        throw std::domain_error("truncated_exp_moment: plain integrand diverges at 0");
    std::complex<double> total = 0.0;
    // positive portion (max(lower,0), upper]
    double pa = std::max(lower, 0.0);
    double pb = upper;
    if (pb > pa) {
        if (compensated) {
            double cap = std::min(pb, 1.0);
            if (pa == 0.0) {
                total += compensated_small_pos(theta, cap);
            } else {
                double c2 = std::min(cap, pb);
                auto f = [&](double x) -> std::complex<double> {
                    return expm1_compensated(theta, x) * positive_density(x);
                };
                if (c2 > pa)
                    total += adaptive_gk<std::complex<double>>(f, pa, c2, 1e-11).value;
            }
            if (pb > 1.0) {
                double a1 = std::max(pa, 1.0);
                total += plain_pos(theta, a1, pb);
                double mass = positive_tail_cont(a1) - positive_tail_cont(pb);
                total -= mass;
            }
        } else {
            if (theta == 0.0) {
                // exact mass of (pa, pb]
                double hi = std::isinf(pb) ? 0.0 : positive_tail(pb);
                total += positive_tail(pa) - hi;
            } else {
                total += plain_pos(theta, pa, pb);
                for (const auto& a : atoms)
                    if (a.location > pa && a.location <= pb &&
                        (!truncation || a.location < *truncation))
                        total += a.mass * std::exp(std::complex<double>(0.0, theta * a.location));
            }
            return total;
        }
        // atoms for the compensated branch
        for (const auto& a : atoms)
            if (a.location > pa && a.location <= pb && (!truncation || a.location < *truncation)) {
                if (a.location <= 1.0)
                    total += a.mass * expm1_compensated(theta, a.location);
                else
                    total += a.mass * expm1_i(theta, a.location);
            }
    }
    // negative portion [lower, min(upper,0)) in x, i.e. magnitudes (|b|, |a|]
    double na = std::max(-upper, 0.0);
    double nb = -lower;
    if (nb > na && neg_ratio() > 0.0) {
        if (compensated) {
            double cap = std::min(nb, 1.0);
            if (na == 0.0) {
                total += compensated_small_neg(theta, cap);
            } else if (cap > na) {
                auto f = [&](double u) -> std::complex<double> {
                    return expm1_compensated(-theta, u) * negative_density(u);
                };
                total += adaptive_gk<std::complex<double>>(f, na, cap, 1e-11).value;
            }
            if (nb > 1.0) {
                double a1 = std::max(na, 1.0);
                total += plain_neg(theta, a1, nb);
                double mass = negative_tail(a1) - (std::isinf(nb) ? 0.0 : negative_tail(nb));
                total -= mass;
            }
        } else {
            if (theta == 0.0) {
                total += negative_tail(na) - (std::isinf(nb) ? 0.0 : negative_tail(nb));
            } else {
                total += plain_neg(theta, na, nb);
            }
        }
    }
    return total;
}

double LevyModel::positive_tail_cont(double x) const {
    if (std::isinf(x)) return 0.0;
    if (truncation && x >= *truncation) return 0.0;
    double v = tail_shape(kind, alpha, x);
    if (truncation) v -= tail_shape(kind, alpha, *truncation);
    return v;
}

std::complex<double> LevyModel::cf_exponent_kernel(double theta, double y, double cutoff) const {
    if (!(y > 0.0)) throw std::domain_error("cf_exponent_kernel: requires y > 0");
    std::complex<double> total = 0.0;
    double ylim = truncation ? std::min(y, *truncation) : y;
    // positive side
    total += compensated_small_pos(theta, std::min(ylim, std::min(cutoff, 1.0)));
    if (std::min(cutoff, 1.0) < 1.0 && ylim > cutoff) {
        // compensation stops at cutoff < 1: between cutoff and min(y,1) the
        // integrand is e^{i t x} - 1
        double a1 = cutoff;
        double b1 = ylim;
        total += plain_pos(theta, a1, b1) - (positive_tail_cont(a1) - positive_tail_cont(b1));
    } else if (ylim > 1.0 && cutoff >= 1.0) {
        double a1 = 1.0;
        double b1 = std::min(ylim, cutoff);
        if (b1 > a1) {
            // still inside |x| <= cutoff: compensated integrand
            auto f = [&](double x) -> std::complex<double> {
                return expm1_compensated(theta, x) * positive_density(x);
            };
            total += adaptive_gk<std::complex<double>>(f, a1, b1, 1e-11).value;
        }
        if (ylim > cutoff) {
            total += plain_pos(theta, cutoff, ylim) -
                     (positive_tail_cont(cutoff) - positive_tail_cont(ylim));
        }
    }
    for (const auto& a : atoms) {
        if (a.location >= ylim) continue;
        if (a.location <= cutoff)
            total += a.mass * expm1_compensated(theta, a.location);
        else
            total += a.mass * expm1_i(theta, a.location);
    }
    // negative side: (-inf, 0)
    if (neg_ratio() > 0.0) {
        double c = std::min(cutoff, 1.0);
        // note: for cutoff != 1 the compensation window is |x| <= cutoff
        c = cutoff;
        total += compensated_small_neg(theta, std::min(c, 1e308));
        // beyond the compensation window: e^{i theta x} - 1 for x < -cutoff
        total += plain_neg(theta, c, kInf) - negative_tail(c);
    }
    return total;
}

std::complex<double> LevyModel::cf_exponent_subordinator(double theta, double y) const {
    if (!(y > 0.0)) throw std::domain_error("cf_exponent_subordinator: requires y > 0");
    if (neg_ratio() > 0.0)
        throw std::domain_error("cf_exponent_subordinator: model has negative jumps");
    double aeff = (kind == ModelKind::GammaSubordinator) ? 0.0 : alpha;
    if (aeff >= 1.0) throw std::domain_error("cf_exponent_subordinator: requires alpha < 1");
    double ylim = truncation ? std::min(y, *truncation) : y;
    double m = 1.0 / (1.0 - aeff);
    double cap = std::min(ylim, 1.0);
    double ucap = std::pow(cap, 1.0 / m);
    auto f = [&](double u) -> std::complex<double> {
        double x = std::pow(u, m);
        return expm1_i(theta, x) * positive_density(x) * m * std::pow(u, m - 1.0);
    };
    std::complex<double> total = adaptive_gk<std::complex<double>>(f, 0.0, ucap, 1e-11).value;
    if (ylim > 1.0)
        total += plain_pos(theta, 1.0, ylim) - (positive_tail_cont(1.0) - positive_tail_cont(ylim));
    for (const auto& a : atoms)
        if (a.location < ylim) total += a.mass * expm1_i(theta, a.location);
    return total;
}

double LevyModel::restricted_gamma(double y) const {
    if (!(y > 0.0)) throw std::domain_error("restricted_gamma: requires y > 0");
    double g = canonical_gamma();
    if (y > 1.0) return g;
    double corr = adaptive_gk<double>([&](double x) { return x * positive_density(x); }, y,
                                      std::min(1.0, truncation.value_or(kInf)), 1e-11)
                      .value;
    for (const auto& a : atoms)
        if (a.location >= y && a.location <= 1.0 && (!truncation || a.location < *truncation))
            corr += a.location * a.mass;
    return g - corr;
}

LevyModel LevyModel::restricted(double y) const {
    if (!(y > 0.0)) throw std::domain_error("restricted: requires y > 0");
    LevyModel out = *this;
    if (!drift) out.gamma_shift = restricted_gamma(y);
    out.truncation = truncation ? std::min(*truncation, y) : y;
    return out;
}

RvDiagnostic regular_variation_diagnostic(const LevyModel& model, double u, double y,
                                          const std::vector<double>& t_grid, double rel_tol) {
    if (t_grid.empty()) throw std::invalid_argument("regular_variation_diagnostic: empty grid");
    if (!(u > 0.0) || !(y > 0.0))
        throw std::invalid_argument("regular_variation_diagnostic: u, y must be positive");
    RvDiagnostic out;
    double a = (model.kind == ModelKind::GammaSubordinator) ? 0.0 : model.alpha;
    out.limit = std::pow(u, -a) * y;
    for (double t : t_grid) {
        double v = t * model.positive_tail(u * model.inverse_positive_tail(y / t));
        out.rows.push_back({t, v});
    }
    double last = out.rows.back().value;
    out.converged = std::fabs(last - out.limit) <= rel_tol * std::fabs(out.limit);
    return out;
}

LevyModel make_pure_stable(double alpha, double a_minus, bool subordinator) {
    LevyModel m;
    m.kind = ModelKind::PureStable;
    m.alpha = alpha;
    m.a_minus = a_minus;
    m.a_plus = 1.0 - a_minus;
    if (subordinator) m.drift = 0.0;
    m.validate();
    return m;
}

LevyModel make_tempered_stable(double alpha, double a_minus, bool subordinator) {
    LevyModel m;
    m.kind = ModelKind::TemperedStable;
    m.alpha = alpha;
    m.a_minus = a_minus;
    m.a_plus = 1.0 - a_minus;
    if (subordinator) m.drift = 0.0;
    m.validate();
    return m;
}

LevyModel make_atomic_stable(double alpha, const std::vector<Atom>& atoms, bool subordinator) {
    LevyModel m;
    m.kind = ModelKind::AtomicStable;
    m.alpha = alpha;
    m.atoms = atoms;
    std::sort(m.atoms.begin(), m.atoms.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    if (subordinator) m.drift = 0.0;
    m.validate();
    return m;
}

LevyModel make_gamma_subordinator() {
    LevyModel m;
    m.kind = ModelKind::GammaSubordinator;
    m.alpha = 0.0;
    m.drift = 0.0;
    return m;
}

LevyModel StableLimitModel::to_levy() const {
    LevyModel m;
    m.kind = ModelKind::PureStable;
    m.alpha = alpha;
    m.a_plus = a_plus;
    m.a_minus = a_minus;
    m.gamma_shift = 0.0;
    m.sigma2 = 0.0;
    m.validate();
    return m;
}

LevyModel LevyModel::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    static const std::vector<std::string> known = {"kind",  "alpha", "a_plus",    "a_minus",
                                                  "gamma", "sigma2", "atoms",    "drift",
                                                  "truncation"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw std::invalid_argument("model JSON: unknown field '" + it.key() + "'");
    }
    LevyModel m;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "stable")
        m.kind = ModelKind::PureStable;
    else if (kind == "tempered")
        m.kind = ModelKind::TemperedStable;
    else if (kind == "atomic")
        m.kind = ModelKind::AtomicStable;
    else if (kind == "gamma")
        m.kind = ModelKind::GammaSubordinator;
    else
        throw std::invalid_argument("model JSON: unknown kind '" + kind + "'");
    if (m.kind != ModelKind::GammaSubordinator) m.alpha = j.at("alpha").get<double>();
    if (j.contains("a_minus")) {
        m.a_minus = j["a_minus"].get<double>();
        m.a_plus = 1.0 - m.a_minus;
    }
    if (j.contains("a_plus")) m.a_plus = j["a_plus"].get<double>();
    if (j.contains("gamma")) m.gamma_shift = j["gamma"].get<double>();
    if (j.contains("sigma2")) m.sigma2 = j["sigma2"].get<double>();
    if (j.contains("atoms")) {
        for (const auto& row : j["atoms"])
            m.atoms.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
        std::sort(m.atoms.begin(), m.atoms.end(),
                  [](const Atom& a, const Atom& b) { return a.location < b.location; });
    }
    if (j.contains("drift")) m.drift = j["drift"].get<double>();
    if (j.contains("truncation")) m.truncation = j["truncation"].get<double>();
    if (m.kind == ModelKind::GammaSubordinator && !m.drift) m.drift = 0.0;
    m.validate();
    return m;
}

std::string LevyModel::to_json_text() const {
    nlohmann::json j;
    switch (kind) {
        case ModelKind::PureStable: j["kind"] = "stable"; break;
        case ModelKind::TemperedStable: j["kind"] = "tempered"; break;
        case ModelKind::AtomicStable: j["kind"] = "atomic"; break;
        case ModelKind::GammaSubordinator: j["kind"] = "gamma"; break;
    }
    if (kind != ModelKind::GammaSubordinator) j["alpha"] = alpha;
    j["a_plus"] = a_plus;
    j["a_minus"] = a_minus;
    j["gamma"] = gamma_shift;
    j["sigma2"] = sigma2;
    if (!atoms.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& a : atoms) arr.push_back({a.location, a.mass});
        j["atoms"] = arr;
    }
    if (drift) j["drift"] = *drift;
    if (truncation) j["truncation"] = *truncation;
    return j.dump();
}

}  // namespace trimlevy
