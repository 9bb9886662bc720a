#include "trimlevy/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace trimlevy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Residual small-jump variance target, relative to the squared natural jump
// scale at (t, y).
constexpr double kVarFraction = 1e-6;
// Cap on the expected number of compound-Poisson jumps per draw; above it the
// threshold is raised and the residual becomes a centered Gaussian.
constexpr double kRateCap = 1e4;

double smallest_atom(const LevyModel& model) {
    return model.atoms.empty() ? kInf : model.atoms.front().location;
}

// Mass of the positive jumps in (eps, y) (open at y).
double pos_band_mass(const LevyModel& model, double eps, double y) {
    double hi = std::isinf(y) ? 0.0 : model.positive_tail_left(y);
    return std::max(model.positive_tail(eps) - hi, 0.0);
}

struct SmallJumpPlan {
    double eps;
    double pos_rate;
    double neg_rate;
    bool gaussian_residual;
    double residual_sd;    // of the Gaussian substitute, 0 if unused
    double residual_mean;  // subordinator mode: mean of dropped jumps
    double comp;           // compensated mode: t * int_{eps<|x|<=1} x Pi(dx)
};

SmallJumpPlan make_plan(const LevyModel& model, double y, double t) {
    SmallJumpPlan plan{};
    double y_ref = std::isinf(y) ? model.inverse_positive_tail(1.0 / t)
                                 : std::min(y, model.inverse_positive_tail(1.0 / t));
    double eps_max = std::min({std::isinf(y) ? 1.0 : y, 1.0, smallest_atom(model)});
    if (model.truncation) eps_max = std::min(eps_max, *model.truncation);
    double target = kVarFraction * y_ref * y_ref;
    auto resid_var = [&](double e) {
        return t * (model.truncated_moment2(e) + model.truncated_moment2_neg(e));
    };
    double eps = eps_max;
    if (resid_var(eps_max) > target) {
        double lo = 0.0, hi = eps_max;
        for (int i = 0; i < 80; ++i) {
            double mid = 0.5 * (lo + hi);
            if (resid_var(mid) > target)
                hi = mid;
            else
                lo = mid;
        }
        eps = lo > 0.0 ? lo : hi;
    }
    auto total_rate = [&](double e) {
        return t * (pos_band_mass(model, e, y) + model.negative_tail(e));
    };
    plan.gaussian_residual = false;
    if (total_rate(eps) > kRateCap && total_rate(eps_max) < kRateCap) {
        double lo = eps, hi = eps_max;
        for (int i = 0; i < 80; ++i) {
            double mid = 0.5 * (lo + hi);
            if (total_rate(mid) > kRateCap)
                lo = mid;
            else
                hi = mid;
        }
        eps = hi;
        plan.gaussian_residual = true;
    }
    plan.eps = eps;
    plan.pos_rate = t * pos_band_mass(model, eps, y);
    plan.neg_rate = t * model.negative_tail(eps);
    plan.residual_sd = plan.gaussian_residual ? std::sqrt(resid_var(eps)) : 0.0;
    if (model.is_subordinator()) {
        plan.residual_mean = t * model.truncated_moment1(eps);
        plan.comp = 0.0;
    } else {
        plan.residual_mean = 0.0;
        // int_{(eps, min(1,y^-)]} x Pi+(dx) minus the negative-side mirror
        double up = std::min(std::isinf(y) ? 1.0 : y, 1.0);
        double comp_pos = model.band_moment1(eps, up);
        if (y <= 1.0)
            for (const auto& a : model.atoms)
                if (a.location == y) comp_pos -= a.location * a.mass;  // open at y
        double comp_neg = model.band_moment1_neg(eps, 1.0);
        plan.comp = t * (comp_pos - comp_neg);
    }
    return plan;
}

// Sample one positive jump size in (eps, y) by tail inversion.
double draw_pos_jump_inversion(const LevyModel& model, double eps, double y, RngStream& rng) {
    double hi_tail = std::isinf(y) ? 0.0 : model.positive_tail_left(y);
    double lo_tail = model.positive_tail(eps);
    double v = rng.uniform(hi_tail, lo_tail);
    return model.inverse_positive_tail(v);
}

}  // namespace

std::vector<double> gamma_sequence(int count, RngStream& rng) {
    if (count < 1) throw std::invalid_argument("gamma_sequence: count >= 1");
    std::vector<double> g(count);
    double acc = 0.0;
    for (int i = 0; i < count; ++i) {
        acc += rng.exponential();
        g[i] = acc;
    }
    return g;
}

OrderedJumpSample sample_ordered_jumps(const LevyModel& model, double t, int count,
                                       RngStream& rng) {
    if (!(t > 0.0)) throw std::invalid_argument("sample_ordered_jumps: t > 0");
    OrderedJumpSample out;
    out.t = t;
    out.gammas = gamma_sequence(count, rng);
    out.jumps.resize(count);
    for (int i = 0; i < count; ++i)
        out.jumps[i] = model.inverse_positive_tail(out.gammas[i] / t);
    return out;
}

double sample_tie_correction(const LevyModel& model, double y, double v, double t,
                             RngStream& rng) {
    if (!(y > 0.0) || !(t > 0.0))
        throw std::invalid_argument("sample_tie_correction: y, t > 0");
    bool is_atom = false;
    for (const auto& a : model.atoms)
        if (a.location == y) is_atom = true;
    double left = model.positive_tail_left(y);
    if (v > left * (1.0 + 1e-9) + 1e-12)
        throw std::domain_error("sample_tie_correction: v exceeds the left tail limit");
    double kappa = left - v;
    if (!is_atom) {
        // continuity point: only roundoff keeps kappa away from <= 0
        if (v >= model.positive_tail(y) - 1e-9 * std::max(1.0, v)) kappa = 0.0;
    }
    kappa = std::max(kappa, 0.0);
    if (kappa == 0.0) return 0.0;
    return y * static_cast<double>(rng.poisson(t * kappa));
}

double sample_small_jump_remainder(const LevyModel& model, double y, double t, RngStream& rng) {
    if (!(y > 0.0) || !(t > 0.0))
        throw std::invalid_argument("sample_small_jump_remainder: y, t > 0");
    SmallJumpPlan plan = make_plan(model, y, t);
    double value = 0.0;
    if (model.is_subordinator())
        value += t * *model.drift;
    else
        value += t * model.restricted_gamma(y);
    if (model.sigma2 > 0.0) value += std::sqrt(t * model.sigma2) * rng.normal();

    // positive jumps in (eps, y)
    if (model.kind == ModelKind::TemperedStable) {
        // thinning against the pure power proposal
        double a = model.alpha;
        double big = std::max(1.0, std::exp(a - 1.0) / a);
        double lo = std::pow(plan.eps, -a);
        double hi = std::isinf(y) ? 0.0 : std::pow(y, -a);
        double prop_rate = t * big * (lo - hi);
        std::uint64_t nprop = rng.poisson(prop_rate);
        for (std::uint64_t i = 0; i < nprop; ++i) {
            double x = std::pow(rng.uniform(hi, lo), -1.0 / a);
            double accept = (1.0 + x / a) * std::exp(-x) / big;
            if (rng.uniform() < accept) value += x;
        }
    } else {
        std::uint64_t npos = rng.poisson(plan.pos_rate);
        for (std::uint64_t i = 0; i < npos; ++i)
            value += draw_pos_jump_inversion(model, plan.eps, y, rng);
    }

    // negative jumps in (eps, inf)
    if (plan.neg_rate > 0.0) {
        double ratio = model.neg_ratio();
        if (model.kind == ModelKind::TemperedStable) {
            double a = model.alpha;
            double big = std::max(1.0, std::exp(a - 1.0) / a);
            double prop_rate = t * big * ratio * std::pow(plan.eps, -a);
            std::uint64_t nprop = rng.poisson(prop_rate);
            for (std::uint64_t i = 0; i < nprop; ++i) {
                double x = std::pow(rng.uniform(0.0, std::pow(plan.eps, -a)), -1.0 / a);
                double accept = (1.0 + x / a) * std::exp(-x) / big;
                if (rng.uniform() < accept) value -= x;
            }
        } else {
            std::uint64_t nneg = rng.poisson(plan.neg_rate);
            for (std::uint64_t i = 0; i < nneg; ++i) {
                double v = rng.uniform(0.0, model.negative_tail(plan.eps));
                value -= model.inverse_negative_tail(v);
            }
        }
    }

    value -= plan.comp;
    value += plan.residual_mean;
    if (plan.gaussian_residual) value += plan.residual_sd * rng.normal();
    return value;
}

TrimmedSample sample_trimmed(const LevyModel& model, double t, int r, int extra,
                             RngStream& rng) {
    if (!(t > 0.0)) throw std::invalid_argument("sample_trimmed: t > 0");
    if (r < 0 || extra < 0) throw std::invalid_argument("sample_trimmed: r, extra >= 0");
    TrimmedSample out;
    out.rank = r;
    int k_tot = r + extra;
    if (k_tot == 0) {
        out.ordered.t = t;
        out.remainder = sample_small_jump_remainder(model, kInf, t, rng);
        out.tie_correction = 0.0;
        out.trimmed_value = out.remainder;
        return out;
    }
    out.ordered = sample_ordered_jumps(model, t, k_tot, rng);
    double y = out.ordered.jumps[k_tot - 1];
    double v = out.ordered.gammas[k_tot - 1] / t;
    out.remainder = sample_small_jump_remainder(model, y, t, rng);
    out.tie_correction = sample_tie_correction(model, y, v, t, rng);
    out.trimmed_value = out.remainder + out.tie_correction;
    for (int i = r; i < k_tot; ++i) out.trimmed_value += out.ordered.jumps[i];
    return out;
}

std::vector<double> ratio_vector(const TrimmedSample& sample, const LevyModel& model, int r,
                                 int n, Centering centering) {
    if (n < 1) throw std::invalid_argument("ratio_vector: n >= 1");
    if (sample.rank != r) throw std::invalid_argument("ratio_vector: sample rank mismatch");
    if (static_cast<int>(sample.ordered.jumps.size()) < r + n)
        throw std::invalid_argument("ratio_vector: sample carries too few jumps");
    if (centering == Centering::Auto)
        centering = model.is_subordinator() ? Centering::Drift : Centering::Rho;
    double t = sample.ordered.t;
    double c = 0.0;
    switch (centering) {
        case Centering::Rho:
            c = t * model.centering_rho(sample.ordered.jumps[r + n - 1]);
            break;
        case Centering::Drift:
            c = t * model.drift.value_or(0.0);
            break;
        default:
            break;
    }
    std::vector<double> out(n);
    for (int k = 1; k <= n; ++k) {
        double d = sample.ordered.jumps[r + k - 1];
        if (!(d > 0.0)) throw std::domain_error("ratio_vector: zero jump denominator");
        out[k - 1] = (sample.trimmed_value - c) / d;
    }
    return out;
}

double stable_series_trimmed(double alpha, double t, int r, RngStream& rng, int terms) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("stable_series_trimmed: alpha in (0,1)");
    double acc = 0.0;
    double g = 0.0;
    for (int i = 0; i < r; ++i) g += rng.exponential();
    for (int j = 0; j < terms; ++j) {
        g += rng.exponential();
        acc += std::pow(g / t, -1.0 / alpha);
    }
    // mean of the neglected jumps below the last level
    double last = std::pow(g / t, -1.0 / alpha);
    acc += t * alpha * std::pow(last, 1.0 - alpha) / (1.0 - alpha);
    return acc;
}

}  // namespace trimlevy
