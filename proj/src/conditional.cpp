#include "trimlevy/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trimlevy/quadrature.hpp"
#include "trimlevy/samplers.hpp"
#include "trimlevy/special.hpp"

namespace trimlevy {

namespace {

bool is_atom_level(const LevyModel& model, double y) {
    for (const auto& a : model.atoms)
        if (a.location == y) return true;
    return false;
}

// conditional Poisson CF integrated out: E(e^{i theta G} | Gamma_r = g)
std::complex<double> tie_cf_given_gamma(double theta, double y, double t, double b, double g) {
    double kappa = std::max(b - g / t, 0.0);
    std::complex<double> e(std::cos(theta * y) - 1.0, std::sin(theta * y));
    return std::exp(t * kappa * e);
}

}  // namespace

void ConditionSpec::validate(const LevyModel& model) const {
    (void)model;
    if (!(t > 0.0)) throw std::invalid_argument("ConditionSpec: t > 0");
    if (m < 1 || m > r) throw std::invalid_argument("ConditionSpec: 1 <= m <= r");
    if (static_cast<int>(levels.size()) != r - m + 1)
        throw std::invalid_argument("ConditionSpec: levels must have r-m+1 entries");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0)) throw std::invalid_argument("ConditionSpec: levels > 0");
        if (i > 0 && levels[i] > levels[i - 1])
            throw std::invalid_argument("ConditionSpec: levels must be nonincreasing");
    }
}

EstimateWithError k_factor(const LevyModel& model, const ConditionSpec& spec, double theta,
                           int draws, RngStream& rng) {
    spec.validate(model);
    double y_r = spec.levels.back();
    if (!is_atom_level(model, y_r)) return {1.0, 0.0};
    if (theta == 0.0) return {1.0, 0.0};
    double t = spec.t;
    double b_r = model.positive_tail_left(y_r);

    // flagged conditioning intervals [t a_i, t b_i) for Gamma_i, i = m..r
    struct Window {
        int index;  // rank i
        double lo, hi;
    };
    std::vector<Window> windows;
    for (int i = spec.m; i <= spec.r; ++i) {
        double y = spec.levels[i - spec.m];
        if (!is_atom_level(model, y)) continue;  // continuity levels are dropped
        windows.push_back({i, t * model.positive_tail(y), t * model.positive_tail_left(y)});
    }

    std::complex<double> sum = 0.0;
    double sum_sq = 0.0;
    int accepted = 0;
    if (windows.size() == 1 && windows.front().index == spec.r) {
        // direct truncated-gamma sampling of Gamma_r
        double plo = lower_reg_gamma(spec.r, windows.front().lo);
        double phi = lower_reg_gamma(spec.r, windows.front().hi);
        if (!(phi > plo)) throw std::domain_error("k_factor: conditioning event has zero mass");
        for (int d = 0; d < draws; ++d) {
            double g = inv_lower_reg_gamma(spec.r, plo + rng.uniform() * (phi - plo));
            auto z = tie_cf_given_gamma(theta, y_r, t, b_r, g);
            sum += z;
            sum_sq += std::norm(z);
            ++accepted;
        }
    } else {
        long attempts = 0;
        long max_attempts = std::max(1000000L, 50L * draws);
        while (accepted < draws && attempts < max_attempts) {
            ++attempts;
            auto gam = gamma_sequence(spec.r, rng);
            bool ok = true;
            for (const auto& w : windows)
                if (gam[w.index - 1] < w.lo || gam[w.index - 1] >= w.hi) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            auto z = tie_cf_given_gamma(theta, y_r, t, b_r, gam[spec.r - 1]);
            sum += z;
            sum_sq += std::norm(z);
            ++accepted;
        }
        if (accepted < 10)
            throw std::domain_error("k_factor: conditioning event probability too small");
    }
    EstimateWithError out;
    out.value = sum / static_cast<double>(accepted);
    double var = sum_sq / accepted - std::norm(out.value);
    out.std_error = std::sqrt(std::max(var, 0.0) / accepted);
    return out;
}

EstimateWithError conditional_cf_trimmed(const LevyModel& model, const ConditionSpec& spec,
                                         double theta, int draws, RngStream& rng) {
    spec.validate(model);
    double y_r = spec.levels.back();
    double t = spec.t;
    std::complex<double> base;
    if (model.is_subordinator()) {
        std::complex<double> expo(0.0, theta * t * *model.drift);
        base = std::exp(expo + t * model.cf_exponent_subordinator(theta, y_r));
    } else {
        std::complex<double> expo(-0.5 * t * model.sigma2 * theta * theta,
                                  theta * t * model.restricted_gamma(y_r));
        base = std::exp(expo + t * model.cf_exponent_kernel(theta, y_r, 1.0));
    }
    auto k = k_factor(model, spec, theta, draws, rng);
    return {base * k.value, std::abs(base) * k.std_error};
}

EstimateWithError conditional_cf_ratio(const LevyModel& model, double t, int r, int n,
                                       const std::vector<double>& levels, double theta,
                                       int draws, RngStream& rng) {
    if (r < 1 || n < 0) throw std::invalid_argument("conditional_cf_ratio: r >= 1, n >= 0");
    if (static_cast<int>(levels.size()) != n + 1)
        throw std::invalid_argument("conditional_cf_ratio: levels must have n+1 entries");
    double y = levels.back();
    std::complex<double> base;
    if (model.is_subordinator()) {
        base = std::exp(t * model.cf_exponent_subordinator(theta / y, y));
    } else {
        std::complex<double> expo(-0.5 * t * model.sigma2 * theta * theta / (y * y), 0.0);
        base = std::exp(expo + t * model.cf_exponent_kernel(theta / y, y, y));
    }
    ConditionSpec kspec{t, r, r + n, levels};
    auto k = k_factor(model, kspec, theta / y, draws, rng);
    return {base * k.value, std::abs(base) * k.std_error};
}

double uniform_order_stat_box(const std::vector<double>& bounds) {
    int count = static_cast<int>(bounds.size());
    if (count == 0) return 1.0;
    std::vector<double> p(count);
    for (int i = 0; i < count; ++i) {
        p[i] = std::min(std::max(bounds[i], 0.0), 1.0);
        if (i > 0 && p[i] < p[i - 1])
            throw std::invalid_argument("uniform_order_stat_box: bounds must be nondecreasing");
    }
    // Steck-type recursion over the cell counts (p_0=0, cells (p_{k-1}, p_k]):
    // g(k, c) = sum_j g(k-1, c-j) q_k^j / j!, requiring >= k points among the
    // first k cells; the answer is count! * g(count, count).
    std::vector<double> g(count + 1, 0.0);
    g[0] = 1.0;
    double prev = 0.0;
    for (int k = 1; k <= count; ++k) {
        double q = p[k - 1] - prev;
        prev = p[k - 1];
        std::vector<double> next(count + 1, 0.0);
        for (int c = k; c <= count; ++c) {
            double acc = 0.0;
            double qpow = 1.0, fact = 1.0;
            for (int j = 0; j <= c; ++j) {
                int c_prev = c - j;
                if (c_prev >= k - 1 && c_prev <= count && g[c_prev] != 0.0)
                    acc += g[c_prev] * qpow / fact;
                qpow *= q;
                fact *= (j + 1);
            }
            next[c] = acc;
        }
        g = next;
    }
    double result = g[count];
    for (int i = 2; i <= count; ++i) result *= i;
    return std::min(std::max(result, 0.0), 1.0);
}

double conditional_jump_ratio_limit(int r, int n, double alpha,
                                    const std::vector<double>& x_vec) {
    if (r < 0 || n < 2) throw std::invalid_argument("conditional_jump_ratio_limit: r >= 0, n >= 2");
    if (static_cast<int>(x_vec.size()) != n - 1)
        throw std::invalid_argument("conditional_jump_ratio_limit: need n-1 thresholds");
    for (int k = 0; k < n - 1; ++k) {
        if (!(x_vec[k] >= 1.0))
            throw std::invalid_argument("conditional_jump_ratio_limit: thresholds >= 1");
        if (k > 0 && x_vec[k] > x_vec[k - 1])
            throw std::invalid_argument("conditional_jump_ratio_limit: thresholds nonincreasing");
    }
    // ascending bounds c_k = x_k^{-alpha}
    std::vector<double> c(n - 1);
    for (int k = 0; k < n - 1; ++k) c[k] = std::pow(x_vec[k], -alpha);
    if (r == 0) return uniform_order_stat_box(c);
    // mix over s = Gamma_r / Gamma_{r+n} ~ Beta(r, n), conditionally the
    // ratios are order statistics of s + (1-s) U
    auto integrand = [&](double s) {
        std::vector<double> p(n - 1);
        for (int k = 0; k < n - 1; ++k)
            p[k] = std::min(std::max((c[k] - s) / (1.0 - s), 0.0), 1.0);
        double dens = std::exp((r - 1) * std::log(s) + (n - 1) * std::log1p(-s) - ln_beta(r, n));
        return uniform_order_stat_box(p) * dens;
    };
    // split at the kinks s = c_k
    std::vector<double> cuts = c;
    cuts.push_back(0.0);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-15) continue;
        total += adaptive_gk<double>(integrand, cuts[i], cuts[i + 1], 1e-11).value;
    }
    return std::min(std::max(total, 0.0), 1.0);
}

EstimateWithError conditional_jump_ratio_mc(int r, int n, double alpha,
                                            const std::vector<double>& x_vec, int draws,
                                            RngStream& rng) {
    if (n < 2 || static_cast<int>(x_vec.size()) != n - 1)
        throw std::invalid_argument("conditional_jump_ratio_mc: need n-1 thresholds");
    std::vector<double> c(n - 1);
    for (int k = 0; k < n - 1; ++k) c[k] = std::pow(x_vec[k], -alpha);
    long hits = 0;
    for (int d = 0; d < draws; ++d) {
        auto gam = gamma_sequence(r + n, rng);
        bool ok = true;
        for (int k = 1; k <= n - 1; ++k)
            if (!(gam[r + k - 1] / gam[r + n - 1] < c[k - 1])) {
                ok = false;
                break;
            }
        if (ok) ++hits;
    }
    double p = static_cast<double>(hits) / draws;
    return {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / draws)};
}

}  // namespace trimlevy
