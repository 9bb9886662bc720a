#include "trimlevy/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trimlevy/quadrature.hpp"
#include "trimlevy/samplers.hpp"
#include "trimlevy/special.hpp"

namespace trimlevy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::complex<double> expm1_compensated(double theta, double x) {
    std::complex<double> z(0.0, theta * x);
    if (std::fabs(theta * x) < 1e-4) {
        std::complex<double> z2 = z * z;
        return z2 * 0.5 * (1.0 + z / 3.0 + z2 / 12.0 + z2 * z / 60.0);
    }
    return std::exp(z) - 1.0 - z;
}

std::complex<double> pow_int(std::complex<double> z, int k) {
    std::complex<double> out = 1.0;
    for (int i = 0; i < k; ++i) out *= z;
    return out;
}

}  // namespace

LimitLawSpec::LimitLawSpec(double alpha, double a_minus, int r, int n, bool subordinator)
    : alpha_(alpha), a_minus_(a_minus), r_(r), n_(n), subordinator_(subordinator) {
    if (!(alpha > 0.0) || !(alpha < 2.0)) throw std::invalid_argument("LimitLawSpec: alpha in (0,2)");
    if (a_minus < 0.0 || a_minus >= 1.0) throw std::invalid_argument("LimitLawSpec: a_minus in [0,1)");
    if (r < 0 || n < 1) throw std::invalid_argument("LimitLawSpec: r >= 0, n >= 1");
    if (subordinator && (a_minus != 0.0 || alpha >= 1.0))
        throw std::invalid_argument("LimitLawSpec: subordinator needs a_minus = 0, alpha < 1");

    if (subordinator_) {
        w_model_ = make_pure_stable(alpha, 0.0, true);
    } else {
        w_model_ = StableLimitModel{alpha, 1.0 - a_minus, a_minus}.to_levy();
    }
    w_model_.truncation = 1.0;

    // Substituted Gauss-Legendre nodes for the compensated one-sided integral
    // over (0,1): x = u^m with m = 1/(2-alpha) flattens the singularity.
    const int order = 96;
    const auto& gl = gauss_legendre_01(order);
    double m = 1.0 / (2.0 - alpha);
    node_x_.resize(order);
    node_w_.resize(order);
    for (int i = 0; i < order; ++i) {
        double u = gl.nodes[i];
        node_x_[i] = std::pow(u, m);
        node_w_[i] = gl.weights[i] * alpha * m * std::pow(u, -alpha * m - 1.0);
    }

    // largest theta0 <= 10 with |psi| <= 0.95, scanned on a 1e-3 grid
    theta0_ = 10.0;
    for (int k = 1; k <= 10000; ++k) {
        double th = 1e-3 * k;
        if (std::abs(psi(th)) > 0.95) {
            theta0_ = th - 1e-3;
            break;
        }
    }
    if (theta0_ <= 0.0) theta0_ = 1e-3;
}

std::complex<double> LimitLawSpec::psi(double theta) const {
    std::complex<double> pos = 0.0, neg = 0.0;
    for (std::size_t i = 0; i < node_x_.size(); ++i)
        pos += node_w_[i] * expm1_compensated(theta, node_x_[i]);
    double ratio = neg_ratio();
    if (ratio > 0.0) {
        for (std::size_t i = 0; i < node_x_.size(); ++i)
            neg += node_w_[i] * expm1_compensated(-theta, node_x_[i]);
        neg += std::conj(stable_tail_cf(alpha_, theta, 1.0)) - 1.0;
        neg *= ratio;
    }
    return pos + neg;
}

std::complex<double> LimitLawSpec::phi(double theta, double u) const {
    if (u < 0.0 || u >= 1.0) throw std::domain_error("phi: u in [0,1)");
    if (u == 0.0) return stable_tail_cf(alpha_, theta, 1.0);
    double denom = 1.0 - std::pow(u, alpha_);
    return (stable_tail_cf(alpha_, theta, 1.0) - stable_tail_cf(alpha_, theta, 1.0 / u)) / denom;
}

double LimitLawSpec::subordinator_exponent(double lambda) const {
    if (a_minus_ != 0.0 || alpha_ >= 1.0)
        throw std::domain_error("subordinator_exponent: needs a_minus = 0, alpha < 1");
    if (lambda < 0.0) throw std::domain_error("subordinator_exponent: lambda >= 0");
    if (lambda == 0.0) return 0.0;
    double a = alpha_;
    double m = 1.0 / (1.0 - a);
    auto f = [&](double u) {
        double x = std::pow(u, m);
        return -std::expm1(-lambda * x) * a * m * std::pow(u, -a * m - 1.0);
    };
    return adaptive_gk<double>(f, 0.0, 1.0, 1e-11).value;
}

std::complex<double> cf_W_gamma(const LimitLawSpec& spec, double theta, double index) {
    return std::pow(1.0 - spec.psi(theta), -index);
}

double sample_W(const LimitLawSpec& spec, double v, RngStream& rng) {
    return sample_small_jump_remainder(spec.w_model(), kInf, v, rng);
}

double sample_limit_ratio(const LimitLawSpec& spec, RngStream& rng) {
    if (spec.r() < 1) throw std::domain_error("sample_limit_ratio: r >= 1");
    double v = rng.gamma_integer(static_cast<unsigned>(spec.r()));
    return sample_W(spec, v, rng);
}

std::vector<double> sample_order_stats(const OrderStatLaw& law, RngStream& rng) {
    if (law.u < 0.0 || law.u >= 1.0) throw std::domain_error("sample_order_stats: u in [0,1)");
    std::vector<double> out(law.count);
    double ua = law.u > 0.0 ? std::pow(law.u, law.alpha) : 0.0;
    for (int i = 0; i < law.count; ++i) {
        double big_u = rng.uniform();
        out[i] = std::pow(1.0 - big_u * (1.0 - ua), -1.0 / law.alpha);
    }
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

std::complex<double> limit_cf_single(const LimitLawSpec& spec, double theta) {
    const std::complex<double> I(0.0, 1.0);
    int r = spec.r(), n = spec.n();
    std::complex<double> base = std::exp(I * theta) * std::pow(1.0 - spec.psi(theta), -(r + n));
    if (n == 1) return base;
    if (r == 0) return base * pow_int(spec.phi(theta, 0.0), n - 1);
    const auto& gl = gauss_legendre_01(64);
    double lnb = ln_beta(r, n);
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        double b = gl.nodes[i];
        double dens = std::exp((r - 1) * std::log(b) + (n - 1) * std::log1p(-b) - lnb);
        acc += gl.weights[i] * dens * pow_int(spec.phi(theta, std::pow(b, 1.0 / spec.alpha())), n - 1);
    }
    return base * acc;
}

double limit_laplace(const LimitLawSpec& spec, double lambda) {
    if (spec.r() < 1) throw std::domain_error("limit_laplace: r >= 1");
    return std::pow(1.0 + spec.subordinator_exponent(lambda), -spec.r());
}

CfEstimate limit_cf_joint(const LimitLawSpec& spec, const std::vector<double>& theta_vec,
                          JointCfBranch branch, int draws, RngStream& rng) {
    int r = spec.r(), n = spec.n();
    if (static_cast<int>(theta_vec.size()) != n)
        throw std::invalid_argument("limit_cf_joint: theta_vec must have n entries");
    if (draws < 1) throw std::invalid_argument("limit_cf_joint: draws >= 1");
    const std::complex<double> I(0.0, 1.0);
    std::complex<double> sum = 0.0;
    double sum_sq = 0.0;
    std::vector<double> xs(n);
    for (int d = 0; d < draws; ++d) {
        double u = 0.0;
        if (r > 0) {
            double gr = rng.gamma_integer(static_cast<unsigned>(r));
            double gn = rng.gamma_integer(static_cast<unsigned>(n));
            u = std::pow(gr / (gr + gn), 1.0 / spec.alpha());
        }
        if (n >= 2) {
            auto stats = sample_order_stats({spec.alpha(), u, n - 1}, rng);
            for (int k = 0; k < n - 1; ++k) xs[k] = stats[k];
        }
        xs[n - 1] = 1.0;
        double theta_tilde = 0.0, x_plus = 0.0;
        for (int k = 0; k < n; ++k) {
            theta_tilde += theta_vec[k] / xs[k];
            x_plus += xs[k];
        }
        std::complex<double> z;
        if (branch == JointCfBranch::OrderStat) {
            z = std::exp(I * theta_tilde * x_plus) *
                std::pow(1.0 - spec.psi(theta_tilde), -(r + n));
        } else {
            double w = sample_W(spec, rng.gamma_integer(static_cast<unsigned>(r + n)), rng);
            z = std::exp(I * theta_tilde * (x_plus + w));
        }
        sum += z;
        sum_sq += std::norm(z);
    }
    CfEstimate out;
    out.value = sum / static_cast<double>(draws);
    double var = sum_sq / draws - std::norm(out.value);
    out.std_error = std::sqrt(std::max(var, 0.0) / draws);
    return out;
}

std::vector<double> cdf_from_cf(const std::function<std::complex<double>(double)>& cf,
                                const std::vector<double>& x_grid, double cap) {
    if (x_grid.empty()) throw std::invalid_argument("cdf_from_cf: empty grid");
    if (std::abs(cf(0.0) - 1.0) > 1e-6)
        throw std::invalid_argument("cdf_from_cf: cf(0) must equal 1");
    if (!(cap > 0.0)) throw std::invalid_argument("cdf_from_cf: cap > 0");
    double xmax = 0.0;
    for (double x : x_grid) xmax = std::max(xmax, std::fabs(x));
    double width = std::min(M_PI / (4.0 * (1.0 + xmax)), cap / 16.0);
    int npanels = static_cast<int>(std::ceil(cap / width));
    width = cap / npanels;

    // shared node table: 15 Gauss-Kronrod nodes per panel
    std::vector<double> thetas;
    std::vector<double> weights;  // kronrod weight * half-width
    thetas.reserve(npanels * 15);
    weights.reserve(npanels * 15);
    for (int p = 0; p < npanels; ++p) {
        double a = p * width, b = a + width;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        thetas.push_back(mid);
        weights.push_back(detail::kGk15WeightsK[0] * half);
        for (int j = 1; j < 8; ++j) {
            double dx = half * detail::kGk15Nodes[j];
            thetas.push_back(mid + dx);
            weights.push_back(detail::kGk15WeightsK[j] * half);
            thetas.push_back(mid - dx);
            weights.push_back(detail::kGk15WeightsK[j] * half);
        }
    }
    std::vector<std::complex<double>> cf_over_theta(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) cf_over_theta[i] = cf(thetas[i]) / thetas[i];

    // Cesaro window: partial sums averaged over theta in [0.9 cap, cap]
    int first_avg = std::max(0, static_cast<int>(npanels * 0.9));

    std::vector<double> out(x_grid.size());
    for (std::size_t ix = 0; ix < x_grid.size(); ++ix) {
        double x = x_grid[ix];
        double partial = 0.0;
        double cesaro = 0.0;
        int navg = 0;
        std::size_t node = 0;
        for (int p = 0; p < npanels; ++p) {
            double contrib = 0.0;
            for (int j = 0; j < 15; ++j, ++node) {
                double th = thetas[node];
                std::complex<double> e(std::cos(th * x), -std::sin(th * x));
                contrib += weights[node] * std::imag(e * cf_over_theta[node]);
            }
            partial += contrib;
            if (p >= first_avg) {
                cesaro += partial;
                ++navg;
            }
        }
        double integral = navg > 0 ? cesaro / navg : partial;
        double f = 0.5 - integral / M_PI;
        out[ix] = std::min(1.0, std::max(0.0, f));
    }
    for (std::size_t ix = 1; ix < out.size(); ++ix) out[ix] = std::max(out[ix], out[ix - 1]);
    return out;
}

}  // namespace trimlevy
