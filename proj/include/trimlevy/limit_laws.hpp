#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "trimlevy/levy_model.hpp"
#include "trimlevy/rng.hpp"

namespace trimlevy {

// Limit-law evaluator for the stable measure with positive tail x^{-alpha}
// and negative tail (a_minus/a_plus) x^{-alpha}.  Holds the exponent psi, a
// validated theta0 with |psi| <= 0.95 on [-theta0, theta0], and the (r, n)
// indices of the trimmed ratio vector.
class LimitLawSpec {
public:
    LimitLawSpec(double alpha, double a_minus, int r, int n, bool subordinator = false);

    double alpha() const { return alpha_; }
    double a_minus() const { return a_minus_; }
    double neg_ratio() const { return a_minus_ / (1.0 - a_minus_); }
    int r() const { return r_; }
    int n() const { return n_; }
    bool subordinator() const { return subordinator_; }
    double theta0() const { return theta0_; }

    // psi(theta) = int_{(-inf,1)} (e^{i theta x} - 1 - i theta x 1{|x|<=1}) Lambda(dx),
    // evaluated on fixed substituted Gauss-Legendre nodes (abs error ~1e-10).
    std::complex<double> psi(double theta) const;

    // phi(theta, u) = (1-u^alpha)^{-1} int_1^{1/u} e^{i theta x} Lambda(dx) for
    // u in (0,1); phi(theta, 0) = int_1^inf e^{i theta x} Lambda(dx).
    std::complex<double> phi(double theta, double u) const;

    // Psi(lambda) = int_{(0,1)} (1 - e^{-lambda x}) Lambda(dx); requires
    // a_minus = 0 and alpha < 1.
    double subordinator_exponent(double lambda) const;

    // The process W with triplet (0, 0, Lambda 1{x<1}), compensated form (or
    // the driftless subordinator form when subordinator() is set).
    const LevyModel& w_model() const { return w_model_; }

private:
    double alpha_;
    double a_minus_;
    int r_;
    int n_;
    bool subordinator_;
    double theta0_;
    LevyModel w_model_;
    // substituted nodes: pairs (x_i, weight_i) for the one-sided compensated
    // integral over (0,1)
    std::vector<double> node_x_;
    std::vector<double> node_w_;
};

// (1 - psi(theta))^{-index} = E e^{i theta W_{Gamma_index}}.  Well defined for
// every real theta since Re psi <= 0.
std::complex<double> cf_W_gamma(const LimitLawSpec& spec, double theta, double index);

// One draw of W_v.
double sample_W(const LimitLawSpec& spec, double v, RngStream& rng);

// One draw of W_{Gamma_r} (the limit of the centered trimmed ratio).
double sample_limit_ratio(const LimitLawSpec& spec, RngStream& rng);

// Order-statistic law of the limit jumps: u in (0,1) gives the J(u) law on
// [1, 1/u], u = 0 the Pareto L law on [1, inf).
struct OrderStatLaw {
    double alpha = 0.5;
    double u = 0.0;
    int count = 1;
};

// `count` iid draws, sorted nonincreasing.
std::vector<double> sample_order_stats(const OrderStatLaw& law, RngStream& rng);

// CF of the single centered ratio (denominator at rank r+n): the closed
// quadrature form with the Beta(r,n) mixing expectation.
std::complex<double> limit_cf_single(const LimitLawSpec& spec, double theta);

double limit_laplace(const LimitLawSpec& spec, double lambda);

enum class JointCfBranch {
    OrderStat,  // integrate (1-psi)^{-(r+n)} over the order-statistic law
    WGamma,     // also Monte Carlo over W_{Gamma_{r+n}}
};

struct CfEstimate {
    std::complex<double> value;
    double std_error = 0.0;
};

// Joint CF of the centered ratio vector at theta_vec (size n), by Monte Carlo
// over the order statistics (and over W for the WGamma branch).
CfEstimate limit_cf_joint(const LimitLawSpec& spec, const std::vector<double>& theta_vec,
                          JointCfBranch branch, int draws, RngStream& rng);

// Gil-Pelaez inversion of a characteristic function on an ascending x grid.
// The cf is evaluated once per quadrature node and shared across the grid;
// the oscillatory tail is damped by a Cesaro average over the last decade of
// the integration range.  Output is clipped to [0,1] and monotonized.
std::vector<double> cdf_from_cf(const std::function<std::complex<double>(double)>& cf,
                                const std::vector<double>& x_grid, double cap);

}  // namespace trimlevy
