#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "trimlevy/limit_laws.hpp"
#include "trimlevy/rng.hpp"
#include "trimlevy/special.hpp"

using namespace trimlevy;

namespace {

// series for the one-sided compensated exponent on (0,1):
// sum_{k>=2} (i theta)^k / k! * alpha/(k - alpha)
std::complex<double> psi_series(double alpha, double theta) {
    std::complex<double> sum = 0.0, it(0.0, theta);
    std::complex<double> pw = it * it;
    double fact = 2.0;
    for (int k = 2; k <= 60; ++k) {
        sum += pw / fact * (alpha / (k - alpha));
        pw *= it;
        fact *= (k + 1);
    }
    return sum;
}

double psi_laplace_series(double alpha, double lambda) {
    // sum_{k>=1} (-1)^{k+1} lambda^k / k! * alpha/(k-alpha)
    double sum = 0.0, pw = lambda, fact = 1.0, sign = 1.0;
    for (int k = 1; k <= 60; ++k) {
        sum += sign * pw / fact * (alpha / (k - alpha));
        sign = -sign;
        pw *= lambda;
        fact *= (k + 1);
    }
    return sum;
}

}  // namespace

TEST_CASE("psi agrees with its power series") {
    for (double alpha : {0.5, 1.5}) {
        LimitLawSpec spec(alpha, 0.0, 1, 1);
        for (double theta : {0.3, 1.0, 2.0}) {
            CHECK(std::abs(spec.psi(theta) - psi_series(alpha, theta)) < 1e-8);
            CHECK(std::abs(spec.psi(-theta) - std::conj(spec.psi(theta))) < 1e-13);
            CHECK(spec.psi(theta).real() <= 1e-12);
        }
    }
    // two-sided measure (positive side truncated at 1, negative side full):
    // conjugate symmetry and nonpositive real part still hold
    LimitLawSpec sym(0.5, 0.5, 1, 1);
    CHECK(std::abs(sym.psi(-1.0) - std::conj(sym.psi(1.0))) < 1e-12);
    CHECK(sym.psi(1.0).real() <= 1e-12);
}

TEST_CASE("subordinator exponent agrees with its alternating series") {
    LimitLawSpec spec(0.5, 0.0, 1, 1, true);
    for (double lam : {0.5, 1.0, 2.0})
        CHECK(spec.subordinator_exponent(lam) ==
              doctest::Approx(psi_laplace_series(0.5, lam)).epsilon(1e-8));
}

TEST_CASE("cf_W_gamma is multiplicative in the index") {
    LimitLawSpec spec(0.5, 0.2, 1, 1);
    for (double theta : {0.7, 3.0}) {
        auto a = cf_W_gamma(spec, theta, 1.5);
        auto b = cf_W_gamma(spec, theta, 2.5);
        auto c = cf_W_gamma(spec, theta, 4.0);
        CHECK(std::abs(a * b - c) < 1e-12);
    }
}

TEST_CASE("single-ratio CF reduces to the closed form at n=1") {
    for (double alpha : {0.5, 1.5})
        for (int r : {0, 1, 3}) {
            LimitLawSpec spec(alpha, 0.0, r, 1);
            for (double theta : {0.4, 1.1}) {
                std::complex<double> want =
                    std::exp(std::complex<double>(0.0, theta)) *
                    std::pow(1.0 - spec.psi(theta), -double(r + 1));
                CHECK(std::abs(limit_cf_single(spec, theta) - want) < 1e-12);
            }
        }
}

TEST_CASE("sampled W matches its CF") {
    LimitLawSpec spec(0.5, 0.0, 1, 1);
    RngStream rng(31, 0);
    double v = 2.0, theta = 1.2;
    const int n = 20000;
    std::complex<double> emp = 0.0;
    double sq = 0.0;
    for (int d = 0; d < n; ++d) {
        double w = sample_W(spec, v, rng);
        std::complex<double> z(std::cos(theta * w), std::sin(theta * w));
        emp += z;
        sq += 1.0;
    }
    emp /= double(n);
    std::complex<double> want = std::exp(v * spec.psi(theta));
    double se = std::sqrt((1.0 - std::norm(emp)) / n);
    CHECK(std::abs(emp - want) < 4.0 * se + 1e-3);
}

TEST_CASE("order statistic law") {
    RngStream rng(37, 0);
    OrderStatLaw law{0.5, 0.0, 1};
    std::vector<double> draws(20000);
    for (auto& d : draws) d = sample_order_stats(law, rng)[0];
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        double f = 1.0 - std::pow(draws[i], -0.5);  // Pareto on [1, inf)
        ks = std::max(ks, std::fabs((i + 1.0) / draws.size() - f));
        ks = std::max(ks, std::fabs(f - double(i) / draws.size()));
    }
    CHECK(ks < kolmogorov_q_inv(0.001) / std::sqrt(20000.0));
    // truncated law stays in [1, 1/u]
    OrderStatLaw trunc{0.5, 0.25, 5};
    for (int d = 0; d < 200; ++d) {
        auto v = sample_order_stats(trunc, rng);
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(v[i] >= 1.0);
            CHECK(v[i] <= 4.0 + 1e-12);
            if (i > 0) CHECK(v[i] <= v[i - 1]);
        }
    }
}

TEST_CASE("laplace transform of the trimmed subordinator limit") {
    LimitLawSpec spec(0.5, 0.0, 2, 1, true);
    double lam = 1.0;
    double want = std::pow(1.0 + spec.subordinator_exponent(lam), -2.0);
    CHECK(limit_laplace(spec, lam) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("CF inversion recovers the Gamma(2,1) CDF") {
    std::vector<double> xs;
    for (double x = 0.1; x <= 10.0 + 1e-9; x += 0.1) xs.push_back(x);
    auto fs = cdf_from_cf(
        [](double th) { return std::pow(std::complex<double>(1.0, -th), -2.0); }, xs, 200.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        worst = std::max(worst, std::fabs(fs[i] - lower_reg_gamma(2.0, xs[i])));
    CHECK(worst < 1e-3);
}

TEST_CASE("joint CF branches agree (smoke)") {
    LimitLawSpec spec(0.5, 0.0, 1, 2);
    std::vector<double> theta = {0.5, 0.3};
    RngStream r1(41, 0), r2(41, 1);
    auto a = limit_cf_joint(spec, theta, JointCfBranch::OrderStat, 20000, r1);
    auto b = limit_cf_joint(spec, theta, JointCfBranch::WGamma, 20000, r2);
    double tol = 3.0 * (a.std_error + b.std_error) + 1e-3;
    CHECK(std::abs(a.value - b.value) < tol);
}
