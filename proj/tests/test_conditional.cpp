#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "trimlevy/conditional.hpp"
#include "trimlevy/levy_model.hpp"
#include "trimlevy/rng.hpp"
#include "trimlevy/samplers.hpp"
#include "trimlevy/special.hpp"

using namespace trimlevy;

TEST_CASE("uniform order statistic box, hand-checked cases") {
    CHECK(uniform_order_stat_box({0.3}) == doctest::Approx(0.3).epsilon(1e-14));
    // two points: P(U_(1) <= a, U_(2) <= b) = b^2 - (b-a)^2 = 2ab - a^2
    double a = 0.2, b = 0.7;
    CHECK(uniform_order_stat_box({a, b}) ==
          doctest::Approx(2.0 * a * b - a * a).epsilon(1e-13));
    CHECK(uniform_order_stat_box({1.0, 1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("order statistic box against Monte Carlo") {
    std::vector<double> bounds = {0.15, 0.4, 0.55, 0.9};
    RngStream rng(43, 0);
    const int n = 200000;
    long hits = 0;
    for (int d = 0; d < n; ++d) {
        double u[4];
        for (auto& x : u) x = rng.uniform();
        std::sort(u, u + 4);
        bool ok = true;
        for (int k = 0; k < 4; ++k) ok = ok && (u[k] <= bounds[k]);
        if (ok) ++hits;
    }
    double p = uniform_order_stat_box(bounds);
    double se = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::fabs(double(hits) / n - p) < 4.0 * se);
}

TEST_CASE("jump ratio limit closed form vs Monte Carlo") {
    CHECK(conditional_jump_ratio_limit(0, 2, 1.0, {2.0}) == doctest::Approx(0.5).epsilon(1e-9));
    RngStream rng(47, 0);
    std::vector<double> x = {4.0, 2.0};
    double closed = conditional_jump_ratio_limit(1, 3, 0.5, x);
    auto mc = conditional_jump_ratio_mc(1, 3, 0.5, x, 200000, rng);
    CHECK(std::fabs(closed - mc.value.real()) < 3.5 * mc.std_error);
}

TEST_CASE("atom factor is one at continuity points") {
    auto m = make_pure_stable(0.5);
    RngStream rng(53, 0);
    ConditionSpec spec{1.0, 1, 1, {2.0}};
    auto k = k_factor(m, spec, 1.3, 100, rng);
    CHECK(k.value == std::complex<double>(1.0, 0.0));
    CHECK(k.std_error == 0.0);
}

TEST_CASE("atom factor against a plain Monte Carlo of the tie count") {
    auto m = make_atomic_stable(0.5, {{1.0, 0.5}});
    double t = 1.0, theta = 0.8, y = 1.0;
    ConditionSpec spec{t, 1, 1, {y}};
    RngStream rng(59, 0);
    auto k = k_factor(m, spec, theta, 40000, rng);

    // brute force: draw Gamma_1 | jump_1 = y (a truncated unit exponential),
    // then the Poisson tie count itself
    double lo = t * m.positive_tail(y), hi = t * m.positive_tail_left(y);
    double plo = 1.0 - std::exp(-lo), phi = 1.0 - std::exp(-hi);
    RngStream rng2(59, 1);
    std::complex<double> sum = 0.0;
    const int n = 200000;
    for (int d = 0; d < n; ++d) {
        double g = -std::log(1.0 - (plo + rng2.uniform() * (phi - plo)));
        double kappa = std::max(m.positive_tail_left(y) - g / t, 0.0);
        double extra = y * double(rng2.poisson(t * kappa));
        sum += std::complex<double>(std::cos(theta * extra), std::sin(theta * extra));
    }
    sum /= double(n);
    CHECK(std::abs(k.value - sum) < 4.0 * (k.std_error + 1.0 / std::sqrt(double(n))) + 2e-3);
}

TEST_CASE("conditional CF of the trimmed value matches the restricted sampler") {
    auto m = make_pure_stable(0.5);  // compensated, continuity everywhere
    double t = 1.0, theta = 1.1, y = 1.5;
    ConditionSpec spec{t, 1, 1, {y}};
    RngStream rng(61, 0);
    auto cf = conditional_cf_trimmed(m, spec, theta, 100, rng);
    CHECK(cf.std_error == 0.0);

    RngStream rng2(61, 1);
    const int n = 40000;
    std::complex<double> emp = 0.0;
    for (int d = 0; d < n; ++d) {
        double x = sample_small_jump_remainder(m, y, t, rng2);
        emp += std::complex<double>(std::cos(theta * x), std::sin(theta * x));
    }
    emp /= double(n);
    double se = std::sqrt(std::max(1.0 - std::norm(emp), 0.0) / n);
    CHECK(std::abs(cf.value - emp) < 4.0 * se + 2e-3);
}

TEST_CASE("conditional ratio CF input validation") {
    auto m = make_pure_stable(0.5);
    RngStream rng(67, 0);
    CHECK_THROWS_AS(
        conditional_cf_ratio(m, 1.0, 1, 2, {2.0, 1.0}, 0.5, 100, rng),  // needs n+1 levels
        std::invalid_argument);
    ConditionSpec bad{1.0, 2, 1, {1.0}};
    CHECK_THROWS_AS(bad.validate(m), std::invalid_argument);
}
