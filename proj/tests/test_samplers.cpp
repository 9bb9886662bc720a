#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "doctest.h"
#include "trimlevy/levy_model.hpp"
#include "trimlevy/rng.hpp"
#include "trimlevy/samplers.hpp"
#include "trimlevy/special.hpp"

using namespace trimlevy;

namespace {

double ks_stat(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    double n = sample.size(), d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::fabs((i + 1) / n - f));
        d = std::max(d, std::fabs(f - i / n));
    }
    return d;
}

double ks2(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(i / double(a.size()) - j / double(b.size())));
    }
    return d;
}

}  // namespace

TEST_CASE("gamma sequence is increasing and reproducible") {
    RngStream a(5, 0), b(5, 0);
    auto g1 = gamma_sequence(10, a);
    auto g2 = gamma_sequence(10, b);
    for (int i = 0; i < 10; ++i) {
        CHECK(g1[i] == g2[i]);
        if (i > 0) CHECK(g1[i] > g1[i - 1]);
    }
}

TEST_CASE("ordered jump marginals match the incomplete-gamma law") {
    // P(J_i <= x) = P(Gamma_i >= t x^-alpha) = Q(i, t x^-alpha)
    double alpha = 0.7, t = 0.8;
    auto model = make_pure_stable(alpha);
    RngStream rng(11, 0);
    const int n = 20000;
    std::vector<std::vector<double>> draws(3);
    for (int d = 0; d < n; ++d) {
        auto s = sample_ordered_jumps(model, t, 3, rng);
        CHECK(s.jumps[0] >= s.jumps[1]);
        CHECK(s.jumps[1] >= s.jumps[2]);
        for (int i = 0; i < 3; ++i) draws[i].push_back(s.jumps[i]);
    }
    double cut = kolmogorov_q_inv(0.001) / std::sqrt(double(n));
    for (int i = 0; i < 3; ++i) {
        double d = ks_stat(draws[i], [&](double x) {
            return upper_reg_gamma(i + 1, t * std::pow(x, -alpha));
        });
        CHECK(d < cut);
    }
}

TEST_CASE("gamma subordinator at t=1 is a unit exponential") {
    auto model = make_gamma_subordinator();
    RngStream rng(13, 0);
    const int n = 20000;
    std::vector<double> draws(n);
    for (int d = 0; d < n; ++d)
        draws[d] = sample_small_jump_remainder(
            model, std::numeric_limits<double>::infinity(), 1.0, rng);
    double ks = ks_stat(draws, [](double x) { return x > 0 ? 1.0 - std::exp(-x) : 0.0; });
    CHECK(ks < kolmogorov_q_inv(0.001) / std::sqrt(double(n)));
}

TEST_CASE("tie correction support and continuity") {
    auto atomic = make_atomic_stable(0.5, {{1.0, 0.5}});
    RngStream rng(3, 0);
    double b = atomic.positive_tail_left(1.0);
    double a = atomic.positive_tail(1.0);
    for (int i = 0; i < 200; ++i) {
        double v = a + rng.uniform() * (b - a);
        double g = sample_tie_correction(atomic, 1.0, v, 2.0, rng);
        CHECK(g >= 0.0);
        CHECK(std::fabs(g - std::round(g)) < 1e-12);  // multiples of y = 1
    }
    auto smooth = make_pure_stable(0.5);
    CHECK(sample_tie_correction(smooth, 1.5, smooth.positive_tail(1.5), 2.0, rng) == 0.0);
}

TEST_CASE("trimmed sample decomposition is exact") {
    auto model = make_atomic_stable(0.5, {{1.0, 0.5}});
    RngStream rng(17, 0);
    for (int d = 0; d < 200; ++d) {
        auto s = sample_trimmed(model, 1.0, 2, 3, rng);
        CHECK(s.rank == 2);
        CHECK(s.ordered.jumps.size() == 5);
        double sum = s.remainder + s.tie_correction;
        for (std::size_t i = 2; i < 5; ++i) sum += s.ordered.jumps[i];
        CHECK(s.trimmed_value == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("trimmed stable subordinator matches the exact series construction") {
    double alpha = 0.5, t = 1.0;
    int r = 1;
    auto model = make_pure_stable(alpha, 0.0, true);
    RngStream rng1(23, 0), rng2(23, 1);
    const int n = 5000;
    std::vector<double> a(n), b(n);
    for (int d = 0; d < n; ++d) {
        a[d] = sample_trimmed(model, t, r, 0, rng1).trimmed_value;
        b[d] = stable_series_trimmed(alpha, t, r, rng2);
    }
    CHECK(ks2(a, b) < kolmogorov_q_inv(0.001) * std::sqrt(2.0 / n));
}

TEST_CASE("ratio vector arithmetic") {
    auto model = make_pure_stable(0.5, 0.0, true);
    RngStream rng(29, 0);
    auto s = sample_trimmed(model, 1.0, 1, 2, rng);
    auto none = ratio_vector(s, model, 1, 2, Centering::None);
    CHECK(none.size() == 2);
    CHECK(none[0] == doctest::Approx(s.trimmed_value / s.ordered.jumps[1]).epsilon(1e-14));
    CHECK(none[1] == doctest::Approx(s.trimmed_value / s.ordered.jumps[2]).epsilon(1e-14));
    auto rho = ratio_vector(s, model, 1, 2, Centering::Rho);
    double c = 1.0 * model.centering_rho(s.ordered.jumps[2]);
    CHECK(rho[1] ==
          doctest::Approx((s.trimmed_value - c) / s.ordered.jumps[2]).epsilon(1e-12));
}

TEST_CASE("sampling is deterministic across reruns") {
    auto model = make_tempered_stable(0.5);
    RngStream a(99, 4), b(99, 4);
    for (int d = 0; d < 20; ++d) {
        auto sa = sample_trimmed(model, 0.3, 1, 1, a);
        auto sb = sample_trimmed(model, 0.3, 1, 1, b);
        CHECK(sa.trimmed_value == sb.trimmed_value);
        CHECK(sa.ordered.jumps == sb.ordered.jumps);
    }
}
