#include <cmath>
#include <complex>

#include "doctest.h"
#include "trimlevy/levy_model.hpp"
#include "trimlevy/quadrature.hpp"
#include "trimlevy/special.hpp"

using namespace trimlevy;

TEST_CASE("catalogue tails") {
    auto ps = make_pure_stable(0.7);
    CHECK(ps.positive_tail(2.0) == doctest::Approx(std::pow(2.0, -0.7)).epsilon(1e-14));
    auto ts = make_tempered_stable(0.5);
    CHECK(ts.positive_tail(1.5) ==
          doctest::Approx(std::pow(1.5, -0.5) * std::exp(-1.5)).epsilon(1e-14));
    auto gs = make_gamma_subordinator();
    CHECK(gs.positive_tail(0.8) == doctest::Approx(exp_integral_e1(0.8)).epsilon(1e-12));
}

TEST_CASE("tail is the integral of the density") {
    for (auto model : {make_pure_stable(1.2, 0.5), make_tempered_stable(0.5),
                       make_gamma_subordinator()}) {
        double a = 0.3, b = 2.0;
        auto q = adaptive_gk<double>([&](double x) { return model.positive_density(x); }, a, b,
                                     1e-12);
        CHECK(model.positive_tail(a) - model.positive_tail(b) ==
              doctest::Approx(q.value).epsilon(1e-9));
        if (model.a_minus > 0.0) {
            auto qn = adaptive_gk<double>([&](double u) { return model.negative_density(u); },
                                          a, b, 1e-12);
            CHECK(model.negative_tail(a) - model.negative_tail(b) ==
                  doctest::Approx(qn.value).epsilon(1e-9));
        }
    }
}

TEST_CASE("generalized inverse sandwich") {
    auto atomic = make_atomic_stable(0.5, {{1.0, 0.4}, {2.0, 0.25}});
    for (auto model : {make_pure_stable(0.5), make_tempered_stable(0.8),
                       make_gamma_subordinator(), atomic}) {
        for (double y : {0.01, 0.3, 0.9, 1.4, 3.0, 10.0}) {
            double x = model.inverse_positive_tail(y);
            CHECK(model.positive_tail(x) <= y * (1.0 + 1e-10) + 1e-14);
            CHECK(model.positive_tail_left(x) >= y * (1.0 - 1e-10) - 1e-14);
        }
        for (double x : {0.2, 1.5, 4.0})
            CHECK(model.inverse_positive_tail(model.positive_tail(x)) ==
                  doctest::Approx(x).epsilon(1e-8));
    }
}

TEST_CASE("atom plateau maps to the atom location") {
    auto m = make_atomic_stable(0.5, {{2.0, 0.3}});
    double lo = m.positive_tail(2.0);        // right limit, below the jump
    double hi = m.positive_tail_left(2.0);   // left limit, above
    CHECK(hi - lo == doctest::Approx(0.3).epsilon(1e-12));
    for (double y : {lo + 1e-12, 0.5 * (lo + hi), hi - 1e-12})
        CHECK(m.inverse_positive_tail(y) == 2.0);
}

TEST_CASE("truncated moments against quadrature") {
    // substitution x = u^4 softens the x^-alpha endpoint singularity so the
    // quadrature oracle is trustworthy
    auto mom = [](const LevyModel& model, double eps, int power) {
        return adaptive_gk<double>(
                   [&](double u) {
                       double x = u * u * u * u;
                       return std::pow(x, power) * model.positive_density(x) * 4.0 * u * u * u;
                   },
                   0.0, std::pow(eps, 0.25), 1e-12)
            .value;
    };
    for (auto model : {make_pure_stable(0.5), make_tempered_stable(0.7),
                       make_gamma_subordinator()}) {
        for (double eps : {0.05, 0.4, 1.0}) {
            CHECK(model.truncated_moment1(eps) ==
                  doctest::Approx(mom(model, eps, 1)).epsilon(1e-7));
            CHECK(model.truncated_moment2(eps) ==
                  doctest::Approx(mom(model, eps, 2)).epsilon(1e-7));
        }
    }
    // for alpha >= 1 the stable first moment diverges at the origin
    CHECK(std::isinf(make_pure_stable(1.3).truncated_moment1(0.5)));
    CHECK(std::isfinite(make_pure_stable(1.3).truncated_moment2(0.5)));
    // band moments stay finite away from the origin, any alpha
    for (auto model : {make_pure_stable(0.5), make_pure_stable(1.5), make_tempered_stable(0.7)}) {
        auto band = adaptive_gk<double>(
            [&](double x) { return x * model.positive_density(x); }, 0.02, 0.8, 1e-12);
        CHECK(model.band_moment1(0.02, 0.8) == doctest::Approx(band.value).epsilon(1e-8));
    }
    auto two_sided = make_pure_stable(1.5, 0.4);
    auto bandn = adaptive_gk<double>(
        [&](double u) { return u * two_sided.negative_density(u); }, 0.02, 0.8, 1e-12);
    CHECK(two_sided.band_moment1_neg(0.02, 0.8) == doctest::Approx(bandn.value).epsilon(1e-8));
    auto atomic = make_atomic_stable(0.5, {{0.3, 0.2}});
    // atom below eps contributes location * mass
    CHECK(atomic.truncated_moment1(0.5) ==
          doctest::Approx(make_pure_stable(0.5).truncated_moment1(0.5) + 0.3 * 0.2)
              .epsilon(1e-10));
}

TEST_CASE("centering rho closed form for the compensated stable model") {
    for (double alpha : {0.5, 1.2}) {
        auto m = make_pure_stable(alpha);
        for (double w : {0.2, 0.7, 1.0, 1.8, 5.0}) {
            double want = alpha * (std::pow(w, 1.0 - alpha) - 1.0) / (1.0 - alpha);
            CHECK(m.centering_rho(w) == doctest::Approx(want).epsilon(1e-8));
        }
    }
}

TEST_CASE("truncated exponential moment at theta zero is the tail mass") {
    auto m = make_tempered_stable(0.6);
    auto z = m.truncated_exp_moment(0.0, 0.5, 2.0);
    CHECK(z.real() ==
          doctest::Approx(m.positive_tail(0.5) - m.positive_tail(2.0)).epsilon(1e-10));
    CHECK(z.imag() == doctest::Approx(0.0));
}

TEST_CASE("cf exponent kernel against direct quadrature") {
    auto m = make_pure_stable(0.5, 0.4);  // two-sided compensated
    double theta = 1.3, y = 2.0;
    auto dens_term = [&](double x) {
        std::complex<double> e(std::cos(theta * x) - 1.0, std::sin(theta * x));
        if (std::fabs(x) <= 1.0) e -= std::complex<double>(0.0, theta * x);
        double dens = x > 0.0 ? m.positive_density(x) : m.negative_density(-x);
        return e * dens;
    };
    auto pos1 = adaptive_gk<std::complex<double>>(dens_term, 0.0, 1.0, 1e-11);
    auto pos2 = adaptive_gk<std::complex<double>>(dens_term, 1.0, y, 1e-11);
    auto neg1 = adaptive_gk<std::complex<double>>(dens_term, -1.0, 0.0, 1e-11);
    auto neg2 = adaptive_gk<std::complex<double>>(dens_term, -60.0, -1.0, 1e-11, 20000);
    // tail below -60 in closed form: int e^{i theta x} - 1 against the
    // reflected stable density
    double big = 60.0;
    std::complex<double> far = m.neg_ratio() * (std::conj(stable_tail_cf(m.alpha, theta, big)) -
                                                std::pow(big, -m.alpha));
    std::complex<double> want = pos1.value + pos2.value + neg1.value + neg2.value + far;
    auto got = m.cf_exponent_kernel(theta, y, 1.0);
    CHECK(std::abs(got - want) < 1e-7);
}

TEST_CASE("cf exponent subordinator against direct quadrature") {
    auto m = make_tempered_stable(0.5);
    double theta = 0.9, y = 1.7;
    auto q = adaptive_gk<std::complex<double>>(
        [&](double x) {
            std::complex<double> e(std::cos(theta * x) - 1.0, std::sin(theta * x));
            return e * m.positive_density(x);
        },
        0.0, y, 1e-11);
    CHECK(std::abs(m.cf_exponent_subordinator(theta, y) - q.value) < 1e-8);
}

TEST_CASE("json round trip and unknown-field rejection") {
    auto m = make_atomic_stable(0.8, {{1.5, 0.2}});
    m.gamma_shift = 0.3;
    m.sigma2 = 0.5;
    auto back = LevyModel::from_json_text(m.to_json_text());
    CHECK(back.kind == m.kind);
    CHECK(back.alpha == m.alpha);
    CHECK(back.gamma_shift == m.gamma_shift);
    CHECK(back.sigma2 == m.sigma2);
    CHECK(back.atoms.size() == 1);
    CHECK(back.atoms[0].location == 1.5);
    CHECK_THROWS_AS(LevyModel::from_json_text("{\"kind\":\"stable\",\"bogus\":1}"),
                    std::invalid_argument);
}

TEST_CASE("regular variation diagnostic is exactly constant for pure stable") {
    auto m = make_pure_stable(0.5);
    std::vector<double> ts = {1.0, 0.1, 0.01, 1e-4};
    auto d = regular_variation_diagnostic(m, 2.0, 1.0, ts);
    for (const auto& row : d.rows)
        CHECK(row.value == doctest::Approx(d.limit).epsilon(1e-12));
    CHECK(d.converged);
}
