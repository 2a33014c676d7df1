#include <doctest.h>

#include <cmath>

#include "nlrd/errors.hpp"
#include "nlrd/quadrature.hpp"
#include "nlrd/rng.hpp"
#include "nlrd/specialfns.hpp"

using namespace nlrd;
namespace sf = specialfns;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

// independent oracle: straightforward double-precision power series
double bessel_j_series_oracle(double nu, double x) {
    double term = std::pow(x / 2.0, nu) / std::tgamma(nu + 1.0);
    double sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= -(x * x / 4.0) / (m * (nu + m));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}
}  // namespace

TEST_CASE("gamma basic values") {
    CHECK(sf::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sf::gamma(0.5) == doctest::Approx(1.772453850905516).epsilon(1e-14));
    CHECK(sf::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK_THROWS_AS(sf::gamma(0.0), PoleError);
    CHECK_THROWS_AS(sf::gamma(-3.0), PoleError);
    CHECK(sf::gamma(-0.5) == doctest::Approx(-2.0 * std::sqrt(kPi)).epsilon(1e-13));
}

TEST_CASE("gamma recurrence property") {
    rng::Philox gen(7);
    for (int i = 0; i < 200; ++i) {
        const double x = 0.1 + 9.9 * gen.uniform();
        CHECK(sf::gamma(x + 1.0) ==
              doctest::Approx(x * sf::gamma(x)).epsilon(1e-12));
    }
}

TEST_CASE("upper incomplete gamma against quadrature oracle") {
    // Gamma(2,1): adaptive integration of the defining integral
    auto integrand = [](double s) { return s * std::exp(-s); };
    const double oracle = quad::integrate(integrand, 1.0, 60.0, 1e-14, 1e-13).value;
    CHECK(sf::upper_incomplete_gamma(2.0, 1.0) ==
          doctest::Approx(oracle).epsilon(1e-12));
    CHECK(oracle == doctest::Approx(0.7357588823428847).epsilon(1e-12));
}

TEST_CASE("upper incomplete gamma closed forms and limits") {
    CHECK(sf::upper_incomplete_gamma(2.5, 0.0) ==
          doctest::Approx(sf::gamma(2.5)).epsilon(1e-14));
    for (double x : {0.2, 1.0, 7.0, 30.0})
        CHECK(sf::upper_incomplete_gamma(1.0, x) ==
              doctest::Approx(std::exp(-x)).epsilon(1e-13));
    CHECK_THROWS_AS(sf::upper_incomplete_gamma(-0.5, 0.0), DivergenceError);
}

TEST_CASE("incomplete gamma splitting property") {
    rng::Philox gen(11);
    for (int i = 0; i < 60; ++i) {
        const double a = 0.1 + 5.9 * gen.uniform();
        const double x = 0.05 + 19.9 * gen.uniform();
        // lower part: series on [0, delta] to tame the s^{a-1} endpoint,
        // quadrature on the smooth remainder
        const double delta = std::min(0.1, 0.5 * x);
        double head = 0.0, dn = std::pow(delta, a), fact = 1.0;
        for (int n = 0; n < 40; ++n) {
            const double term = dn / (fact * (a + n));
            head += (n % 2 == 0 ? term : -term);
            dn *= delta;
            fact *= (n + 1);
            if (term < 1e-17 * std::abs(head)) break;
        }
        auto f = [a](double s) { return std::pow(s, a - 1.0) * std::exp(-s); };
        const double lower =
            head + quad::integrate(f, delta, x, 1e-15, 1e-13, 20000).value;
        CHECK(sf::upper_incomplete_gamma(a, x) + lower ==
              doctest::Approx(sf::gamma(a)).epsilon(1e-10));
    }
}

TEST_CASE("incomplete gamma analytic continuation for a <= 0") {
    // recurrence consistency: Gamma(a+1,x) = a Gamma(a,x) + x^a e^{-x}
    for (double a : {-0.4, -1.3, -2.7, 0.0, -2.0}) {
        for (double x : {0.3, 1.5, 8.0}) {
            const double lhs = sf::upper_incomplete_gamma(a + 1.0, x);
            const double rhs = a * sf::upper_incomplete_gamma(a, x) +
                               std::pow(x, a) * std::exp(-x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("bessel_j power-series oracle and known value") {
    CHECK(sf::bessel_j(1.0, 1.0) ==
          doctest::Approx(bessel_j_series_oracle(1.0, 1.0)).epsilon(1e-13));
    CHECK(sf::bessel_j(1.0, 1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-12));
    CHECK(sf::bessel_j(0.0, 0.0) == 1.0);
    CHECK(sf::bessel_j(2.3, 0.0) == 0.0);
    for (double nu : {0.0, 0.7, 2.0, 3.6, 5.0})
        for (double x : {0.5, 3.0, 9.0, 13.0})
            CHECK(sf::bessel_j(nu, x) ==
                  doctest::Approx(bessel_j_series_oracle(nu, x)).epsilon(1e-10));
}

TEST_CASE("bessel half-integer identities across the switch-over") {
    for (double x = 1e-6; x < 40.0; x *= 1.7) {
        const double jref = std::sqrt(2.0 / (kPi * x)) * std::sin(x);
        CHECK(std::abs(sf::bessel_j(0.5, x) - jref) <=
              1e-12 * std::max(1.0, std::abs(jref)));
        const double kref = std::sqrt(kPi / (2.0 * x)) * std::exp(-x);
        CHECK(sf::bessel_k(0.5, x) == doctest::Approx(kref).epsilon(1e-12));
    }
    CHECK(sf::bessel_k(0.5, 2.0) ==
          doctest::Approx(std::sqrt(kPi / 4.0) * std::exp(-2.0)).epsilon(1e-13));
}

TEST_CASE("bessel_k integral-representation oracle") {
    // K_0(x) = int_0^inf exp(-x cosh t) dt
    auto k0 = [](double x) {
        return quad::integrate([x](double t) { return std::exp(-x * std::cosh(t)); },
                               0.0, 30.0, 1e-15, 1e-13, 8000)
            .value;
    };
    CHECK(sf::bessel_k(0.0, 1.0) == doctest::Approx(k0(1.0)).epsilon(1e-12));
    CHECK(sf::bessel_k(0.0, 1.0) == doctest::Approx(0.42102443824070834).epsilon(1e-12));
    for (double x : {0.3, 2.5, 10.0})
        CHECK(sf::bessel_k(0.0, x) == doctest::Approx(k0(x)).epsilon(1e-11));
}

TEST_CASE("bessel_k recurrence across orders") {
    // K_{nu+1}(x) = 2 nu K_nu(x)/x + K_{nu-1}(x)
    for (double nu : {1.0, 1.7, 3.2})
        for (double x : {0.4, 1.0, 5.0, 20.0}) {
            const double lhs = sf::bessel_k(nu + 1.0, x);
            const double rhs =
                2.0 * nu * sf::bessel_k(nu, x) / x + sf::bessel_k(nu - 1.0, x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
    CHECK_THROWS_AS(sf::bessel_k(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(sf::bessel_k(0.5, -1.0), DomainError);
}

TEST_CASE("sphere geometry") {
    CHECK(sf::sphere_surface(3.0) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
    CHECK(sf::ball_volume(3.0) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
    CHECK(sf::sphere_surface(2.0) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(sf::ball_volume(2.0) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(sf::sphere_surface(1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sf::ball_volume(1.0) == doctest::Approx(2.0).epsilon(1e-14));
    for (int d = 1; d <= 8; ++d)
        CHECK(sf::sphere_surface(d) ==
              doctest::Approx(d * sf::ball_volume(d)).epsilon(1e-13));
}
