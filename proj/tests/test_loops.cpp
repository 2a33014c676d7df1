#include <doctest.h>

#include <cmath>

#include "nlrd/errors.hpp"
#include "nlrd/loops.hpp"
#include "nlrd/specialfns.hpp"

using namespace nlrd;
using namespace nlrd::loops;
namespace sf = specialfns;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

TEST_CASE("i1 is R t") {
    CHECK(i1(1.0, 2.0) == 2.0);
    CHECK(i1(3.0, 0.0) == 0.0);
    CHECK(i1(0.0, 5.0) == 0.0);
    CHECK_THROWS_AS(i1(1.0, -1.0), DomainError);
}

TEST_CASE("quadrature reproduces the local closed form below d = 2") {
    const Kernel local(Profile::Local, 1.0, 1.0, 1.0);
    for (double d : {1.0, 1.5}) {
        for (double t : {0.5, 1.0, 4.0}) {
            const double quadv = i2_quadrature(local, 1.0, d, t).value;
            const double closed = i2_local_closed(1.0, 1.0, d, t).value;
            CHECK(quadv == doctest::Approx(closed).epsilon(1e-7));
        }
    }
    CHECK(i2_local_closed(1.0, 1.0, 1.0, 1.0).value ==
          doctest::Approx(1.0 / (std::sqrt(8.0 * kPi) * 3.0)).epsilon(1e-13));
}

TEST_CASE("local kernel diverges from d = 2") {
    const Kernel local(Profile::Local, 1.0, 1.0, 3.0);
    CHECK_THROWS_AS(i2_quadrature(local, 1.0, 3.0, 1.0), DivergenceError);
    CHECK_THROWS_AS(i2_quadrature(local, 1.0, 2.0, 1.0), DivergenceError);
    CHECK_THROWS_AS(i2_local_closed(1.0, 1.0, 2.5, 1.0), DivergenceError);
}

TEST_CASE("normal closed form vs quadrature") {
    for (double d : {1.0, 2.5, 3.0, 4.0}) {
        for (double lam : {0.5, 2.0}) {
            for (double t : {0.1, 1.0, 10.0}) {
                const Kernel kn(Profile::Normal, 1.0, lam, std::max(d, 1.0));
                CHECK(i2_normal_closed(1.0, lam, 1.0, d, t).value ==
                      doctest::Approx(i2_quadrature(kn, 1.0, d, t).value)
                          .epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("normal closed form small-t series and local limit") {
    // leading term R^2 lam^d t^2 / (2 (8 pi)^{d/2})
    const double lam = 2.0, d = 3.0, t = 1e-8;
    const double lead = std::pow(lam, d) * t * t / (2.0 * std::pow(8.0 * kPi, 0.5 * d));
    CHECK(i2_normal_closed(1.0, lam, 1.0, d, t).value ==
          doctest::Approx(lead).epsilon(1e-4));
    // lam -> inf at d=1 approaches the local closed form
    const double local = i2_local_closed(1.0, 1.0, 1.0, 1.0).value;
    CHECK(i2_normal_closed(1.0, 1e5, 1.0, 1.0, 1.0).value ==
          doctest::Approx(local).epsilon(1e-4));
}

TEST_CASE("normal closed form removable dimensions") {
    for (double d0 : {2.0, 4.0}) {
        const double at_limit = i2_normal_closed(1.0, 1.3, 0.7, d0, 2.0).value;
        for (double dd : {d0 - 1e-7, d0 + 1e-7}) {
            CHECK(i2_normal_closed(1.0, 1.3, 0.7, dd, 2.0).value ==
                  doctest::Approx(at_limit).epsilon(1e-5));
        }
    }
}

TEST_CASE("screened closed form vs quadrature") {
    for (double d : {1.0, 2.5, 3.0, 4.0}) {
        for (double lam : {0.5, 2.0}) {
            for (double t : {0.1, 1.0, 10.0}) {
                const Kernel ks(Profile::ScreenedPoisson, 1.0, lam, std::max(d, 1.0));
                CHECK(i2_screened_closed(1.0, lam, 1.0, d, t).value ==
                      doctest::Approx(i2_quadrature(ks, 1.0, d, t).value)
                          .epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("screened closed form limits and divergences") {
    const double local = i2_local_closed(1.0, 1.0, 1.0, 1.0).value;
    CHECK(i2_screened_closed(1.0, 1e5, 1.0, 1.0, 1.0).value ==
          doctest::Approx(local).epsilon(1e-4));
    CHECK(std::isfinite(i2_screened_closed(1.0, 1.0, 1.0, 4.0, 3.0).value));
    CHECK_THROWS_AS(i2_screened_closed(1.0, 1.0, 1.0, 6.0, 0.01), DivergenceError);
    CHECK_THROWS_AS(i2_screened_closed(1.0, 1.0, 1.0, 8.0, 1.0), DivergenceError);
    for (double d0 : {2.0, 4.0}) {
        const double at_limit = i2_screened_closed(1.0, 0.8, 1.2, d0, 1.5).value;
        for (double dd : {d0 - 1e-7, d0 + 1e-7})
            CHECK(i2_screened_closed(1.0, 0.8, 1.2, dd, 1.5).value ==
                  doctest::Approx(at_limit).epsilon(1e-5));
    }
}

TEST_CASE("i2 grows with t and with R") {
    const Kernel kn(Profile::Normal, 1.0, 1.0, 3.0);
    double prev = 0.0;
    for (double t : {0.1, 0.5, 2.0, 8.0}) {
        const double v = i2_normal_closed(1.0, 1.0, 1.0, 3.0, t).value;
        CHECK(v > prev);
        prev = v;
    }
    CHECK(i2_normal_closed(2.0, 1.0, 1.0, 3.0, 1.0).value ==
          doctest::Approx(4.0 * i2_normal_closed(1.0, 1.0, 1.0, 3.0, 1.0).value));
    CHECK(i2_quadrature(kn, 1.0, 3.0, 1.0).est_error > 0.0);
}

TEST_CASE("UV regulation ordering at d = 3") {
    const Kernel local(Profile::Local, 1.0, 1.0, 3.0);
    CHECK_THROWS_AS(i2_quadrature(local, 1.0, 3.0, 1.0), DivergenceError);
    CHECK(std::isfinite(i2_normal_closed(1.0, 1.0, 1.0, 3.0, 1.0).value));
    CHECK(std::isfinite(i2_screened_closed(1.0, 1.0, 1.0, 3.0, 1.0).value));
}

TEST_CASE("effective coupling and IR divergence below d = 2") {
    // local d=1: exact t^{1/2} growth
    const Kernel local(Profile::Local, 1.0, 1.0, 1.0);
    const double r1 = effective_coupling(local, 1.0, 1.0, 100.0);
    const double r2 = effective_coupling(local, 1.0, 1.0, 400.0);
    CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-10));
    // IR growth at large t for every profile at d = 1
    for (Profile p : {Profile::Local, Profile::Normal, Profile::ScreenedPoisson,
                      Profile::Spherical}) {
        const Kernel kern(p, 1.0, 1.0, 1.0);
        CHECK(effective_coupling(kern, 1.0, 1.0, 1e4) >
              effective_coupling(kern, 1.0, 1.0, 1e2));
    }
}

TEST_CASE("spherical small-t coupling slope near 3/2") {
    const Kernel sph(Profile::Spherical, 1.0, 1.0, 3.0);
    const double t1 = 1e-4, t2 = 1e-3;
    const double s = std::log(effective_coupling(sph, 1.0, 3.0, t2) /
                              effective_coupling(sph, 1.0, 3.0, t1)) /
                     std::log(t2 / t1);
    CHECK(s == doctest::Approx(1.5).epsilon(0.05));
}

TEST_CASE("crossover timescale") {
    CHECK(crossover_time(Kernel(Profile::Normal, 1.0, 1.0, 1.0), 1.0) ==
          doctest::Approx(0.25));
    CHECK(crossover_time(Kernel(Profile::Normal, 1.0, 1e4, 1.0), 1.0) < 1e-7);
    CHECK(std::isinf(crossover_time(Kernel(Profile::Local, 1.0, 1.0, 1.0), 1.0)));
    CHECK(crossover_time(Kernel(Profile::ScreenedPoisson, 1.0, 2.0, 1.0), 1.0) ==
          doctest::Approx(0.125));
}

TEST_CASE("x1 loop zero rate and scaling collapse") {
    CHECK(x1_loop(1.0, Kernel(Profile::Normal, 0.0, 1.0, 1.0), 1.0, 1.0, 1.0).value ==
          0.0);
    const double d = 1.0, t = 2.0;
    const Kernel base(Profile::Normal, 1.0, 1.0, d);
    const double ref = x1_loop(t, base, 1.0, 1.0, d, 1e-5).value;
    const double gamma = 0.5;
    const Kernel scaled(Profile::Normal, std::pow(gamma, d - 2.0), 1.0 / gamma, d);
    const double collapsed =
        std::pow(gamma, d) *
        x1_loop(t * gamma * gamma, scaled, std::pow(gamma, -d), 1.0, d, 1e-5).value;
    CHECK(collapsed == doctest::Approx(ref).epsilon(1e-3));
}

TEST_CASE("x1 loop approaches the one-loop amplitude below d = 2") {
    // qualitative: t^{d/2} X1 stays within a factor of the 1/g* level and
    // settles as Rn0t grows
    const double d = 1.9;
    const Kernel kern(Profile::Normal, 1.0, 1.0, d);
    const double v1 = std::pow(50.0, 0.5 * d) *
                      x1_loop(50.0, kern, 10.0, 1.0, d, 1e-5).value;
    const double v2 = std::pow(100.0, 0.5 * d) *
                      x1_loop(100.0, kern, 10.0, 1.0, d, 1e-5).value;
    const double gs = std::pow(4.0 * kPi, 1.0 - 0.05) / sf::gamma(0.05);
    CHECK(v1 > 0.2 / gs);
    CHECK(v1 < 4.0 / gs);
    CHECK(std::abs(v2 - v1) < 0.35 * std::abs(v1));  // settling, not drifting
}

TEST_CASE("single-loop tadpole against the d = 1 closed oracle") {
    // local kernels, F = k^2 + taubar: value = -D g^2 X / (2 sqrt(taubar))
    const double d = 1.0, D = 1.3, g = 0.7, X = 0.4;
    PropagatorParams p{D, 0.9, Kernel(Profile::Local, 0.0, 1.0, d),
                       Kernel(Profile::Local, 0.0, 1.0, d), g, X};
    const double tau_bar = 0.9 + 2.0 * g * X;
    const LoopResult r = single_loop_tadpole(p, d);
    CHECK(r.value ==
          doctest::Approx(-D * g * g * X / (2.0 * std::sqrt(tau_bar))).epsilon(1e-8));
    CHECK(r.est_error > 0.0);
}

TEST_CASE("single-loop tadpole divergences and special cases") {
    const double d = 3.0;
    PropagatorParams local{1.0, 0.5, Kernel(Profile::Local, 0.0, 1.0, d),
                           Kernel(Profile::Local, 0.0, 1.0, d), 0.3, 0.4};
    CHECK_THROWS_AS(single_loop_tadpole(local, 3.0), DivergenceError);
    PropagatorParams normal4{1.0, 0.5, Kernel(Profile::Normal, 0.0, 1.0, 4.0),
                             Kernel(Profile::Normal, 0.0, 1.0, 4.0), 0.3, 0.4};
    CHECK(std::isfinite(single_loop_tadpole(normal4, 4.0).value));
    PropagatorParams off = normal4;
    off.g = 0.0;
    CHECK(single_loop_tadpole(off, 4.0).value == 0.0);
    PropagatorParams crit = local;
    crit.M = -2.0;
    CHECK_THROWS_AS(single_loop_tadpole(crit, 1.0), CriticalPointError);
}

TEST_CASE("two-loop tadpole trivial zeros and strategies") {
    const double d = 3.5;
    PropagatorParams p{1.0, 0.2, Kernel(Profile::ScreenedPoisson, 0.0, 1.0, d),
                       Kernel(Profile::ScreenedPoisson, 1.0, 1.0, d), 0.0, 0.5};
    CHECK(two_loop_tadpole(p, d, AngularStrategy::local_q).value == 0.0);
    p.g = 0.4;
    p.X = 0.0;
    CHECK(two_loop_tadpole(p, d, AngularStrategy::mean_angle).value == 0.0);
    // both strategies give finite negative values off the critical point
    p.X = 0.5;
    p.M = 0.05 - 2.0 * p.g * p.X;  // taubar = 0.05
    const double v1 = two_loop_tadpole(p, d, AngularStrategy::local_q, 1e-4).value;
    const double v2 = two_loop_tadpole(p, d, AngularStrategy::mean_angle, 1e-4).value;
    CHECK(v1 < 0.0);
    CHECK(v2 < 0.0);
}

TEST_CASE("two-loop tadpole tau-bar scaling, coarse") {
    const double d = 3.5, g = 0.5, X = 0.5;
    auto value_at = [&](double tau_bar) {
        PropagatorParams p{1.0, tau_bar - 2.0 * g * X,
                           Kernel(Profile::ScreenedPoisson, 0.0, 1.0, d),
                           Kernel(Profile::ScreenedPoisson, 1.0, 1.0, d), g, X};
        return std::abs(two_loop_tadpole(p, d, AngularStrategy::local_q, 1e-4).value);
    };
    const double s = std::log(value_at(1e-1) / value_at(1e-3)) / std::log(100.0);
    CHECK(s == doctest::Approx(-0.5).epsilon(0.3));
}
