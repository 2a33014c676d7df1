#include <doctest.h>

#include <cmath>
#include <complex>

#include "nlrd/errors.hpp"
#include "nlrd/propagators.hpp"
#include "nlrd/quadrature.hpp"

using namespace nlrd;

namespace {
PropagatorParams make_pp(double D, double M, double Q, double g, double X,
                         Profile qp = Profile::Normal, Profile rp = Profile::Normal,
                         double lam_q = 1.0, double lam_r = 1.0, double d = 3.0) {
    return PropagatorParams{D, M, Kernel(qp, Q, lam_q, d), Kernel(rp, 0.0, lam_r, d),
                            g, X};
}
}  // namespace

TEST_CASE("bare propagator") {
    CHECK(bare_propagator(0.0, 3.7, 1.0, 0.0) == 1.0);
    CHECK(bare_propagator(1.0, 1.0, 1.0, 0.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(bare_propagator(1.0, -0.5, 1.0, 0.0) == 0.0);  // causality step
}

TEST_CASE("bare propagator semigroup") {
    for (double k : {0.0, 0.7, 2.0})
        for (double t1 : {0.2, 1.5})
            for (double t2 : {0.3, 2.5}) {
                const double lhs = bare_propagator(k, t1 + t2, 1.3, 0.4);
                const double rhs = bare_propagator(k, t1, 1.3, 0.4) *
                                   bare_propagator(k, t2, 1.3, 0.4);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            }
}

TEST_CASE("dressed propagator limits") {
    const double D = 1.0, M = 0.2;
    Kernel local_q(Profile::Local, D * 0.5, 1.0, 3.0);  // rate D*Q with Q = 0.5
    CHECK(dressed_propagator(1.0, 2.0, D, M, local_q) ==
          doctest::Approx(std::exp(-2.0 * D * (1.0 + M - 0.5))).epsilon(1e-14));
    Kernel off(Profile::Normal, 0.0, 1.0, 3.0);
    CHECK(dressed_propagator(0.8, 1.3, D, M, off) ==
          doctest::Approx(bare_propagator(0.8, 1.3, D, M)).epsilon(1e-15));
    // growing mode at k=0, M=0
    Kernel q(Profile::Normal, D * 0.7, 1.0, 3.0);
    CHECK(dressed_propagator(0.0, 2.0, D, 0.0, q) ==
          doctest::Approx(std::exp(2.0 * D * 0.7)).epsilon(1e-14));
    CHECK_THROWS_AS(dressed_propagator(1.0, -1.0, D, M, q), DomainError);
}

TEST_CASE("dressed propagator equals the Dyson partial-sum limit") {
    // partial sums in the branching propagator: the n-th frequency-space term
    // G0 (Q G0)^n inverts to (Q t)^n e^{-a t}/n!, so S_N is the truncated
    // exponential series; it must converge to the dressed form
    const double D = 1.0, M = 0.5;
    Kernel q(Profile::Normal, 0.4, 1.2, 3.0);
    for (auto [k, t] : {std::pair{0.3, 1.0}, {1.0, 2.0}, {2.0, 0.5}}) {
        const double a = D * (k * k + M);
        const double Q = q.momentum_space(k);
        double sum = 0.0, term = 1.0;
        for (int n = 0; n <= 40; ++n) {
            sum += term * std::exp(-a * t);
            term *= Q * t / (n + 1);
        }
        CHECK(sum == doctest::Approx(dressed_propagator(k, t, D, M, q)).epsilon(1e-6));
    }
}

TEST_CASE("response functional") {
    Kernel local(Profile::Local, 0.9, 1.0, 1.0);
    const double D = 1.0, n0 = 0.8;
    // local kernel: exponent exactly 2
    for (double k : {0.0, 1.3}) {
        const double got = response_functional(k, 0.5, 2.0, local, n0, D);
        const double ratio = (1.0 + 0.9 * n0 * 0.5) / (1.0 + 0.9 * n0 * 2.0);
        CHECK(got == doctest::Approx(std::exp(-D * k * k * 1.5) * ratio * ratio)
                         .epsilon(1e-14));
    }
    // k = 0 with any normalized kernel: exponent 2
    Kernel norm(Profile::Normal, 2.0, 1.0, 1.0);
    const double r0 = (1.0 + 2.0 * n0 * 0.2) / (1.0 + 2.0 * n0 * 1.7);
    CHECK(response_functional(0.0, 0.2, 1.7, norm, n0, D) ==
          doctest::Approx(r0 * r0).epsilon(1e-14));
    // identity interval
    CHECK(response_functional(0.9, 1.1, 1.1, norm, n0, D) == doctest::Approx(1.0));
    // n0 -> 0 reduces to the bare propagator
    CHECK(response_functional(0.7, 0.3, 1.9, norm, 1e-12, D) ==
          doctest::Approx(bare_propagator(0.7, 1.6, D, 0.0)).epsilon(1e-9));
    CHECK_THROWS_AS(response_functional(0.1, 2.0, 1.0, norm, n0, D), DomainError);
}

TEST_CASE("f_factor forms") {
    // local kernels: k^2 + M - Q + 2 g X
    PropagatorParams lp = make_pp(1.0, 0.3, 0.2, 0.4, 0.5, Profile::Local,
                                  Profile::Local);
    for (double k : {0.0, 1.0, 3.0})
        CHECK(f_factor(k, lp) ==
              doctest::Approx(k * k + 0.3 - 0.2 + 2.0 * 0.4 * 0.5).epsilon(1e-14));
    // decaying kernels: k^2 + M + gX asymptotically
    PropagatorParams np = make_pp(1.0, 0.3, 0.2, 0.4, 0.5);
    const double k = 40.0;
    CHECK(f_factor(k, np) ==
          doctest::Approx(k * k + 0.3 + 0.4 * 0.5).epsilon(1e-10));
    // g = 0, Q = 0
    PropagatorParams zp = make_pp(1.0, 0.3, 0.0, 0.0, 0.5);
    CHECK(f_factor(2.0, zp) == doctest::Approx(4.0 + 0.3).epsilon(1e-14));
}

TEST_CASE("mean-centred propagators") {
    PropagatorParams p = make_pp(1.3, 0.4, 0.1, 0.6, 0.7);
    const double k = 0.8;
    const double F = f_factor(k, p);
    // phi-phi is symmetric in t and matches the t=0 value
    CHECK(phi_phi(k, 1.1, p) == doctest::Approx(phi_phi(k, -1.1, p)).epsilon(1e-14));
    CHECK(phi_phi(k, 0.0, p) ==
          doctest::Approx(0.6 * 0.7 * p.Qk.momentum_shape(k) / F).epsilon(1e-14));
    PropagatorParams g0 = make_pp(1.3, 0.4, 0.1, 0.0, 0.7);
    CHECK(phi_phi(k, 0.5, g0) == 0.0);
    CHECK(phibar_phi(k, -0.2, p) == 0.0);
    CHECK(phibar_phi(k, 0.9, p) == doctest::Approx(std::exp(-1.3 * F * 0.9)));
    // critical-point guard
    PropagatorParams crit = make_pp(1.0, -1.0, 0.0, 0.0, 0.0);
    crit.M = -1.0;
    CHECK_THROWS_AS(phi_phi(1.0, 0.1, crit), CriticalPointError);
}

TEST_CASE("frequency-domain forms match numerical transforms of the time forms") {
    const double D = 1.2, M = 0.3;
    for (auto [k, w] : {std::pair{0.5, 0.0}, {1.0, 2.0}, {2.0, 0.7}}) {
        // G(k,w) = int_0^inf e^{iwt} G(k,t) dt
        const double a = D * (k * k + M);
        auto re = [&](double t) { return std::cos(w * t) * bare_propagator(k, t, D, M); };
        auto im = [&](double t) { return std::sin(w * t) * bare_propagator(k, t, D, M); };
        const double T = 40.0 / a;
        const std::complex<double> numeric(
            quad::integrate(re, 0.0, T, 1e-13, 1e-10, 20000).value,
            quad::integrate(im, 0.0, T, 1e-13, 1e-10, 20000).value);
        const std::complex<double> closed = bare_propagator_freq(k, w, D, M);
        CHECK(std::abs(numeric - closed) <= 1e-6 * std::abs(closed));
    }
    PropagatorParams p = make_pp(1.0, 0.5, 0.2, 0.4, 0.6);
    for (auto [k, w] : {std::pair{0.4, 0.0}, {1.1, 1.3}}) {
        const double F = f_factor(k, p);
        auto re = [&](double t) { return 2.0 * std::cos(w * t) * phi_phi(k, t, p); };
        const double T = 40.0 / (p.D * F);
        const double numeric = quad::integrate(re, 0.0, T, 1e-13, 1e-10, 20000).value;
        CHECK(numeric == doctest::Approx(phi_phi_freq(k, w, p)).epsilon(1e-6));
    }
}
