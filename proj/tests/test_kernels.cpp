#include <doctest.h>

#include <cmath>
#include <vector>

#include "nlrd/errors.hpp"
#include "nlrd/kernels.hpp"
#include "nlrd/quadrature.hpp"
#include "nlrd/rng.hpp"
#include "nlrd/specialfns.hpp"

using namespace nlrd;
namespace sf = specialfns;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

// radial d-dimensional Fourier transform oracle (Hankel-type quadrature)
double hankel_ft_oracle(const Kernel& kernel, double k) {
    const double d = kernel.dim();
    const double lam = kernel.precision();
    double r_max = 0.0;
    switch (kernel.profile()) {
        case Profile::Normal: r_max = 9.0 / lam; break;
        case Profile::ScreenedPoisson: r_max = 75.0 / lam; break;
        case Profile::Spherical: r_max = 1.0 / lam; break;
        default: throw DomainError("no density");
    }
    std::vector<double> pts{0.0};
    const double step = k > 0.0 ? kPi / k : r_max;
    for (double x = step; x < r_max; x += step) pts.push_back(x);
    pts.push_back(r_max);
    if (d == 1.0) {
        auto f = [&](double r) { return kernel.real_space(r) * std::cos(k * r); };
        return 2.0 * quad::integrate_segments(f, pts, 1e-13, 1e-9, 20000).value;
    }
    auto f = [&](double r) {
        return kernel.real_space(r) * sf::bessel_j(0.5 * d - 1.0, k * r) *
               std::pow(r, 0.5 * d);
    };
    return std::pow(2.0 * kPi, 0.5 * d) * std::pow(k, 1.0 - 0.5 * d) *
           quad::integrate_segments(f, pts, 1e-13, 1e-9, 20000).value;
}

double radial_mass(const Kernel& kernel, double r_hi) {
    const double d = kernel.dim();
    auto f = [&](double r) {
        return sf::sphere_surface(d) * std::pow(r, d - 1.0) * kernel.real_space(r);
    };
    return quad::integrate(f, 0.0, r_hi, 1e-12, 1e-9, 40000).value;
}
}  // namespace

TEST_CASE("table values at spot points") {
    Kernel n1(Profile::Normal, 1.0, 1.0, 1.0);
    CHECK(n1.real_space(0.0) == doctest::Approx(std::sqrt(1.0 / kPi)).epsilon(1e-14));
    Kernel s3(Profile::Spherical, 1.0, 1.0, 3.0);
    CHECK(s3.real_space(0.5) == doctest::Approx(3.0 / (4.0 * kPi)).epsilon(1e-14));
    CHECK(s3.real_space(1.5) == 0.0);
    CHECK(s3.momentum_space(kPi) == doctest::Approx(3.0 / (kPi * kPi)).epsilon(1e-12));
    CHECK_THROWS_AS(Kernel(Profile::Local, 1.0, 1.0, 1.0).real_space(0.5), DomainError);
    CHECK_THROWS_AS(n1.real_space(-0.1), DomainError);
}

TEST_CASE("momentum normalization R(0) = rate for every profile") {
    for (Profile p : {Profile::Local, Profile::Normal, Profile::ScreenedPoisson,
                      Profile::Spherical}) {
        for (double d : {1.0, 2.0, 3.0}) {
            Kernel k(p, 2.7, 1.3, d);
            CHECK(k.momentum_space(0.0) == doctest::Approx(2.7).epsilon(1e-14));
        }
    }
    Kernel sp(Profile::ScreenedPoisson, 2.0, 1.5, 3.0);
    CHECK(sp.momentum_space(1.5) == doctest::Approx(1.0).epsilon(1e-14));  // R/2 at k=lambda
}

TEST_CASE("real-space mass integrates to the rate") {
    for (double d : {1.0, 2.0, 3.0}) {
        CHECK(radial_mass(Kernel(Profile::Normal, 1.6, 0.8, d), 12.0 / 0.8) ==
              doctest::Approx(1.6).epsilon(1e-6));
        CHECK(radial_mass(Kernel(Profile::Spherical, 2.2, 1.1, d), 1.0 / 1.1) ==
              doctest::Approx(2.2).epsilon(1e-6));
        CHECK(radial_mass(Kernel(Profile::ScreenedPoisson, 1.0, 1.0, d), 80.0) ==
              doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("Fourier pair property against Hankel oracle") {
    for (Profile p : {Profile::Normal, Profile::ScreenedPoisson, Profile::Spherical}) {
        for (double d : {1.0, 3.0}) {
            for (double lam : {0.5, 1.0, 2.0}) {
                Kernel kern(p, 1.0, lam, d);
                for (double kf : {0.1, 1.0, 5.0}) {
                    const double k = kf * lam;
                    CHECK(hankel_ft_oracle(kern, k) ==
                          doctest::Approx(kern.momentum_space(k)).epsilon(1e-6));
                }
            }
        }
    }
}

TEST_CASE("precision limit recovers local interaction") {
    const double k = 0.7;
    for (Profile p : {Profile::Normal, Profile::ScreenedPoisson, Profile::Spherical}) {
        Kernel kern(p, 1.0, 1e3, 2.0);
        CHECK(std::abs(kern.momentum_space(k) - 1.0) < 1e-4);
    }
}

TEST_CASE("variance column") {
    CHECK(Kernel(Profile::Normal, 1.0, 2.0, 3.0).variance() == doctest::Approx(0.125));
    CHECK(Kernel(Profile::Spherical, 1.0, 1.0, 3.0).variance() == doctest::Approx(0.2));
    CHECK(Kernel(Profile::Local, 1.0, 1.0, 3.0).variance() == 0.0);
    CHECK(Kernel(Profile::ScreenedPoisson, 1.0, 2.0, 1.0).variance() ==
          doctest::Approx(0.5));
}

TEST_CASE("rescaling identity") {
    // Rhat(a p, lambda) = a^-d Rhat(p, a lambda) and Rhat(k/a, lambda) = Rhat(k, a lambda)
    for (Profile p : {Profile::Normal, Profile::ScreenedPoisson, Profile::Spherical}) {
        for (double d : {1.0, 2.0, 3.0}) {
            Kernel kern(p, 1.0, 1.0, d);
            for (double a : {0.5, 2.0, 3.0}) {
                Kernel scaled = kern.rescaled(a);
                for (double r : {0.2, 0.9}) {
                    const double lhs = kern.real_space(a * r);
                    const double rhs = std::pow(a, -d) * scaled.real_space(r);
                    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
                }
                for (double k : {0.3, 2.2}) {
                    CHECK(kern.momentum_space(k / a) ==
                          doctest::Approx(scaled.momentum_space(k)).epsilon(1e-12));
                }
            }
        }
    }
    Kernel kern(Profile::Normal, 1.0, 1.0, 2.0);
    Kernel same = kern.rescaled(1.0);
    CHECK(same.precision() == kern.precision());
}

TEST_CASE("displacement sampling moments match the variance column") {
    rng::Philox gen(12345);
    const int n = 200000;
    for (Profile p : {Profile::Normal, Profile::ScreenedPoisson, Profile::Spherical}) {
        for (int d : {1, 3}) {
            Kernel kern(p, 1.0, 1.2, d);
            double sum2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const auto x = kern.sample_displacement(gen);
                sum2 += x[0] * x[0];  // per-component second moment
            }
            const double got = sum2 / n;
            CHECK(got == doctest::Approx(kern.variance()).epsilon(0.03));
        }
    }
    Kernel local(Profile::Local, 1.0, 1.0, 3.0);
    const auto z = local.sample_displacement(gen);
    CHECK(z[0] == 0.0);
    CHECK(z[2] == 0.0);
}

TEST_CASE("spherical samples stay inside the support") {
    rng::Philox gen(99);
    Kernel kern(Profile::Spherical, 1.0, 2.0, 3);
    for (int i = 0; i < 2000; ++i) {
        const auto x = kern.sample_displacement(gen);
        CHECK(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= 0.25 * (1.0 + 1e-12));
    }
}

TEST_CASE("truncation radius") {
    CHECK(Kernel(Profile::Spherical, 1.0, 2.0, 3.0).truncation_radius(0.3) ==
          doctest::Approx(0.5));
    CHECK(Kernel(Profile::Local, 1.0, 1.0, 1.0).truncation_radius(0.5) == 0.0);
    // normal d=1 with tol erfc(3): radius 3
    const double tol = std::erfc(3.0);
    CHECK(Kernel(Profile::Normal, 1.0, 1.0, 1.0).truncation_radius(tol) ==
          doctest::Approx(3.0).epsilon(1e-8));
    // screened-Poisson: cumulative-mass oracle at the returned radius
    Kernel sp(Profile::ScreenedPoisson, 1.0, 1.0, 3.0);
    const double rc = sp.truncation_radius(1e-4);
    const double inside = radial_mass(sp, rc);
    CHECK(1.0 - inside == doctest::Approx(1e-4).epsilon(0.02));
    CHECK_THROWS_AS(sp.truncation_radius(0.0), ValidationError);
}

TEST_CASE("riesz profile is rejected") {
    CHECK_THROWS_AS(profile_from_string("riesz"), ValidationError);
    CHECK(profile_from_string("screened-poisson") == Profile::ScreenedPoisson);
}
