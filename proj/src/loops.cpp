#include "nlrd/loops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nlrd/errors.hpp"
#include "nlrd/quadrature.hpp"
#include "nlrd/specialfns.hpp"

namespace nlrd::loops {

namespace sf = specialfns;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// fint_k shorthand: S_d / (2 pi)^d
double radial_prefactor(double d) {
    return sf::sphere_surface(d) / std::pow(2.0 * kPi, d);
}

// I2 time bracket t/u - (1 - e^{-u t})/u^2 with u = 2 D k^2, series below
// u t = 1e-3 where the direct form cancels.
double i2_bracket(double u, double t) {
    const double ut = u * t;
    if (ut < 1e-3) {
        // sum_{n>=2} (-u)^{n-2} t^n / n!
        double term = 0.5 * t * t;
        double sum = term;
        for (int n = 3; n < 12; ++n) {
            term *= -ut / n;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return t / u + std::expm1(-ut) / (u * u);
}

// Power-law decay exponent of a profile's momentum shape at large k.
// Normal decays faster than any power; report it as -inf.
double shape_power(const Kernel& k) {
    switch (k.profile()) {
        case Profile::Normal:
            return -std::numeric_limits<double>::infinity();
        case Profile::ScreenedPoisson:
            return -2.0;
        case Profile::Spherical:
            return -(k.dim() + 1.0) / 2.0;
        default:
            return 0.0;
    }
}

// Semi-infinite radial quadrature via the compactifying substitution
// k = K0 u / (1 - u). The caller must have checked integrability
// (power-law tail exponent < -1); the mapped endpoint singularity at
// u = 1 is then integrable and the adaptive panels resolve it.
template <class F>
quad::QuadResult integrate_radial(const F& f, double K0,
                                  const std::vector<double>& k_breaks,
                                  double rel_tol, int max_panels) {
    auto g = [&](double u) {
        const double um1 = 1.0 - u;
        const double k = K0 * u / um1;
        const double v = f(k) * K0 / (um1 * um1);
        return std::isfinite(v) ? v : 0.0;
    };
    std::vector<double> pts{0.0};
    for (double k : k_breaks) {
        if (k <= 0.0) continue;
        const double u = k / (K0 + k);
        if (u > 0.89) break;
        pts.push_back(u);
    }
    for (double u : {0.9, 0.96, 0.985, 0.994, 0.9975, 0.999, 0.9996, 0.99985,
                     0.99994, 0.999976, 1.0})
        pts.push_back(u);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return quad::integrate_segments(g, pts, 1e-300, rel_tol, max_panels, false);
}

std::vector<double> lobe_breaks(const Kernel& kernel, int lobes) {
    std::vector<double> pts;
    if (kernel.profile() == Profile::Spherical) {
        const double step = kPi * kernel.precision();
        for (int j = 1; j <= lobes; ++j) pts.push_back(step * j);
    }
    return pts;
}

}  // namespace

double i1(double R, double t) {
    if (t < 0.0) throw DomainError("i1 requires t >= 0");
    return R * t;
}

LoopResult i2_quadrature(const Kernel& kernel, double D, double d, double t,
                         double rel_tol) {
    if (!(t > 0.0)) throw DomainError("i2_quadrature requires t > 0");
    if (!(D > 0.0)) throw DomainError("i2_quadrature requires D > 0");
    // tail integrand is k^{d-3} Rhat(k)^2
    const double tail_expo = d - 3.0 + 2.0 * shape_power(kernel);
    if (tail_expo >= -1.0)
        throw DivergenceError("i2_quadrature: UV-divergent tail for " +
                              to_string(kernel.profile()) +
                              " kernel at d = " + std::to_string(d));
    const double R = kernel.rate();
    const double pref =
        2.0 * R * R / (std::pow(4.0 * kPi, 0.5 * d) * sf::gamma(0.5 * d));
    auto integrand = [&](double k) {
        const double rh = kernel.momentum_shape(k);
        return std::pow(k, d - 1.0) * rh * rh * i2_bracket(2.0 * D * k * k, t);
    };
    const double lam =
        kernel.profile() == Profile::Local ? 1.0 : kernel.precision();
    const double K0 = std::max({lam, 1.0 / std::sqrt(2.0 * D * t), 1.0});
    quad::QuadResult body =
        integrate_radial(integrand, K0, lobe_breaks(kernel, 400), rel_tol, 60000);
    if (!body.converged)
        throw ToleranceError("i2_quadrature: tolerance not reached");
    return {pref * body.value, LoopMethod::quadrature, pref * body.error};
}

LoopResult i2_local_closed(double R, double D, double d, double t) {
    if (d >= 2.0)
        throw DivergenceError("local-interaction I2 is UV divergent for d >= 2");
    const double v = R * R * std::pow(t, 2.0 - 0.5 * d) /
                     (std::pow(8.0 * kPi * D, 0.5 * d) * (2.0 - d) * (4.0 - d));
    return {v, LoopMethod::closed_form, std::abs(v) * 1e-12};
}

LoopResult i2_normal_closed(double R, double lambda, double D, double d, double t) {
    if (t < 0.0) throw DomainError("i2_normal_closed requires t >= 0");
    if (t == 0.0) return {0.0, LoopMethod::closed_form, 0.0};
    const double pref = R * R / std::pow(8.0 * kPi, 0.5 * d);
    const double a = 1.0 / (lambda * lambda);
    const double b = a + 4.0 * D * t;
    const double mu = 4.0 * D * lambda * lambda * t;

    if (mu < 1e-6) {
        // paper's small-t series: lam^d sum_{n>=2} (-1)^n prod(d..) (2D lam^2)^{n-2} t^n/n!
        const double w = 2.0 * D * lambda * lambda;
        double term = 0.5 * t * t;
        double sum = term;
        double prod = 1.0;
        for (int n = 3; n < 10; ++n) {
            prod = (n == 3) ? d : prod * (d + 2.0 * (n - 3.0));
            term = std::pow(-w, n - 2.0) * std::pow(t, n) * prod;
            double fact = 1.0;
            for (int j = 2; j <= n; ++j) fact *= j;
            term /= fact;
            sum += term;
        }
        const double v = pref * std::pow(lambda, d) * sum;
        return {v, LoopMethod::series, std::abs(v) * 1e-12};
    }

    const double e2 = 2.0 - d;
    const double e4 = 4.0 - d;
    if (std::abs(e2) < 1e-10) {
        // d -> 2 limit branch
        const double v = pref * ((b * std::log(b) - a * std::log(a)) / (16.0 * D * D) -
                                 t / (4.0 * D) - t * std::log(a) / (4.0 * D));
        return {v, LoopMethod::closed_form, std::abs(v) * 1e-10};
    }
    if (std::abs(e4) < 1e-10) {
        // d -> 4 limit branch
        const double v =
            pref * (lambda * lambda * t / (4.0 * D) - std::log(b / a) / (16.0 * D * D));
        return {v, LoopMethod::closed_form, std::abs(v) * 1e-10};
    }
    // stable factoring: b^{e4/2} - a^{e4/2} = a^{e4/2} expm1((e4/2) log(b/a))
    const double diff = std::pow(a, 0.5 * e4) * std::expm1(0.5 * e4 * std::log(b / a));
    const double v = pref * (diff / (4.0 * D * D * e2 * e4) -
                             std::pow(a, 0.5 * e2) * t / (2.0 * D * e2));
    const double cancel = 1e-16 / std::min({std::abs(e2), std::abs(e4), mu, 1.0});
    return {v, LoopMethod::closed_form, std::abs(v) * std::max(1e-13, cancel)};
}

namespace {

// Screened-Poisson closed form away from the removable dimensions.
double i2_screened_generic(double R, double lambda, double D, double d, double t) {
    const double pref = R * R / std::pow(4.0 * kPi, 0.5 * d);
    const double c = 2.0 * D * t * lambda * lambda;
    const double a3 = 3.0 - 0.5 * d;
    const double a4 = 4.0 - 0.5 * d;

    if (c < 0.01) {
        // series split into the analytic part and the c^{a4} part; the direct
        // bracket cancels to O(c^2) and loses precision below c ~ 1e-2
        double fact = 2.0;
        double csum = 0.0, cn = c * c;
        for (int n = 2; n < 24; ++n) {
            const double term = cn * (a3 - n) / fact;
            csum += term;
            cn *= c;
            fact *= (n + 1);
            if (std::abs(term) < 1e-18 * std::abs(csum) && n > 4) break;
        }
        double nsum = 0.0, cm = 1.0, mfact = 1.0;
        for (int m = 0; m < 24; ++m) {
            const double term = cm / (mfact * (a3 + m) * (a4 + m));
            nsum += (m % 2 == 0 ? term : -term);
            cm *= c;
            mfact *= (m + 1);
            if (std::abs(term) < 1e-18 * std::abs(nsum) && m > 3) break;
        }
        const double bracket = sf::gamma(a3) / (2.0 * (a3 - 1.0)) * csum +
                               std::exp(c) * std::pow(c, a4) * nsum / (2.0 * (a3 - 1.0));
        return pref * std::pow(lambda, d - 4.0) / (D * D) * bracket / (2.0 - d);
    }

    const double ec = std::exp(c);
    const double A = ec * (sf::upper_incomplete_gamma(a4, c) -
                           c * sf::upper_incomplete_gamma(a3, c)) -
                     sf::gamma(a4);
    const double term1 =
        std::pow(lambda, d - 4.0) * A / (D * D * (2.0 - d) * (4.0 - d));
    const double term2 =
        std::pow(lambda, d - 2.0) * t * sf::gamma(a3) / (D * (2.0 - d));
    return pref * (term1 - term2);
}

}  // namespace

LoopResult i2_screened_closed(double R, double lambda, double D, double d, double t) {
    if (t < 0.0) throw DomainError("i2_screened_closed requires t >= 0");
    const double rounded = std::round(d);
    if (std::abs(d - rounded) < 1e-9 && rounded >= 6.0 &&
        std::fmod(rounded, 2.0) == 0.0)
        throw DivergenceError(
            "screened-Poisson I2 diverges at even dimensions d >= 6");
    if (t == 0.0) return {0.0, LoopMethod::closed_form, 0.0};

    const bool near2 = std::abs(d - 2.0) < 1e-10;
    const bool near4 = std::abs(d - 4.0) < 1e-10;
    if (near2 || near4) {
        // removable singularity: symmetric-offset limit branch, O(h^2)
        const double d0 = near2 ? 2.0 : 4.0;
        const double h = 1e-5;
        const double v = 0.5 * (i2_screened_generic(R, lambda, D, d0 + h, t) +
                                i2_screened_generic(R, lambda, D, d0 - h, t));
        return {v, LoopMethod::closed_form, std::abs(v) * 1e-9};
    }
    const double v = i2_screened_generic(R, lambda, D, d, t);
    const double cancel =
        1e-16 / std::min({std::abs(d - 2.0), std::abs(d - 4.0), 1.0});
    return {v, LoopMethod::closed_form, std::abs(v) * std::max(1e-12, cancel)};
}

double effective_coupling(const Kernel& kernel, double D, double d, double t) {
    if (!(t > 0.0)) throw DomainError("effective_coupling requires t > 0");
    const double R = kernel.rate();
    LoopResult r;
    switch (kernel.profile()) {
        case Profile::Local:
            r = i2_local_closed(R, D, d, t);
            break;
        case Profile::Normal:
            r = i2_normal_closed(R, kernel.precision(), D, d, t);
            break;
        case Profile::ScreenedPoisson:
            r = i2_screened_closed(R, kernel.precision(), D, d, t);
            break;
        case Profile::Spherical:
            r = i2_quadrature(kernel, D, d, t);
            break;
    }
    return r.value / i1(R, t);
}

double crossover_time(const Kernel& kernel, double D) {
    const double lam = kernel.precision();
    switch (kernel.profile()) {
        case Profile::Local:
            return std::numeric_limits<double>::infinity();
        case Profile::Normal:
            return 1.0 / (4.0 * D * lam * lam);
        default:
            return 1.0 / (2.0 * D * lam * lam);
    }
}

LoopResult x1_loop(double t, const Kernel& Rk, double n0, double D, double d,
                   double rel_tol) {
    if (!(t > 0.0)) throw DomainError("x1_loop requires t > 0");
    const double R = Rk.rate();
    if (R == 0.0 || n0 == 0.0) return {0.0, LoopMethod::quadrature, 0.0};
    const double pref = R * R * radial_prefactor(d);

    const double lam = Rk.profile() == Profile::Local ? 0.0 : Rk.precision();

    auto k_integral = [&](double t1, double t2) {
        const double delta = t2 - t1;
        const double rho = (1.0 + R * n0 * t1) / (1.0 + R * n0 * t2);
        // cut where either the kernel shape or the diffusion factor is < 1e-16
        double k_shape = std::numeric_limits<double>::infinity();
        switch (Rk.profile()) {
            case Profile::Normal: k_shape = 8.6 * lam; break;
            case Profile::ScreenedPoisson: k_shape = lam * 1e4; break;
            case Profile::Spherical: k_shape = lam * 3e3; break;
            default: break;
        }
        const double k_diff =
            delta > 0.0 ? 6.1 / std::sqrt(2.0 * D * delta)
                        : std::numeric_limits<double>::infinity();
        const double K = std::min(k_shape, k_diff);
        if (std::isinf(K))
            throw DivergenceError("x1_loop: local kernel with coincident times");
        auto f = [&](double k) {
            const double rh = Rk.momentum_shape(k);
            return std::pow(k, d - 1.0) * rh * rh *
                   std::exp(-2.0 * D * k * k * delta) *
                   std::pow(rho, 2.0 * rh);
        };
        std::vector<double> pts{0.0};
        for (double kb : lobe_breaks(Rk, 200)) {
            if (kb >= K) break;
            pts.push_back(kb);
        }
        pts.push_back(K);
        return quad::integrate_segments(f, pts, 1e-16, rel_tol * 1e-2, 20000).value;
    };

    auto inner_t1 = [&](double t2) {
        const double a_out = (1.0 + R * n0 * t2) / (1.0 + R * n0 * t);
        auto f = [&](double t1) {
            const double xcl = n0 / (1.0 + R * n0 * t1);
            const double rho = (1.0 + R * n0 * t1) / (1.0 + R * n0 * t2);
            return xcl * xcl * rho * rho * k_integral(t1, t2);
        };
        return a_out * a_out *
               quad::integrate(f, 0.0, t2, 1e-16, rel_tol * 0.1, 4000).value;
    };

    quad::QuadResult outer =
        quad::integrate(inner_t1, 0.0, t, 1e-16, rel_tol, 2000);
    return {pref * outer.value, LoopMethod::quadrature,
            pref * (outer.error + rel_tol * std::abs(outer.value))};
}

namespace {

double tadpole_k0(const PropagatorParams& p) {
    const double f_scale = std::abs(p.M) + std::abs(p.Qk.rate()) +
                           2.0 * std::abs(p.g * p.X) + 1.0;
    return std::max({std::sqrt(f_scale), p.Rk.precision(), p.Qk.precision(), 1.0});
}

}  // namespace

LoopResult single_loop_tadpole(const PropagatorParams& params, double d,
                               double rel_tol) {
    const double g = params.g, X = params.X;
    if (g == 0.0 || X == 0.0) return {0.0, LoopMethod::quadrature, 0.0};
    const double tau_bar = f_factor(0.0, params);
    if (!(tau_bar > 0.0))
        throw CriticalPointError("single_loop_tadpole requires taubar = F(0) > 0");
    // tail: k^{d-3} Qhat(k) Rhat(k)
    const double tail_expo =
        d - 3.0 + shape_power(params.Qk) + shape_power(params.Rk);
    if (tail_expo >= -1.0)
        throw DivergenceError("single_loop_tadpole: UV-divergent integrand "
                              "(primitive degree of divergence reached)");

    auto integrand = [&](double k) {
        const double F = f_factor(k, params);
        if (!(F > 0.0))
            throw CriticalPointError("single_loop_tadpole: F(k) <= 0 inside integral");
        return std::pow(k, d - 1.0) * params.Qk.momentum_shape(k) *
               params.Rk.momentum_shape(k) / F;
    };
    std::vector<double> breaks = lobe_breaks(
        params.Qk.profile() == Profile::Spherical ? params.Qk : params.Rk, 400);
    quad::QuadResult body =
        integrate_radial(integrand, tadpole_k0(params), breaks, rel_tol, 60000);
    if (!body.converged)
        throw ToleranceError("single_loop_tadpole: tolerance not reached");
    const double pref = -params.D * g * g * X * radial_prefactor(d);
    return {pref * body.value, LoopMethod::quadrature,
            std::abs(pref) * body.error};
}

LoopResult two_loop_tadpole(const PropagatorParams& params, double d,
                            AngularStrategy angular, double rel_tol) {
    const double g = params.g, X = params.X;
    if (g == 0.0 || X == 0.0) return {0.0, LoopMethod::quadrature, 0.0};
    if (d < 1.0) throw DomainError("two_loop_tadpole requires d >= 1");
    const double tau_bar = f_factor(0.0, params);
    if (!(tau_bar > 0.0))
        throw CriticalPointError("two_loop_tadpole requires taubar = F(0) > 0");

    const bool local_q = angular == AngularStrategy::local_q;
    auto Fk = [&](double q) {
        const double F = local_q
                             ? q * q + params.M - params.Qk.rate() +
                                   params.g * params.X * params.Rk.momentum_shape(q) +
                                   params.g * params.X
                             : f_factor(q, params);
        if (!(F > 0.0))
            throw CriticalPointError("two_loop_tadpole: F(k) <= 0 inside integral");
        return F;
    };
    auto Qs = [&](double q) { return local_q ? 1.0 : params.Qk.momentum_shape(q); };

    // UV pre-checks: k-part k^{d-1} Rhat Qhat / F^2, l-part l^{d-1} Rhat^2 / l^4
    const double pq = local_q ? 0.0 : shape_power(params.Qk);
    const double e_k = d - 1.0 + shape_power(params.Rk) + pq - 4.0;
    const double e_l = d - 1.0 + 2.0 * shape_power(params.Rk) - 4.0;
    if (e_k >= -1.0 || e_l >= -1.0)
        throw DivergenceError("two_loop_tadpole: UV-divergent tails");

    // angular average of Qhat(q)/(F(q)[Fk+F(q)+Fl]) over the relative angle;
    // q = |k - l| as a scalar difference in the local_q strategy
    auto angular_part = [&](double k, double l, double fk, double fl) {
        auto at_q = [&](double q) {
            const double fq = Fk(q);
            return Qs(q) / (fq * (fk + fq + fl));
        };
        if (local_q) return at_q(std::abs(k - l));
        if (d == 1.0) return 0.5 * (at_q(std::abs(k - l)) + at_q(k + l));
        auto f = [&](double theta) {
            const double q2 = k * k + l * l - 2.0 * k * l * std::cos(theta);
            return std::pow(std::sin(theta), d - 2.0) *
                   at_q(std::sqrt(std::max(q2, 0.0)));
        };
        static thread_local double norm_d = -1.0, norm_val = 0.0;
        if (norm_d != d) {
            norm_val = quad::integrate(
                           [&](double th) { return std::pow(std::sin(th), d - 2.0); },
                           0.0, kPi, 1e-14, 1e-12, 2000)
                           .value;
            norm_d = d;
        }
        return quad::integrate(f, 0.0, kPi, 1e-300, 1e-7, 2000, false).value /
               norm_val;
    };

    const double K0 = tadpole_k0(params);
    auto inner = [&](double k) {
        const double fk = Fk(k);
        auto f = [&](double l) {
            const double fl = Fk(l);
            const double rl = params.Rk.momentum_shape(l);
            return std::pow(l, d - 1.0) * rl * rl * angular_part(k, l, fk, fl);
        };
        return integrate_radial(f, K0, lobe_breaks(params.Rk, 100), rel_tol * 0.1,
                                12000)
            .value;
    };
    auto outer_f = [&](double k) {
        const double rk = params.Rk.momentum_shape(k);
        const double qk = Qs(k);
        const double fk = Fk(k);
        return std::pow(k, d - 1.0) * rk * qk / (2.0 * fk * fk) * inner(k);
    };
    quad::QuadResult body = integrate_radial(
        outer_f, K0, lobe_breaks(params.Rk, 100), rel_tol, 4000);

    // S_d^2/(2pi)^{2d} is radial_prefactor(d)^2
    const double rp = radial_prefactor(d);
    const double scale = -2.0 * params.D * std::pow(g, 5) * X * X * rp * rp;
    return {scale * body.value, LoopMethod::quadrature,
            std::abs(scale) * (body.error + rel_tol * std::abs(body.value))};
}

}  // namespace nlrd::loops
