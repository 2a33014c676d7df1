#include "nlrd/kernels.hpp"

#include <cmath>
#include <limits>

#include "nlrd/errors.hpp"
#include "nlrd/quadrature.hpp"
#include "nlrd/specialfns.hpp"

namespace nlrd {

namespace sf = specialfns;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

Profile profile_from_string(const std::string& name) {
    if (name == "local") return Profile::Local;
    if (name == "normal") return Profile::Normal;
    if (name == "screened_poisson" || name == "screened-poisson")
        return Profile::ScreenedPoisson;
    if (name == "spherical") return Profile::Spherical;
    if (name == "riesz" || name == "riesz_potential")
        throw ValidationError("riesz potential profile is not supported "
                              "(general test function f is unspecified)");
    throw ValidationError("unknown kernel profile: " + name);
}

std::string to_string(Profile p) {
    switch (p) {
        case Profile::Local: return "local";
        case Profile::Normal: return "normal";
        case Profile::ScreenedPoisson: return "screened_poisson";
        case Profile::Spherical: return "spherical";
    }
    return "?";
}

Kernel::Kernel(Profile profile, double rate, double precision, double dim)
    : profile_(profile), rate_(rate), precision_(precision), dim_(dim) {
    if (rate < 0.0) throw ValidationError("kernel rate must be >= 0");
    if (dim < 1.0) throw ValidationError("kernel dim must be >= 1");
    if (profile != Profile::Local && precision <= 0.0)
        throw ValidationError("kernel precision must be > 0 for non-local profiles");
}

double Kernel::real_space(double r) const {
    if (r < 0.0) throw DomainError("real_space requires r >= 0");
    const double lam = precision_;
    switch (profile_) {
        case Profile::Local:
            throw DomainError("local (delta) profile has no pointwise density");
        case Profile::Normal:
            return rate_ * std::pow(lam * lam / kPi, 0.5 * dim_) *
                   std::exp(-lam * lam * r * r);
        case Profile::ScreenedPoisson: {
            const double nu = 0.5 * dim_ - 1.0;
            if (r == 0.0) {
                // Rhat(r) ~ r^{2-d} near the origin: finite only below d = 2,
                // where the limit is (2 pi)^{-d/2} lam^d Gamma(1-d/2) 2^{-d/2}
                if (dim_ < 2.0)
                    return rate_ * std::pow(2.0 * kPi, -0.5 * dim_) *
                           std::pow(lam, dim_) * sf::gamma(1.0 - 0.5 * dim_) *
                           std::pow(2.0, -0.5 * dim_);
                return std::numeric_limits<double>::infinity();
            }
            return rate_ * std::pow(2.0 * kPi, -0.5 * dim_) * lam * lam *
                   std::pow(lam / r, nu) * sf::bessel_k(std::abs(nu), lam * r);
        }
        case Profile::Spherical:
            return (r < 1.0 / lam)
                       ? rate_ * std::pow(lam, dim_) / sf::ball_volume(dim_)
                       : 0.0;
    }
    return 0.0;
}

double Kernel::momentum_space(double k) const {
    if (k < 0.0) throw DomainError("momentum_space requires k >= 0 (isotropy)");
    return rate_ * momentum_shape(k);
}

double Kernel::momentum_shape(double k) const {
    const double lam = precision_;
    switch (profile_) {
        case Profile::Local:
            return 1.0;
        case Profile::Normal:
            return std::exp(-k * k / (4.0 * lam * lam));
        case Profile::ScreenedPoisson:
            return lam * lam / (lam * lam + k * k);
        case Profile::Spherical: {
            const double z = k / lam;
            const double nu = 0.5 * dim_;
            if (z < 0.25) {
                // J_nu(z)/z^nu is removable at z = 0; series in (z/2)^2
                const double q = 0.25 * z * z;
                double term = 1.0, sum = 1.0;
                for (int m = 1; m < 30; ++m) {
                    term *= -q / (m * (nu + m));
                    sum += term;
                    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
                }
                return sum;
            }
            return std::pow(2.0 / z, nu) * sf::gamma(nu + 1.0) * sf::bessel_j(nu, z);
        }
    }
    return 1.0;
}

double Kernel::variance() const {
    const double l2 = precision_ * precision_;
    switch (profile_) {
        case Profile::Local: return 0.0;
        case Profile::Normal: return 1.0 / (2.0 * l2);
        case Profile::ScreenedPoisson: return 2.0 / l2;
        case Profile::Spherical: return 1.0 / (l2 * (dim_ + 2.0));
    }
    return 0.0;
}

Kernel Kernel::rescaled(double a) const {
    if (a <= 0.0) throw ValidationError("rescale factor must be > 0");
    if (profile_ == Profile::Local) return *this;
    return Kernel(profile_, rate_, a * precision_, dim_);
}

std::array<double, 3> Kernel::sample_displacement(rng::Philox& gen) const {
    const int d = static_cast<int>(std::lround(dim_));
    if (std::abs(dim_ - d) > 1e-9 || d < 1 || d > 3)
        throw DomainError("sample_displacement requires integer dim in {1,2,3}");
    std::array<double, 3> x = {0.0, 0.0, 0.0};
    const double lam = precision_;
    switch (profile_) {
        case Profile::Local:
            return x;
        case Profile::Normal: {
            const double sigma = 1.0 / (lam * std::sqrt(2.0));
            for (int i = 0; i < d; ++i) x[i] = sigma * gen.normal();
            return x;
        }
        case Profile::ScreenedPoisson: {
            // Rhat(k) = lam^2/(lam^2+k^2) = E_s[e^{-s k^2}] with s ~ Exp(lam^2),
            // so the displacement is a Gaussian with random variance 2s.
            double u;
            do { u = gen.uniform(); } while (u <= 0.0);
            const double s = -std::log(u) / (lam * lam);
            const double sigma = std::sqrt(2.0 * s);
            for (int i = 0; i < d; ++i) x[i] = sigma * gen.normal();
            return x;
        }
        case Profile::Spherical: {
            // uniform in the ball of radius 1/lam
            double norm2;
            do {
                norm2 = 0.0;
                for (int i = 0; i < d; ++i) {
                    x[i] = gen.normal();
                    norm2 += x[i] * x[i];
                }
            } while (norm2 == 0.0);
            const double r = std::pow(gen.uniform(), 1.0 / d) / lam;
            const double scale = r / std::sqrt(norm2);
            for (int i = 0; i < d; ++i) x[i] *= scale;
            return x;
        }
    }
    return x;
}

double Kernel::truncation_radius(double mass_tol) const {
    if (!(mass_tol > 0.0 && mass_tol < 1.0))
        throw ValidationError("mass_tol must lie in (0, 1)");
    const double lam = precision_;
    switch (profile_) {
        case Profile::Local:
            return 0.0;
        case Profile::Spherical:
            return 1.0 / lam;
        case Profile::Normal: {
            // mass outside radius r is Q(d/2, lam^2 r^2); bisect on r
            double lo = 0.0, hi = 1.0 / lam;
            while (sf::reg_upper_gamma(0.5 * dim_, lam * lam * hi * hi) > mass_tol)
                hi *= 2.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (sf::reg_upper_gamma(0.5 * dim_, lam * lam * mid * mid) > mass_tol)
                    lo = mid;
                else
                    hi = mid;
                if (hi - lo < 1e-14 * hi) break;
            }
            return hi;
        }
        case Profile::ScreenedPoisson: {
            // outside mass by radial quadrature; K_nu decays like e^{-lam r},
            // so everything beyond lam r = 60 is negligible next to mass_tol
            const double sd = sf::sphere_surface(dim_);
            auto outside = [&](double r) {
                const double hi = (60.0 / lam > 2.0 * r) ? 60.0 / lam : 2.0 * r + 60.0 / lam;
                auto f = [&](double s) {
                    return sd * std::pow(s, dim_ - 1.0) * real_space(s) / rate_;
                };
                return quad::integrate(f, r, hi, 1e-14, 1e-10, 8000).value;
            };
            double lo = 1e-8 / lam, hi = 1.0 / lam;
            while (outside(hi) > mass_tol) hi *= 2.0;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (outside(mid) > mass_tol)
                    lo = mid;
                else
                    hi = mid;
                if (hi - lo < 1e-10 * hi) break;
            }
            return hi;
        }
    }
    return 0.0;
}

}  // namespace nlrd
