#pragma once

#include <array>
#include <string>

#include "nlrd/rng.hpp"

namespace nlrd {

/// Interaction profile shapes. RieszPotential is recognized by the config
/// parser but rejected as unsupported (general test function f is
/// underdetermined).
enum class Profile { Local, Normal, ScreenedPoisson, Spherical };

Profile profile_from_string(const std::string& name);
std::string to_string(Profile p);

/// An isotropic interaction profile R(r) = R * Rhat(r) from the catalogue:
/// overall rate R, precision lambda (1/length; ignored for Local) and
/// spatial dimension d (real, to allow dimensional continuation).
///
/// Immutable after construction; all views except sample_displacement are
/// pure. Normalization: momentum_space(0) == rate for every profile.
class Kernel {
public:
    /// Default: a zero-rate Local kernel (no interaction).
    Kernel() : Kernel(Profile::Local, 0.0, 1.0, 1.0) {}
    Kernel(Profile profile, double rate, double precision, double dim);

    Profile profile() const noexcept { return profile_; }
    double rate() const noexcept { return rate_; }
    double precision() const noexcept { return precision_; }
    double dim() const noexcept { return dim_; }

    /// Pointwise rate density R * Rhat(r). Throws for the Local profile
    /// (a delta has no pointwise density) and for r < 0.
    double real_space(double r) const;

    /// R * Rhat(k), a function of |k| only. Local -> R; k = 0 -> R.
    double momentum_space(double k) const;

    /// Normalized profile Rhat(k) = momentum_space(k) / rate.
    double momentum_shape(double k) const;

    /// Per-component variance of the normalized profile (Table 1 column).
    double variance() const;

    /// Same profile with precision a * lambda. Satisfies
    /// Rhat(a p, lambda) = a^-d Rhat(p, a lambda) and
    /// Rhat(k / a, lambda) = Rhat(k, a lambda).
    Kernel rescaled(double a) const;

    /// Random displacement with density Rhat (Local -> zero vector).
    /// Only integer dim in {1,2,3} is meaningful for sampling.
    std::array<double, 3> sample_displacement(rng::Philox& gen) const;

    /// Radius r_c with profile mass outside r_c <= mass_tol.
    /// Exact 1/lambda for Spherical, 0 for Local.
    double truncation_radius(double mass_tol) const;

private:
    Profile profile_;
    double rate_;
    double precision_;
    double dim_;
};

}  // namespace nlrd
