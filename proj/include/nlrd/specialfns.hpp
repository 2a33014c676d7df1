#pragma once

namespace nlrd::specialfns {

// Pure, reentrant special-function kernel. Accuracy target is 1e-12 relative
// on the primary domains (order nu in [0,5], argument in [1e-8, 50]).
//
// Evaluation strategy throughout: series for small argument,
// continued-fraction / asymptotic expansion for large argument. The
// switch-over points are documented at each definition.

/// Euler gamma function. Throws PoleError at non-positive integers.
double gamma(double x);

/// Natural log of |Gamma(x)| for x > 0.
double log_gamma(double x);

/// Upper incomplete gamma Gamma(a,x) = int_x^inf s^{a-1} e^{-s} ds,
/// analytically continued in a for x > 0. Throws DivergenceError when
/// x = 0 and a <= 0.
double upper_incomplete_gamma(double a, double x);

/// Regularized upper gamma Q(a,x) = Gamma(a,x)/Gamma(a), a > 0.
double reg_upper_gamma(double a, double x);

/// Bessel function of the first kind, real order nu >= 0, x >= 0.
double bessel_j(double nu, double x);

/// Modified Bessel function of the second kind, real order nu >= 0, x > 0.
double bessel_k(double nu, double x);

/// Surface area of the unit sphere in d dimensions: 2 pi^{d/2} / Gamma(d/2).
double sphere_surface(double d);

/// Volume of the unit ball in d dimensions: pi^{d/2} / Gamma(d/2 + 1).
double ball_volume(double d);

}  // namespace nlrd::specialfns
