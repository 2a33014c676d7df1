#pragma once

#include "nlrd/kernels.hpp"
#include "nlrd/propagators.hpp"

namespace nlrd::loops {

enum class LoopMethod { closed_form, quadrature, series };

struct LoopResult {
    double value = 0.0;
    LoopMethod method = LoopMethod::closed_form;
    double est_error = 0.0;
};

/// First vertex diagram magnitude |I1| = R t (the paper's I1 is -R t;
/// callers of effective_coupling apply the sign).
double i1(double R, double t);

/// General radial quadrature of the second vertex diagram,
///   I2 = 2R^2/((4pi)^{d/2} Gamma(d/2)) *
///        int_0^inf k^{d-1} Rhat(k)^2 [t/(2Dk^2) - 1/(4D^2k^4)
///                                     + e^{-2Dk^2 t}/(4D^2k^4)] dk,
/// with the k -> 0 limit handled by series. Throws DivergenceError when the
/// tail cannot converge (Local kernel in d >= 2, ScreenedPoisson in d >= 6).
LoopResult i2_quadrature(const Kernel& kernel, double D, double d, double t,
                         double rel_tol = 1e-9);

/// Local-interaction closed form R^2 t^{2-d/2} / ((8 pi D)^{d/2} (2-d)(4-d)),
/// valid below d = 2; throws DivergenceError for d >= 2.
LoopResult i2_local_closed(double R, double D, double d, double t);

/// Normal-kernel closed form, finite in every dimension; removable
/// singularities at d = 2 and d = 4 evaluated by limit branches.
LoopResult i2_normal_closed(double R, double lambda, double D, double d, double t);

/// Screened-Poisson closed form in upper incomplete gamma functions;
/// removable singularities at d = 2, 4, true divergences at d = 6, 8, ...
LoopResult i2_screened_closed(double R, double lambda, double D, double d, double t);

/// Effective dimensionless coupling I2/I1 with I1 = R t. Dispatches to the
/// closed form where one exists (Local, Normal, ScreenedPoisson) and to
/// quadrature for Spherical.
double effective_coupling(const Kernel& kernel, double D, double d, double t);

/// Crossover timescale below which UV regulation is effective:
/// 1/(4 D lambda^2) for Normal (the paper's explicit bound); 1/(2 D lambda^2)
/// adopted uniformly for ScreenedPoisson and Spherical as the analogous
/// diffusive-crossing time of scale 1/lambda; +inf for Local.
double crossover_time(const Kernel& kernel, double D);

/// One-loop density correction X^(1): nested quadrature over
/// 0 < t1 < t2 < t of G_cl(0;t2,t) R(k) G_cl(k;t1,t2)^2 R(k) X_cl(t1)^2
/// with a radial k reduction.
LoopResult x1_loop(double t, const Kernel& Rk, double n0, double D, double d,
                   double rel_tol = 3e-7);

/// Model II single-loop tadpole
///   -D g^2 X (S_d/(2pi)^d) int_0^inf k^{d-1} Qhat(k) Rhat(k) / F(k) dk.
/// Throws DivergenceError if the integrand tail decays too slowly
/// (local kernels in d >= 2) and CriticalPointError if F <= 0 anywhere.
LoopResult single_loop_tadpole(const PropagatorParams& params, double d,
                               double rel_tol = 1e-8);

/// Handling of the angular dependence suppressed in the paper's double
/// radial form of the two-loop tadpole: local_q takes local branching
/// (Qhat == 1) with the scalar radial difference |k - l|; mean_angle
/// averages over the relative angle with weight sin^{d-2}(theta).
enum class AngularStrategy { local_q, mean_angle };

/// Model II two-loop (penultimate) tadpole
///   -2 D g^5 X^2 (S_d^2/(2pi)^{2d}) *
///   int int k^{d-1} l^{d-1} Rhat(k) Rhat(l)^2 Qhat(k) Qhat(k-l) /
///           (2 F(k)^2 F(k-l) [F(k)+F(k-l)+F(l)]) dk dl.
LoopResult two_loop_tadpole(const PropagatorParams& params, double d,
                            AngularStrategy angular, double rel_tol = 1e-6);

}  // namespace nlrd::loops
