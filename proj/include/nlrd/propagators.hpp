#pragma once

#include <complex>

#include "nlrd/kernels.hpp"

namespace nlrd {

/// Parameters of the Model II mean-centred two-point functions.
///
/// M, g and the kernels' rates here are the paper's D-scaled coefficients
/// (dimensionless relative to k^2): Qk.rate is the branching coefficient Q,
/// Rk supplies only its normalized shape. D multiplies the F exponent
/// exactly once, inside the propagators.
struct PropagatorParams {
    double D;
    double M = 0.0;
    Kernel Qk;   // rate field = branching coefficient Q
    Kernel Rk;   // shape only; rate field unused here
    double g = 0.0;
    double X = 0.0;
};

/// Bare propagator theta(t) exp(-t D (k^2 + M)).
double bare_propagator(double k, double t, double D, double M);

/// Branching-dressed Dyson sum exp(-t (D (k^2 + M) - Q(k))), t >= 0.
/// Qk carries the physical branching rate (Q(0) = D*Q).
double dressed_propagator(double k, double t, double D, double M, const Kernel& Qk);

/// Response functional: the propagator dressed by all tree attachments,
/// exp(-D k^2 (t2-t1)) * ((1+R n0 t1)/(1+R n0 t2))^{1 + Rhat(k)}.
/// Requires 0 <= t1 <= t2.
double response_functional(double k, double t1, double t2, const Kernel& Rk,
                           double n0, double D);

/// F(k, lambda) = k^2 + M - Q Qhat(k) + gX Rhat(k) + gX.
double f_factor(double k, const PropagatorParams& p);

/// G_{phibar phi}(k,t) = theta(t) exp(-D F(k) t).
double phibar_phi(double k, double t, const PropagatorParams& p);

/// G_{phi phi}(k,t) = (gX Qhat(k)/F(k)) exp(-D F(k) |t|).
/// Throws CriticalPointError when F(k) = 0.
double phi_phi(double k, double t, const PropagatorParams& p);

/// Frequency-domain forms for cross-checks:
/// G_{psibar psi}(k,w) = 1/(-iw + D(k^2+M)), and
/// G_{phi phi}(k,w) = 2 D gX Qhat(k) / (w^2 + D^2 F(k)^2).
std::complex<double> bare_propagator_freq(double k, double omega, double D, double M);
double phi_phi_freq(double k, double omega, const PropagatorParams& p);

}  // namespace nlrd
