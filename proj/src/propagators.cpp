#include "nlrd/propagators.hpp"

#include <cmath>

#include "nlrd/errors.hpp"

namespace nlrd {

double bare_propagator(double k, double t, double D, double M) {
    if (t < 0.0) return 0.0;
    return std::exp(-t * D * (k * k + M));
}

double dressed_propagator(double k, double t, double D, double M, const Kernel& Qk) {
    if (t < 0.0) throw DomainError("dressed_propagator requires t >= 0");
    return std::exp(-t * (D * (k * k + M) - Qk.momentum_space(k)));
}

double response_functional(double k, double t1, double t2, const Kernel& Rk,
                           double n0, double D) {
    if (t1 < 0.0 || t1 > t2)
        throw DomainError("response_functional requires 0 <= t1 <= t2");
    const double R = Rk.rate();
    const double expo = 1.0 + Rk.momentum_shape(k);
    const double ratio = (1.0 + R * n0 * t1) / (1.0 + R * n0 * t2);
    return std::exp(-D * k * k * (t2 - t1)) * std::pow(ratio, expo);
}

double f_factor(double k, const PropagatorParams& p) {
    const double Q = p.Qk.rate();
    return k * k + p.M - Q * p.Qk.momentum_shape(k) +
           p.g * p.X * p.Rk.momentum_shape(k) + p.g * p.X;
}

double phibar_phi(double k, double t, const PropagatorParams& p) {
    if (t < 0.0) return 0.0;
    return std::exp(-p.D * f_factor(k, p) * t);
}

double phi_phi(double k, double t, const PropagatorParams& p) {
    const double F = f_factor(k, p);
    if (F == 0.0)
        throw CriticalPointError("phi_phi: F(k, lambda) = 0 at the critical point");
    return (p.g * p.X * p.Qk.momentum_shape(k) / F) *
           std::exp(-p.D * F * std::abs(t));
}

std::complex<double> bare_propagator_freq(double k, double omega, double D, double M) {
    return 1.0 / std::complex<double>(D * (k * k + M), -omega);
}

double phi_phi_freq(double k, double omega, const PropagatorParams& p) {
    const double F = f_factor(k, p);
    if (F == 0.0)
        throw CriticalPointError("phi_phi_freq: F(k, lambda) = 0 at the critical point");
    return 2.0 * p.D * p.g * p.X * p.Qk.momentum_shape(k) /
           (omega * omega + p.D * p.D * F * F);
}

}  // namespace nlrd
