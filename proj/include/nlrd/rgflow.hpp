#pragma once

#include "nlrd/meanfield.hpp"

namespace nlrd::rgflow {

/// Space-time-field rescaling factors p' = gamma p, t' = eta t,
/// psi' = alpha psi, psibar' = beta psibar. Model I forces beta = 1,
/// alpha = gamma^-d; Model II uses the symmetric choice with
/// alpha beta gamma^d = 1.
struct RescaleFactors {
    double gamma;
    double eta;
    double alpha;
    double beta;
};

RescaleFactors model1_factors(double gamma, double d);
RescaleFactors model2_factors(double gamma, double R3, double Q3, double d);

/// Model I action-preserving parameter update at eta = gamma^2:
/// D' = D, R' = gamma^{d-2} R, lambda' = lambda/gamma, n0' = gamma^{-d} n0.
ModelParams rescale_model1(const ModelParams& params, double gamma);

/// Vertex function in momentum-Laplace space,
/// R / (1 + R (g*)^{-1} (s + k^2/2)^{d/2-1}).
double vertex_gamma12(double k, double s, double R, double d);

/// Fixed-point coupling g* = (4 pi)^{1-eps/2} / Gamma(eps/2), eps = 2 - d.
/// Throws PoleError at eps in {0, -2, -4, ...} where 1/Gamma vanishes.
double gstar(double eps);

/// g_r = g / (1 + g/g*).
double renormalize_g(double g, double eps);

/// Flow of the renormalized coupling along gamma:
/// g*/g_r' - 1 = gamma^{2-d} (g*/g_r - 1) with eps = 2 - d.
double flow_g_r(double g_r, double gamma, double eps);

/// Leading large-t density: d < 2 -> t^{-d/2} (1/g* - (2C+5)/(16 pi));
/// d > 2 -> 1/(R t). Throws at the marginal d = 2 (logs out of scope).
double asymptotic_density_model1(double t, double d, double R);

/// Model II coupling tuple (paper's D-scaled coefficients).
struct Model2Couplings {
    double Q2 = 0.0;
    double Q3 = 0.0;
    double R3 = 0.0;
    double R4 = 0.0;
    double M = 0.0;
    double B = 0.0;
    double lambda_r = 1.0;
    double lambda_q = 1.0;
    double dim = 4.0;

    double g() const;  // sqrt(R3 Q3)
    double b() const;  // sqrt(R3/Q3) B
};

/// Model II action-preserving update with the symmetric field choice:
/// Q2' = g^-2 Q2, M' = g^-2 M, B' = g^{-2-d} beta^{-1} B, R4' = g^{d-2} R4,
/// R3' = Q3' = g^{d/2-2} sqrt(R3 Q3), lambda' = lambda/gamma.
Model2Couplings rescale_model2(const Model2Couplings& params, double gamma);

struct ZFactors {
    double Z;
    double Z_D;
    double Z_tau;
    double Z_g;
};

/// The four renormalization factors to order u^2 exactly as printed.
ZFactors z_factors(double u, double eps);

/// Solved one-loop flow u(gamma) = u eps gamma^{-eps} /
/// (eps - 6u + 6u gamma^{-eps}); throws when the denominator is <= 0.
double u_flow(double u, double gamma, double eps);

/// Wilson beta function -eps u + 6 u^2.
double beta_u(double u, double eps);

struct CriticalExponents {
    double tau_exp;  // tau(gamma) = tau gamma^{tau_exp}
    double x_exp;    // X(gamma) = X gamma^{x_exp}
    double b_exp;    // b ~ gamma^{b_exp} prefactor exponent
};

/// Small-gamma exponents: tau -> -2 + eps/4, X -> -d/2 + eps/12,
/// b -> 2 + d/2 - (eps^2/144)(7/4 - (17/2) ln(4/3)), d = 4 - eps.
CriticalExponents critical_exponents_model2(double eps);

/// Density-onset exponent beta = 1 - eps/6 at one loop.
double mean_field_beta_exponent(double eps);

struct CsArgsModel1 {
    double p = 0.0;
    double t = 0.0;
    double g_r = 0.0;
    double lambda = 1.0;
    double n0 = 0.0;
};

struct CsScaledModel1 {
    double prefactor;
    CsArgsModel1 args;
};

/// Callan-Symanzik solution tuple for Model I: prefactor gamma^d with
/// arguments (p gamma, t gamma^2, g_r(gamma), lambda/gamma, n0 gamma^{-d}).
CsScaledModel1 cs_rescaled_args_model1(const CsArgsModel1& args, double gamma,
                                       double d);

struct CsArgsModel2 {
    double tau = 0.0;
    double X = 0.0;
    double u = 0.0;
    double lambda = 1.0;
};

struct CsScaledModel2 {
    double prefactor;
    CsArgsModel2 args;
};

/// Model II analogue: prefactor mu^{2+d/2} gamma^{b_exp} with arguments
/// (mu^-2 tau(gamma), mu^{-d/2} X(gamma), u(gamma), lambda/(mu gamma)).
CsScaledModel2 cs_rescaled_args_model2(const CsArgsModel2& args, double gamma,
                                       double eps, double mu);

}  // namespace nlrd::rgflow
