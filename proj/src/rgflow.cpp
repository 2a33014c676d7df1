#include "nlrd/rgflow.hpp"

#include <cmath>

#include "nlrd/errors.hpp"
#include "nlrd/specialfns.hpp"

namespace nlrd::rgflow {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kEulerGamma = 0.57721566490153286060651209;
constexpr double kLog43 = 0.28768207245178092743921900599;
}  // namespace

RescaleFactors model1_factors(double gamma, double d) {
    if (!(gamma > 0.0)) throw ValidationError("gamma must be > 0");
    return {gamma, gamma * gamma, std::pow(gamma, -d), 1.0};
}

RescaleFactors model2_factors(double gamma, double R3, double Q3, double d) {
    if (!(gamma > 0.0)) throw ValidationError("gamma must be > 0");
    if (!(R3 > 0.0 && Q3 > 0.0))
        throw ValidationError("model2 factors require R3, Q3 > 0");
    const double root = std::sqrt(R3 / Q3);
    return {gamma, gamma * gamma, std::pow(gamma, -0.5 * d) * root,
            std::pow(gamma, -0.5 * d) / root};
}

ModelParams rescale_model1(const ModelParams& params, double gamma) {
    if (!(gamma > 0.0)) throw ValidationError("gamma must be > 0");
    const double d = params.dim;
    ModelParams out = params;
    out.Rk = Kernel(params.Rk.profile(),
                    std::pow(gamma, d - 2.0) * params.Rk.rate(),
                    params.Rk.profile() == Profile::Local
                        ? params.Rk.precision()
                        : params.Rk.precision() / gamma,
                    d);
    out.n0 = std::pow(gamma, -d) * params.n0;
    return out;
}

double vertex_gamma12(double k, double s, double R, double d) {
    const double arg = s + 0.5 * k * k;
    if (!(arg > 0.0)) throw DomainError("vertex_gamma12 requires s + k^2/2 > 0");
    const double gs = gstar(2.0 - d);
    return R / (1.0 + R / gs * std::pow(arg, 0.5 * d - 1.0));
}

double gstar(double eps) {
    const double half = 0.5 * eps;
    const double rounded = std::round(half);
    if (rounded <= 0.0 && std::abs(half - rounded) < 1e-12)
        throw PoleError("gstar undefined at eps in {0, -2, -4, ...}");
    return std::pow(4.0 * kPi, 1.0 - half) / specialfns::gamma(half);
}

double renormalize_g(double g, double eps) {
    if (g < 0.0) throw DomainError("renormalize_g requires g >= 0");
    return g / (1.0 + g / gstar(eps));
}

double flow_g_r(double g_r, double gamma, double eps) {
    if (!(gamma > 0.0)) throw ValidationError("gamma must be > 0");
    if (g_r == 0.0) return 0.0;
    const double gs = gstar(eps);
    return gs / (1.0 + std::pow(gamma, eps) * (gs / g_r - 1.0));
}

double asymptotic_density_model1(double t, double d, double R) {
    if (!(t > 0.0)) throw DomainError("asymptotic density requires t > 0");
    if (std::abs(d - 2.0) < 1e-12)
        throw DomainError("marginal dimension d = 2: logarithmic corrections "
                          "are out of scope");
    if (d > 2.0) return 1.0 / (R * t);
    const double amp =
        1.0 / gstar(2.0 - d) - (2.0 * kEulerGamma + 5.0) / (16.0 * kPi);
    return amp * std::pow(t, -0.5 * d);
}

double Model2Couplings::g() const { return std::sqrt(R3 * Q3); }
double Model2Couplings::b() const { return std::sqrt(R3 / Q3) * B; }

Model2Couplings rescale_model2(const Model2Couplings& p, double gamma) {
    if (!(gamma > 0.0)) throw ValidationError("gamma must be > 0");
    const double d = p.dim;
    const RescaleFactors f = model2_factors(gamma, p.R3, p.Q3, d);
    Model2Couplings out = p;
    out.Q2 = p.Q2 / (gamma * gamma);
    out.M = p.M / (gamma * gamma);
    out.B = std::pow(gamma, -2.0 - d) / f.beta * p.B;
    out.R4 = std::pow(gamma, d - 2.0) * p.R4;
    out.R3 = out.Q3 = std::pow(gamma, 0.5 * d - 2.0) * std::sqrt(p.R3 * p.Q3);
    out.lambda_r = p.lambda_r / gamma;
    out.lambda_q = p.lambda_q / gamma;
    return out;
}

ZFactors z_factors(double u, double eps) {
    if (eps == 0.0) throw PoleError("z_factors require eps != 0");
    const double u2 = u * u;
    ZFactors z;
    z.Z = 1.0 + u / eps +
          (7.0 / eps - 3.0 + 4.5 * kLog43) * u2 / (2.0 * eps);
    z.Z_D = 1.0 + u / (2.0 * eps) +
            (13.0 / eps - 31.0 / 4.0 + 17.5 * kLog43) * u2 / (8.0 * eps);
    z.Z_tau = 1.0 + 2.0 * u / eps + (1.0 / eps - 5.0 / 16.0) * 8.0 * u2 / eps;
    z.Z_g = 1.0 + 4.0 * u / eps + (5.0 / eps - 7.0 / 4.0) * 4.0 * u2 / eps;
    return z;
}

double u_flow(double u, double gamma, double eps) {
    if (!(gamma > 0.0)) throw ValidationError("gamma must be > 0");
    const double ge = std::pow(gamma, -eps);
    const double denom = eps - 6.0 * u + 6.0 * u * ge;
    if (!(denom > 0.0))
        throw NumericalError("u_flow: denominator <= 0, flow left the "
                             "perturbative domain");
    return u * eps * ge / denom;
}

double beta_u(double u, double eps) { return -eps * u + 6.0 * u * u; }

CriticalExponents critical_exponents_model2(double eps) {
    const double d = 4.0 - eps;
    CriticalExponents ce;
    ce.tau_exp = -2.0 + eps / 4.0;
    ce.x_exp = -0.5 * d + eps / 12.0;
    ce.b_exp = 2.0 + 0.5 * d - (eps * eps / 144.0) * (1.75 - 8.5 * kLog43);
    return ce;
}

double mean_field_beta_exponent(double eps) { return 1.0 - eps / 6.0; }

CsScaledModel1 cs_rescaled_args_model1(const CsArgsModel1& args, double gamma,
                                       double d) {
    if (!(gamma > 0.0)) throw ValidationError("gamma must be > 0");
    CsScaledModel1 out;
    out.prefactor = std::pow(gamma, d);
    out.args.p = args.p * gamma;
    out.args.t = args.t * gamma * gamma;
    out.args.g_r = flow_g_r(args.g_r, gamma, 2.0 - d);
    out.args.lambda = args.lambda / gamma;
    out.args.n0 = args.n0 * std::pow(gamma, -d);
    return out;
}

CsScaledModel2 cs_rescaled_args_model2(const CsArgsModel2& args, double gamma,
                                       double eps, double mu) {
    if (!(gamma > 0.0)) throw ValidationError("gamma must be > 0");
    if (!(mu > 0.0)) throw ValidationError("mu must be > 0");
    const double d = 4.0 - eps;
    const CriticalExponents ce = critical_exponents_model2(eps);
    CsScaledModel2 out;
    out.prefactor =
        std::pow(mu, 2.0 + 0.5 * d) * std::pow(gamma, ce.b_exp);
    out.args.tau = args.tau * std::pow(gamma, ce.tau_exp) / (mu * mu);
    out.args.X = args.X * std::pow(gamma, ce.x_exp) * std::pow(mu, -0.5 * d);
    out.args.u = u_flow(args.u, gamma, eps);
    out.args.lambda = args.lambda / (mu * gamma);
    return out;
}

}  // namespace nlrd::rgflow
