#include "nlrd/meanfield.hpp"

#include <cmath>

#include "nlrd/errors.hpp"
#include "nlrd/ode.hpp"
#include "nlrd/specialfns.hpp"

namespace nlrd {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kEulerGamma = 0.57721566490153286060651209;
}  // namespace

void ModelParams::validate() const {
    if (!(D > 0.0)) throw ValidationError("ModelParams: D must be > 0");
    if (M < 0.0 || B < 0.0) throw ValidationError("ModelParams: M, B must be >= 0");
    if (n0 < 0.0) throw ValidationError("ModelParams: n0 must be >= 0");
    if (Rk.dim() != dim || Qk.dim() != dim)
        throw ValidationError("ModelParams: kernel dims must match model dim");
}

double density_model1(double n0, double R, double t) {
    if (n0 < 0.0 || R < 0.0 || t < 0.0)
        throw DomainError("density_model1 requires n0, R, t >= 0");
    return n0 / (1.0 + R * n0 * t);
}

DensityTrace density_model2_ode(const ModelParams& params,
                                const std::vector<double>& t_grid,
                                SignConvention sign) {
    if (t_grid.empty() || t_grid.front() != 0.0)
        throw ValidationError("t_grid must start at 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] <= t_grid[i - 1])
            throw ValidationError("t_grid must be strictly increasing");

    const double DB = params.D * params.B;
    const double tau = params.tau();
    const double R = params.Rk.rate();
    auto rhs = [&](double, double x) {
        const double quad = R * x * x;
        return sign == SignConvention::Physical ? DB - tau * x - quad
                                                : DB - tau * x + quad;
    };

    DensityTrace trace;
    trace.times = t_grid;
    trace.densities.reserve(t_grid.size());
    double x = params.n0;
    trace.densities.push_back(x);
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        x = ode::integrate_to(rhs, t_grid[i - 1], x, t_grid[i], 1e-12, 1e-10);
        trace.densities.push_back(x);
    }
    return trace;
}

double steady_state_model2(const ModelParams& params, SignConvention sign) {
    const double tau = params.tau();
    const double R = params.Rk.rate();
    const double DB = params.D * params.B;
    if (R == 0.0 && tau == 0.0)
        throw ValidationError("steady_state_model2 requires R > 0 or tau != 0");

    if (sign == SignConvention::Physical) {
        // DB = X (tau + R X)
        if (R == 0.0) {
            if (tau > 0.0) return DB / tau;
            if (DB == 0.0) return 0.0;
            throw NoRootError("no non-negative steady state for R = 0, tau < 0");
        }
        if (DB == 0.0) return std::max(0.0, -tau / R);
        return (-tau + std::sqrt(tau * tau + 4.0 * R * DB)) / (2.0 * R);
    }

    // paper-literal branch: DB = X (tau - R X)
    if (R == 0.0) {
        if (tau > 0.0) return DB / tau;
        if (DB == 0.0) return 0.0;
        throw NoRootError("no non-negative steady state for R = 0, tau < 0");
    }
    if (DB == 0.0) return tau >= 0.0 ? tau / R : 0.0;
    const double disc = tau * tau - 4.0 * R * DB;
    if (tau < 0.0 || disc < 0.0)
        throw NoRootError("paper-sign steady-state quadratic has no non-negative root");
    return (tau - std::sqrt(disc)) / (2.0 * R);
}

namespace {

// One-loop coefficient 4 g^2 taubar^{1-eps/2} Gamma(1+eps/2) /
// ((4 pi)^{d/2} eps (2-eps)), d = 4 - eps. Genuine simple poles sit at
// eps = 0 and eps = 2; inside a window of either we return the
// pole-subtracted finite part (minimal subtraction).
double one_loop_term(double g, double tau_bar, double eps) {
    constexpr double kWindow = 1e-4;
    const double g2 = g * g;
    if (std::abs(eps) < kWindow) {
        // T ~ g^2 taubar / (8 pi^2 eps) + finite
        return g2 * tau_bar * (1.0 - kEulerGamma + std::log(4.0 * kPi / tau_bar)) /
               (16.0 * kPi * kPi);
    }
    if (std::abs(eps - 2.0) < kWindow) {
        // d = 2: T ~ -g^2 / (4 pi (eps-2)) + finite
        return g2 * (std::log(tau_bar / (4.0 * kPi)) + kEulerGamma) / (4.0 * kPi);
    }
    const double d = 4.0 - eps;
    return 4.0 * g2 * std::pow(tau_bar, 1.0 - 0.5 * eps) *
           specialfns::gamma(1.0 + 0.5 * eps) /
           (std::pow(4.0 * kPi, 0.5 * d) * eps * (2.0 - eps));
}

}  // namespace

double equation_of_state(double X, double tau, double g, double eps, double I1,
                         double I2) {
    const double tau_bar = tau + 2.0 * g * X;
    if (!(tau_bar > 0.0))
        throw CriticalPointError("equation_of_state requires taubar = tau + 2gX > 0");
    if (g == 0.0) return X * tau_bar;
    const double two_loop = (2.0 / 3.0) * std::pow(g, 4) * std::pow(tau_bar, -eps) *
                            (g * X * (1.0 - eps) * I1 + (2.0 * I1 + 3.0 * I2) * tau_bar);
    return X * (tau_bar - g * X - one_loop_term(g, tau_bar, eps) + two_loop);
}

}  // namespace nlrd
