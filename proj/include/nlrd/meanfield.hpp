#pragma once

#include <vector>

#include "nlrd/kernels.hpp"
#include "nlrd/trace.hpp"

namespace nlrd {

/// Full parameter set for Models I/II.
///
/// Unit convention: Rk carries the plain annihilation rate R; Qk's rate is
/// the physical branching rate D*Q; M and B are the D-scaled coefficients of
/// the paper (physical rates D*M and D*B). D multiplies each coefficient
/// exactly once, here and in the propagator layer.
struct ModelParams {
    double D = 1.0;
    Kernel Rk;
    Kernel Qk;
    double M = 0.0;
    double B = 0.0;
    double n0 = 0.0;
    double dim = 1.0;

    /// tau = D (M - Q), the death-minus-branching control parameter.
    double tau() const { return D * M - Qk.rate(); }

    void validate() const;
};

/// Sign conventions for the Model I/II classical dynamics. The paper's
/// literal recursions give dX/dt = +R X^2 (Model I) and steady state
/// DB = X(tau - R X) (Model II), which conflict with its own solution
/// n0/(1+R n0 t) and with positive density for death-dominated tau > 0.
/// Physical: annihilation decreases density, dX/dt = DB - tau X - R X^2.
/// PaperSign: the literal printed formulas, kept for comparison.
enum class SignConvention { Physical, PaperSign };

/// Model I classical density n0 / (1 + R n0 t). Kernel-independent because
/// every profile has Rhat(0) = 1.
double density_model1(double n0, double R, double t);

/// Model II classical density by adaptive Riccati integration over t_grid
/// (increasing, starting at 0). Local error <= 1e-10. PaperSign may throw
/// BlowUpError (finite-time blow-up of +R X^2).
DensityTrace density_model2_ode(const ModelParams& params,
                                const std::vector<double>& t_grid,
                                SignConvention sign = SignConvention::Physical);

/// Stable non-negative steady state. Physical: root of DB = X(tau + R X);
/// with B = 0 this is max(0, -tau/R). PaperSign: the paper's literal
/// branch (0 for tau < 0, tau/R for tau >= 0 at B = 0).
double steady_state_model2(const ModelParams& params,
                           SignConvention sign = SignConvention::Physical);

/// Loop-corrected equation of state b(X): tree + one-loop + two-loop terms,
/// eps = 4 - d. I1, I2 are caller-supplied numerical constants (they enter
/// the two-loop term and have no in-repo values). The one-loop coefficient
/// has simple poles at eps = 0 and eps = 2; inside a small window around
/// either, the pole part is subtracted and the finite part returned.
double equation_of_state(double X, double tau, double g, double eps, double I1,
                         double I2);

}  // namespace nlrd
