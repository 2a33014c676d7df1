#pragma once

#include <algorithm>
#include <cmath>

#include "nlrd/errors.hpp"

namespace nlrd::ode {

/// Adaptive Cash-Karp RK45 for a scalar ODE y' = f(t, y).
/// Advances from (t0, y0) to t1 keeping the local error below
/// abs_tol + rel_tol * |y| per step. Throws BlowUpError if |y| escapes
/// past blow_up_limit (finite-time blow-up), ToleranceError if the step
/// size underflows.
template <class F>
double integrate_to(const F& f, double t0, double y0, double t1,
                    double abs_tol = 1e-12, double rel_tol = 1e-10,
                    double blow_up_limit = 1e12) {
    if (t1 == t0) return y0;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0, y = y0;
    double h = dir * std::max(1e-8, std::abs(t1 - t0) / 100.0);

    // Cash-Karp tableau
    constexpr double b21 = 1.0 / 5.0;
    constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    constexpr double b41 = 3.0 / 10.0, b42 = -9.0 / 10.0, b43 = 6.0 / 5.0;
    constexpr double b51 = -11.0 / 54.0, b52 = 5.0 / 2.0, b53 = -70.0 / 27.0,
                     b54 = 35.0 / 27.0;
    constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0,
                     b63 = 575.0 / 13824.0, b64 = 44275.0 / 110592.0,
                     b65 = 253.0 / 4096.0;
    constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                     c6 = 512.0 / 1771.0;
    constexpr double d1 = c1 - 2825.0 / 27648.0, d3 = c3 - 18575.0 / 48384.0,
                     d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0,
                     d6 = c6 - 1.0 / 4.0;

    for (int step = 0; step < 20000000; ++step) {
        if ((t - t1) * dir >= 0.0) return y;
        if ((t + h - t1) * dir > 0.0) h = t1 - t;

        const double k1 = f(t, y);
        const double k2 = f(t + 0.2 * h, y + h * b21 * k1);
        const double k3 = f(t + 0.3 * h, y + h * (b31 * k1 + b32 * k2));
        const double k4 = f(t + 0.6 * h, y + h * (b41 * k1 + b42 * k2 + b43 * k3));
        const double k5 = f(t + h, y + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
        const double k6 = f(t + 0.875 * h,
                            y + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));

        const double dy = h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
        const double err = std::abs(h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6));
        const double tol = abs_tol + rel_tol * std::max(std::abs(y), std::abs(y + dy));

        if (err <= tol) {
            t += h;
            y += dy;
            if (std::abs(y) > blow_up_limit || !std::isfinite(y))
                throw BlowUpError("ODE solution blew up near t = " + std::to_string(t));
            const double grow = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
            h *= std::clamp(grow, 0.2, 5.0);
        } else {
            h *= std::max(0.1, 0.9 * std::pow(tol / err, 0.25));
        }
        if (std::abs(h) < 1e-15 * (std::abs(t) + 1.0))
            throw ToleranceError("ODE step size underflow at t = " + std::to_string(t));
    }
    throw ToleranceError("ODE integration exceeded the step budget");
}

}  // namespace nlrd::ode
