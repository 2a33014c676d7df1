#pragma once

#include <vector>

namespace nlrd {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    int n = 0;
};

/// Ordinary least squares y = a + b x with the usual residual-based
/// standard error on the slope.
FitResult fit_linear(const std::vector<double>& xs, const std::vector<double>& ys);

/// Least-squares slope of log(y) vs log(t) restricted to t in [t_lo, t_hi].
/// Throws ValidationError with fewer than min_points usable samples or any
/// non-positive y in the window.
FitResult fit_loglog(const std::vector<double>& ts, const std::vector<double>& ys,
                     double t_lo, double t_hi, int min_points = 8);

}  // namespace nlrd
