#include "nlrd/fitting.hpp"

#include <cmath>

#include "nlrd/errors.hpp"

namespace nlrd {

FitResult fit_linear(const std::vector<double>& xs, const std::vector<double>& ys) {
    const int n = static_cast<int>(xs.size());
    if (n < 2 || ys.size() != xs.size())
        throw ValidationError("fit_linear needs >= 2 matched points");
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw ValidationError("fit_linear: degenerate abscissa");
    FitResult r;
    r.n = n;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double ss_res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = ys[i] - (r.intercept + r.slope * xs[i]);
        ss_res += e * e;
    }
    r.stderr_slope = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
    return r;
}

FitResult fit_loglog(const std::vector<double>& ts, const std::vector<double>& ys,
                     double t_lo, double t_hi, int min_points) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ts.size() && i < ys.size(); ++i) {
        if (ts[i] < t_lo || ts[i] > t_hi) continue;
        if (!(ys[i] > 0.0))
            throw ValidationError("fit_loglog: non-positive density in window");
        lx.push_back(std::log(ts[i]));
        ly.push_back(std::log(ys[i]));
    }
    if (static_cast<int>(lx.size()) < min_points)
        throw ValidationError("fit_loglog: insufficient data in window (" +
                              std::to_string(lx.size()) + " points)");
    return fit_linear(lx, ly);
}

}  // namespace nlrd
