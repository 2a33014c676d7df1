#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "nlrd/errors.hpp"

namespace nlrd::quad {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // absolute error estimate
    long evals = 0;
    bool converged = false;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813};
constexpr double kKronrodWeights[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529};
// Gauss weights for nodes 0, 2, 4, 6 (odd Kronrod indices carry zero Gauss weight).
constexpr double kGaussWeights[4] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870};

template <class F>
void gk15(const F& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double k = kKronrodWeights[0] * f0;
    double g = kGaussWeights[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * kKronrodNodes[i];
        const double fi = f(c + dx) + f(c - dx);
        k += kKronrodWeights[i] * fi;
        if (i % 2 == 0) g += kGaussWeights[i / 2] * fi;
    }
    value = k * h;
    const double diff = std::abs(k - g) * std::abs(h);
    // standard QUADPACK-style sharpened estimate
    err = diff * std::min(1.0, std::pow(200.0 * diff / (std::abs(value) + 1e-300), 1.5));
    if (!(err > 0.0)) err = diff;
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b].
/// Splits the worst panel until |error| <= abs_tol + rel_tol * |value|.
/// Throws ToleranceError if max_panels is exhausted and throw_on_failure.
template <class F>
QuadResult integrate(const F& f, double a, double b, double abs_tol = 1e-12,
                     double rel_tol = 1e-10, int max_panels = 4000,
                     bool throw_on_failure = true) {
    QuadResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::vector<detail::Panel> heap;
    double v, e;
    detail::gk15(f, a, b, v, e);
    res.evals = 15;
    heap.push_back({a, b, v, e});
    std::make_heap(heap.begin(), heap.end());
    double total_v = v, total_e = e;
    while (total_e > abs_tol + rel_tol * std::abs(total_v)) {
        if (static_cast<int>(heap.size()) >= max_panels) {
            res.value = total_v;
            res.error = total_e;
            if (throw_on_failure)
                throw ToleranceError("adaptive quadrature: tolerance not reached (err=" +
                                     std::to_string(total_e) + ")");
            return res;
        }
        std::pop_heap(heap.begin(), heap.end());
        detail::Panel worst = heap.back();
        heap.pop_back();
        total_v -= worst.value;
        total_e -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        for (int half = 0; half < 2; ++half) {
            const double lo = half == 0 ? worst.a : mid;
            const double hi = half == 0 ? mid : worst.b;
            detail::gk15(f, lo, hi, v, e);
            res.evals += 15;
            heap.push_back({lo, hi, v, e});
            std::push_heap(heap.begin(), heap.end());
            total_v += v;
            total_e += e;
        }
        if (mid == worst.a || mid == worst.b) break;  // interval exhausted
    }
    res.value = total_v;
    res.error = total_e;
    res.converged = total_e <= abs_tol + rel_tol * std::abs(total_v);
    return res;
}

/// Convenience: integrate with the integrand split across breakpoints,
/// e.g. to isolate an integrable endpoint singularity.
template <class F>
QuadResult integrate_segments(const F& f, const std::vector<double>& pts,
                              double abs_tol = 1e-12, double rel_tol = 1e-10,
                              int max_panels = 4000, bool throw_on_failure = true) {
    QuadResult total;
    total.converged = true;
    const double n = static_cast<double>(pts.size() > 1 ? pts.size() - 1 : 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        QuadResult r = integrate(f, pts[i], pts[i + 1], abs_tol / n, rel_tol,
                                 max_panels, throw_on_failure);
        total.value += r.value;
        total.error += r.error;
        total.evals += r.evals;
        total.converged = total.converged && r.converged;
    }
    return total;
}

}  // namespace nlrd::quad
