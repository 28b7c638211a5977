#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace kgenfit::quad {

// Gauss-Legendre nodes/weights on (-1, 1), computed once per order by
// Newton iteration on the Legendre recurrence (no tabulated constants).
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

const GaussRule& gauss_legendre(int order);

namespace detail {
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
}  // namespace detail

template <typename T, typename F>
T gauss_panel(F&& f, double a, double b, const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    T acc{};
    for (std::size_t j = 0; j < rule.x.size(); ++j)
        acc += static_cast<T>(rule.w[j] * half) * f(mid + half * rule.x[j]);
    return acc;
}

template <typename T>
struct AdaptiveResult {
    T value{};
    double error = 0.0;   // accumulated error estimate
    long evals = 0;
    bool converged = true;
};

// Adaptive bisection with a GL15/GL7 error estimate per panel. The
// tolerance is absolute and split across subpanels.
template <typename T, typename F>
void adaptive_panel(F&& f, double a, double b, double tol, int depth,
                    AdaptiveResult<T>& out) {
    const GaussRule& g7 = gauss_legendre(7);
    const GaussRule& g15 = gauss_legendre(15);
    T coarse = gauss_panel<T>(f, a, b, g7);
    T fine = gauss_panel<T>(f, a, b, g15);
    out.evals += 22;
    double err = detail::magnitude(fine - coarse);
    if (err <= tol || depth >= 48 || !(b - a > 0.0)) {
        out.value += fine;
        out.error += err;
        if (err > tol && depth >= 48) out.converged = false;
        return;
    }
    const double mid = 0.5 * (a + b);
    adaptive_panel(f, a, mid, 0.5 * tol, depth + 1, out);
    adaptive_panel(f, mid, b, 0.5 * tol, depth + 1, out);
}

template <typename T, typename F>
AdaptiveResult<T> integrate_adaptive(F&& f, double a, double b, double abs_tol) {
    AdaptiveResult<T> out;
    adaptive_panel<T>(f, a, b, abs_tol, 0, out);
    return out;
}

// As above but starting from a caller-supplied panelisation (e.g. period
// boundaries of an oscillatory factor). Tolerance is per the whole range.
template <typename T, typename F>
AdaptiveResult<T> integrate_panels(F&& f, const std::vector<double>& bounds,
                                   double abs_tol) {
    AdaptiveResult<T> out;
    if (bounds.size() < 2) return out;
    const double per_panel = abs_tol / static_cast<double>(bounds.size() - 1);
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
        adaptive_panel<T>(f, bounds[i], bounds[i + 1], per_panel, 0, out);
    return out;
}

}  // namespace kgenfit::quad
