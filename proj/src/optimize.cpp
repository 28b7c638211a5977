#include "kgenfit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kgenfit::opt {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

struct Simplex {
    std::vector<std::vector<double>> x;
    std::vector<double> f;
};

double eval_safe(const Objective& obj, std::span<const double> x) {
    double v = obj(x);
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
}

Simplex initial_simplex(const Objective& f, std::span<const double> x0,
                        double step_rel, double step_abs) {
    const std::size_t dim = x0.size();
    Simplex s;
    s.x.assign(dim + 1, std::vector<double>(x0.begin(), x0.end()));
    s.f.assign(dim + 1, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        double& xi = s.x[i + 1][i];
        xi += (xi != 0.0) ? step_rel * std::abs(xi) : step_abs;
    }
    for (std::size_t v = 0; v <= dim; ++v) s.f[v] = eval_safe(f, s.x[v]);
    return s;
}

void sort_simplex(Simplex& s) {
    const std::size_t count = s.f.size();
    std::vector<std::size_t> idx(count);
    for (std::size_t i = 0; i < count; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return s.f[a] > s.f[b]; });
    Simplex sorted;
    sorted.x.reserve(count);
    sorted.f.reserve(count);
    for (std::size_t i : idx) {
        sorted.x.push_back(std::move(s.x[i]));
        sorted.f.push_back(s.f[i]);
    }
    s = std::move(sorted);
}

double diameter(const Simplex& s) {
    double d = 0.0;
    for (std::size_t v = 1; v < s.x.size(); ++v)
        for (std::size_t i = 0; i < s.x[0].size(); ++i)
            d = std::max(d, std::abs(s.x[v][i] - s.x[0][i]));
    return d;
}

// One Nelder-Mead run; iterations are counted into `used`.
bool run_simplex(const Objective& f, Simplex& s, const NelderMeadOptions& opts,
                 int budget, int& used) {
    const std::size_t dim = s.x[0].size();
    std::vector<double> centroid(dim), xr(dim), xt(dim);
    for (int it = 0; it < budget; ++it) {
        sort_simplex(s);
        const double spread = s.f.front() - s.f.back();
        if (spread <= opts.ftol || diameter(s) <= opts.xtol) {
            used += it;
            return true;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t v = 0; v < dim; ++v)
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += s.x[v][i];
        for (std::size_t i = 0; i < dim; ++i) centroid[i] /= static_cast<double>(dim);

        auto& worst_x = s.x.back();
        double& worst_f = s.f.back();

        for (std::size_t i = 0; i < dim; ++i)
            xr[i] = centroid[i] + kReflect * (centroid[i] - worst_x[i]);
        const double fr = eval_safe(f, xr);

        if (fr > s.f.front()) {
            for (std::size_t i = 0; i < dim; ++i)
                xt[i] = centroid[i] + kExpand * (xr[i] - centroid[i]);
            const double fe = eval_safe(f, xt);
            if (fe > fr) {
                worst_x = xt;
                worst_f = fe;
            } else {
                worst_x = xr;
                worst_f = fr;
            }
        } else if (fr > s.f[dim - 1]) {
            worst_x = xr;
            worst_f = fr;
        } else {
            const bool outside = fr > worst_f;
            const auto& base = outside ? xr : worst_x;
            for (std::size_t i = 0; i < dim; ++i)
                xt[i] = centroid[i] + kContract * (base[i] - centroid[i]);
            const double fc = eval_safe(f, xt);
            if (fc > (outside ? fr : worst_f)) {
                worst_x = xt;
                worst_f = fc;
            } else {
                for (std::size_t v = 1; v <= dim; ++v) {
                    for (std::size_t i = 0; i < dim; ++i)
                        s.x[v][i] = s.x[0][i] + kShrink * (s.x[v][i] - s.x[0][i]);
                    s.f[v] = eval_safe(f, s.x[v]);
                }
            }
        }
    }
    used += budget;
    return false;
}

}  // namespace

MaximizeResult nelder_mead_maximize(const Objective& f, std::span<const double> x0,
                                    const NelderMeadOptions& opts) {
    if (x0.empty()) throw std::invalid_argument("nelder_mead_maximize: empty start point");
    if (!std::isfinite(f(x0)))
        throw std::invalid_argument("nelder_mead_maximize: objective not finite at x0");

    Simplex s = initial_simplex(f, x0, opts.step_rel, opts.step_abs);
    int used = 0;
    bool converged = run_simplex(f, s, opts, opts.max_iter, used);

    if (opts.restart) {
        sort_simplex(s);
        Simplex s2 = initial_simplex(f, s.x[0], 0.5 * opts.step_rel, 0.5 * opts.step_abs);
        bool conv2 = run_simplex(f, s2, opts, opts.max_iter, used);
        sort_simplex(s2);
        if (s2.f[0] >= s.f[0]) {
            s = std::move(s2);
            converged = conv2;
        }
    }

    sort_simplex(s);
    return {s.x[0], s.f[0], used, converged};
}

MaximizeResult maximize(const Objective& f, std::span<const double> x0,
                        double tol, int max_iter) {
    NelderMeadOptions opts;
    opts.ftol = tol;
    opts.xtol = tol;
    opts.max_iter = max_iter;
    return nelder_mead_maximize(f, x0, opts);
}

}  // namespace kgenfit::opt
