#include "kgenfit/fitters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgenfit/errors.hpp"
#include "kgenfit/gof.hpp"
#include "kgenfit/kernels.hpp"
#include "kgenfit/optimize.hpp"

namespace kgenfit {

const char* family_name(Family f) {
    switch (f) {
        case Family::kappa: return "kappa";
        case Family::stable: return "stable";
        case Family::normal: return "normal";
    }
    return "?";
}

namespace {

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// kappa = eps + logistic(t1) (1 - 2 eps), alpha = exp(t2), beta = exp(t3)
struct KappaTransform {
    kappa::KappaParams to_params(std::span<const double> th) const {
        const double eps = kappa::kKappaEps;
        return kappa::KappaParams(eps + logistic(th[0]) * (1.0 - 2.0 * eps),
                                  std::exp(th[1]), std::exp(th[2]));
    }
    std::array<double, 3> to_theta(double kappa_v, double alpha_v, double beta_v) const {
        const double eps = kappa::kKappaEps;
        const double p = std::clamp((kappa_v - eps) / (1.0 - 2.0 * eps), 1e-6, 1.0 - 1e-6);
        return {logit(p), std::log(alpha_v), std::log(beta_v)};
    }
};

// Weibull P(X > x) = exp(-beta x^alpha) by moment matching: the squared
// coefficient of variation pins the shape, the mean pins the scale.
void weibull_moments(std::span<const double> data, double& alpha_out, double& beta_out) {
    const double n = static_cast<double>(data.size());
    double mean = 0.0;
    for (double v : data) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : data) var += (v - mean) * (v - mean);
    var /= n;
    const double cv2 = std::max(var / (mean * mean), 1e-6);

    auto cv2_of = [](double k) {
        const double g1 = std::lgamma(1.0 + 1.0 / k);
        const double g2 = std::lgamma(1.0 + 2.0 / k);
        return std::exp(g2 - 2.0 * g1) - 1.0;
    };
    double lo = 0.08, hi = 30.0;  // cv2_of is decreasing in k
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cv2_of(mid) > cv2)
            lo = mid;
        else
            hi = mid;
    }
    const double k = 0.5 * (lo + hi);
    const double lambda = mean / std::exp(std::lgamma(1.0 + 1.0 / k));
    alpha_out = k;
    beta_out = std::pow(lambda, -k);
}

// Log-log regression of the empirical tail over the upper decile; the
// slope estimates -alpha/kappa and the intercept -(1/kappa) log(2 kappa beta).
bool tail_slope_init(const std::vector<double>& sorted, double alpha0,
                     double& kappa_out, double& beta_out) {
    const std::size_t n = sorted.size();
    const std::size_t start = n - std::max<std::size_t>(n / 10, 10);
    if (start + 4 >= n) return false;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = start; i < n; ++i) {
        if (!(sorted[i] > 0.0)) return false;
        const double lx = std::log(sorted[i]);
        const double ls = std::log(static_cast<double>(n - i) / static_cast<double>(n + 1));
        sx += lx;
        sy += ls;
        sxx += lx * lx;
        sxy += lx * ls;
        ++m;
    }
    const double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) return false;
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;
    if (!(slope < -0.05)) return false;
    const double exponent = -slope;  // alpha / kappa
    const double k = std::clamp(alpha0 / exponent, 0.05, 0.95);
    // intercept = -(1/kappa) log(2 kappa beta)
    const double b = std::exp(-k * intercept) / (2.0 * k);
    if (!std::isfinite(b) || !(b > 0.0)) return false;
    kappa_out = k;
    beta_out = b;
    return true;
}

double ks_against_kappa(std::span<const double> tail, const kappa::KappaParams& p) {
    return gof::ks_statistic_batch(tail, [&](std::span<const double> xs, std::span<double> out) {
        kernels::active_ops().kappa_survival(xs.data(), xs.size(), p.kappa, p.alpha, p.beta,
                                             out.data());
    });
}

}  // namespace

FitResult fit_kappa(std::span<const double> tail) {
    if (tail.empty()) throw DegenerateInputError("fit_kappa: empty tail sample");
    std::vector<double> lx(tail.size());
    for (std::size_t i = 0; i < tail.size(); ++i) {
        if (!(tail[i] > 0.0) || !std::isfinite(tail[i]))
            throw std::domain_error("fit_kappa: tail data must be positive and finite");
        lx[i] = std::log(tail[i]);
    }
    const bool low_sample = tail.size() < 30;

    const KappaTransform transform;
    auto objective = [&](std::span<const double> th) -> double {
        const kappa::KappaParams p = transform.to_params(th);
        return kernels::active_ops().kappa_loglik_sum(tail.data(), lx.data(), tail.size(),
                                                      p.kappa, p.alpha, p.beta);
    };

    double alpha_w = 1.0, beta_w = 1.0;
    weibull_moments(tail, alpha_w, beta_w);

    std::vector<std::array<double, 3>> starts;
    starts.push_back(transform.to_theta(0.3, alpha_w, beta_w));
    starts.push_back(transform.to_theta(0.7, alpha_w, beta_w));
    std::vector<double> sorted(tail.begin(), tail.end());
    std::sort(sorted.begin(), sorted.end());
    if (double k0 = 0, b0 = 0; tail_slope_init(sorted, alpha_w, k0, b0))
        starts.push_back(transform.to_theta(k0, alpha_w, b0));

    opt::NelderMeadOptions opts;
    opts.ftol = 1e-9;
    opts.xtol = 1e-10;
    opts.max_iter = 900;
    opts.step_rel = 0.25;
    opts.step_abs = 0.25;

    bool have = false;
    opt::MaximizeResult best{};
    int total_iter = 0;
    for (const auto& th0 : starts) {
        if (!std::isfinite(objective(th0))) continue;
        auto res = opt::nelder_mead_maximize(objective, th0, opts);
        total_iter += res.iterations;
        if (!std::isfinite(res.value)) continue;
        if (!have || res.value > best.value) {
            best = res;
            have = true;
        }
    }
    if (!have) throw ConvergenceError("fit_kappa: every start failed");

    const kappa::KappaParams p = transform.to_params(best.x);
    FitResult out{Family::kappa, p, best.value, ks_against_kappa(tail, p),
                  best.converged, total_iter, low_sample};
    return out;
}

FitResult fit_normal(std::span<const double> returns) {
    if (returns.size() < 2)
        throw ValidationError("fit_normal: need at least 2 observations");
    const double n = static_cast<double>(returns.size());
    double mu = 0.0;
    for (double r : returns) mu += r;
    mu /= n;
    double ss = 0.0;
    for (double r : returns) ss += (r - mu) * (r - mu);
    const double sigma = std::sqrt(ss / n);  // MLE: divide by n
    if (!(sigma > 0.0))
        throw DegenerateInputError("fit_normal: zero variance sample");

    const NormalParams p{mu, sigma};
    double ll = 0.0;
    const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi) - std::log(sigma);
    for (double r : returns) {
        const double zc = (r - mu) / sigma;
        ll += log_norm - 0.5 * zc * zc;
    }
    const double ks = gof::ks_statistic(returns,
                                        [&](double x) { return normal_survival(x, p); });
    return {Family::normal, p, ll, ks, true, 0, false};
}

FitResult fit_stable(std::span<const double> returns, bool heavy_tailed) {
    const stable::StableFit fit = stable::fit_mle(returns, heavy_tailed);
    std::vector<double> sorted(returns.begin(), returns.end());
    std::sort(sorted.begin(), sorted.end());
    const std::vector<double> cdfs = stable::cdf_batch(sorted, fit.params);
    const double ks = gof::ks_statistic_batch(
        sorted, [&](std::span<const double> xs, std::span<double> out) {
            // xs arrives sorted (same order): survival = 1 - cdf
            for (std::size_t i = 0; i < xs.size(); ++i) out[i] = 1.0 - cdfs[i];
        });
    return {Family::stable, fit.params, fit.loglik, ks, fit.converged, fit.iterations, false};
}

double normal_survival(double x, const NormalParams& p) {
    return 0.5 * std::erfc((x - p.mu) / (p.sigma * std::numbers::sqrt2));
}

}  // namespace kgenfit
