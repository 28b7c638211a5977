#include "kgenfit/kappa.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kgenfit/kernels.hpp"
#include "kgenfit/rng.hpp"

namespace kgenfit::kappa {

namespace {

void check_kappa_open01(double kappa) {
    if (!(kappa > 0.0) || !(kappa < 1.0) || !std::isfinite(kappa))
        throw std::domain_error("kappa must lie in (0, 1), got " + std::to_string(kappa));
}

void check_positive_x(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("x must be positive and finite, got " + std::to_string(x));
}

}  // namespace

KappaParams::KappaParams(double kappa_, double alpha_, double beta_)
    : kappa(kappa_), alpha(alpha_), beta(beta_) {
    if (!std::isfinite(kappa) || !(kappa > kKappaEps) || !(kappa < 1.0 - kKappaEps))
        throw std::domain_error("kappa must lie in (" + std::to_string(kKappaEps) + ", 1 - " +
                                std::to_string(kKappaEps) + "), got " + std::to_string(kappa));
    if (!std::isfinite(alpha) || !(alpha > 0.0))
        throw std::domain_error("alpha must be positive, got " + std::to_string(alpha));
    if (!std::isfinite(beta) || !(beta > 0.0))
        throw std::domain_error("beta must be positive, got " + std::to_string(beta));
}

double kexp(double x, double kappa) {
    check_kappa_open01(kappa);
    if (!std::isfinite(x)) throw std::domain_error("kexp: x must be finite");
    // (sqrt(1 + k^2 x^2) + k x)^(1/k) == exp(asinh(k x) / k)
    return std::exp(std::asinh(kappa * x) / kappa);
}

double klog(double x, double kappa) {
    check_kappa_open01(kappa);
    check_positive_x(x);
    // (x^k - x^(-k)) / (2k) == sinh(k log x) / k
    return std::sinh(kappa * std::log(x)) / kappa;
}

double survival(double x, const KappaParams& p) {
    check_positive_x(x);
    double out;
    kernels::active_ops().kappa_survival(&x, 1, p.kappa, p.alpha, p.beta, &out);
    return out;
}

double cdf(double x, const KappaParams& p) { return 1.0 - survival(x, p); }

double pdf(double x, const KappaParams& p) {
    check_positive_x(x);
    const double t = p.beta * std::pow(x, p.alpha);
    const double u = p.kappa * t;
    const double root = std::sqrt(1.0 + u * u);
    return p.alpha * p.beta * std::pow(x, p.alpha - 1.0) * std::exp(-std::asinh(u) / p.kappa) / root;
}

double log_pdf(double x, const KappaParams& p) {
    check_positive_x(x);
    const double lx = std::log(x);
    return kernels::active_ops().kappa_loglik_sum(&x, &lx, 1, p.kappa, p.alpha, p.beta);
}

double quantile(double u, const KappaParams& p) {
    if (!(u > 0.0) || !(u < 1.0))
        throw std::domain_error("quantile: u must lie in (0, 1), got " + std::to_string(u));
    double out;
    kernels::active_ops().kappa_quantile(&u, 1, p.kappa, p.alpha, p.beta, &out);
    return out;
}

std::vector<double> sample(std::size_t n, const KappaParams& p, std::uint64_t seed) {
    if (n == 0) throw std::domain_error("sample: n must be >= 1");
    std::vector<double> u(n);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) u[i] = rng.next_unit();
    std::vector<double> out(n);
    kernels::active_ops().kappa_quantile(u.data(), n, p.kappa, p.alpha, p.beta, out.data());
    return out;
}

double loglik(std::span<const double> data, const KappaParams& p) {
    std::vector<double> lx(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        check_positive_x(data[i]);
        lx[i] = std::log(data[i]);
    }
    return kernels::active_ops().kappa_loglik_sum(data.data(), lx.data(), data.size(),
                                                  p.kappa, p.alpha, p.beta);
}

TailAsymptote tail_asymptote(const KappaParams& p) {
    return {p.alpha / p.kappa, std::pow(2.0 * p.kappa * p.beta, -1.0 / p.kappa)};
}

}  // namespace kgenfit::kappa
