#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kgenfit::kappa {

// Parameters of the kappa-generalised law on (0, inf):
//   P(X > x) = exp_k(-beta * x^alpha)
// kappa is kept strictly inside (kKappaEps, 1 - kKappaEps); callers that
// want the kappa -> 0 Weibull limit should use a Weibull directly.
inline constexpr double kKappaEps = 1e-6;

struct KappaParams {
    double kappa;
    double alpha;  // shape
    double beta;   // rate-like scale, units (return)^(-alpha)

    // Throws std::domain_error on invalid or non-finite values.
    KappaParams(double kappa, double alpha, double beta);
};

// Deformed exponential (sqrt(1 + k^2 x^2) + k x)^(1/k), evaluated as
// exp(asinh(k x)/k) so that large |x| cannot overflow the radical form.
// Requires kappa in (0,1) and finite x.
double kexp(double x, double kappa);

// Inverse of kexp: (x^k - x^(-k)) / (2k). Requires x > 0.
double klog(double x, double kappa);

// P(X > x). Requires x > 0.
double survival(double x, const KappaParams& p);

// 1 - survival(x). Requires x > 0.
double cdf(double x, const KappaParams& p);

// Density alpha*beta*x^(alpha-1) * exp_k(-beta x^alpha) / sqrt(1 + beta^2 k^2 x^(2 alpha)).
double pdf(double x, const KappaParams& p);

// log(pdf(x)) evaluated in log space; stays finite where pdf underflows.
double log_pdf(double x, const KappaParams& p);

// Inverse CDF: x such that cdf(x) = u. u is clamped to
// [1e-15, 1 - 1e-15] before inversion; u outside (0,1) is a domain error.
double quantile(double u, const KappaParams& p);

// n i.i.d. draws by inverse transform, deterministic for a given seed.
std::vector<double> sample(std::size_t n, const KappaParams& p, std::uint64_t seed);

// Sum of log_pdf over data. Any datum <= 0 is a domain error.
double loglik(std::span<const double> data, const KappaParams& p);

struct TailAsymptote {
    double exponent;   // alpha / kappa
    double prefactor;  // (2 kappa beta)^(-1/kappa)
};

// Power-law tail P(X > x) ~ prefactor * x^(-exponent) as x -> inf.
TailAsymptote tail_asymptote(const KappaParams& p);

}  // namespace kgenfit::kappa
