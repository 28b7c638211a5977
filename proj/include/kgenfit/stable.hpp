#pragma once

#include <complex>
#include <span>
#include <vector>

namespace kgenfit::stable {

// Stable law S(alpha, beta, gamma, delta; 0) in the 0th parameterisation.
struct StableParams {
    double alpha;  // stability index, (0, 2]
    double beta;   // skewness, [-1, 1]
    double gamma;  // scale, > 0
    double delta;  // location

    // Throws std::domain_error on invalid or non-finite values.
    StableParams(double alpha, double beta, double gamma, double delta);
};

// Characteristic function E[exp(itX)]; the alpha = 1 logarithmic branch is
// taken when |alpha - 1| < 1e-8 (the CF is continuous across it).
std::complex<double> char_fn(double t, const StableParams& p);

// Tail constant sin(pi alpha / 2) Gamma(alpha) / pi. Requires alpha in (0, 2).
double c_alpha(double alpha);

enum class TailSide { lower, upper };

// Leading-order tail approximant:
//   upper: gamma^alpha c_alpha (1 + beta) x^(-alpha)
//   lower: gamma^alpha c_alpha (1 - beta) x^(-alpha)
// Requires alpha < 2 and x > 0.
double tail_asymptote(double x, const StableParams& p, TailSide side);

// Density by Fourier inversion of the characteristic function,
//   f(x) = (1/pi) Int_0^inf Re[char_fn(t) exp(-itx)] dt,
// with adaptive Gauss quadrature segmented at the oscillation period for
// moderate |x| and a rotated (decaying) contour in the far tails.
// Throws QuadratureError when the 1e-9 absolute target is not reached.
double pdf(double x, const StableParams& p);

// P(X <= x) by the Gil-Pelaez inversion formula (moderate |x|) or the
// rotated-contour tail integral (far tails).
double cdf(double x, const StableParams& p);

// Batch evaluation sharing one quadrature table across all points with the
// same parameters; identical method, used by loglik and KS scans.
std::vector<double> pdf_batch(std::span<const double> xs, const StableParams& p);
std::vector<double> cdf_batch(std::span<const double> xs, const StableParams& p);

// Sum of log densities.
double loglik(std::span<const double> data, const StableParams& p);

struct StableFit {
    StableParams params;
    double loglik;
    bool converged;
    int iterations;
};

// Numerical MLE: McCulloch-style quantile initialisation refined by
// Nelder-Mead on transformed parameters. heavy_tailed caps alpha at
// 2 - 1e-6. Requires at least 20 observations.
StableFit fit_mle(std::span<const double> data, bool heavy_tailed);

// x with P(X > x) = p, for p in (0, 0.5]; bracketing + bisection on cdf.
double upper_quantile(double p, const StableParams& p_params);

}  // namespace kgenfit::stable
