#pragma once

#include <span>
#include <string>
#include <variant>

#include "kgenfit/kappa.hpp"
#include "kgenfit/stable.hpp"

namespace kgenfit {

enum class Family { kappa, stable, normal };

const char* family_name(Family f);

struct NormalParams {
    double mu;
    double sigma;  // > 0
};

struct FitResult {
    Family family;
    std::variant<kappa::KappaParams, stable::StableParams, NormalParams> params;
    double loglik;
    double ks;          // KS statistic of the data against the fitted model
    bool converged;
    int iterations;
    bool low_sample = false;  // fewer observations than the fitter prefers
};

// Kappa-generalised MLE on a positive tail sample. Multi-start Nelder-Mead
// on (logit kappa, log alpha, log beta); below 30 points the low_sample
// flag is set but the fit proceeds. Throws ConvergenceError when every
// start fails, std::domain_error on nonpositive data.
FitResult fit_kappa(std::span<const double> tail);

// Closed-form normal MLE (mean, divide-by-n standard deviation).
// Throws DegenerateInputError on zero variance, ValidationError for n < 2.
FitResult fit_normal(std::span<const double> returns);

// stable::fit_mle plus the KS statistic against the fitted CDF.
FitResult fit_stable(std::span<const double> returns, bool heavy_tailed = true);

// Normal survival P(X > x) for KS scans.
double normal_survival(double x, const NormalParams& p);

}  // namespace kgenfit
