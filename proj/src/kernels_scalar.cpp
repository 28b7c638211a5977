#include <cmath>
#include <cstddef>

#include "kgenfit/kernels.hpp"

namespace kgenfit::kernels {

namespace {

// Above this value of w = log(beta) + alpha*log(x), sqrt(1 + (k e^w)^2)
// is replaced by its asymptote; the switch keeps every term in log space.
constexpr double kBigW = 300.0;

double loglik_sum_scalar(const double* /*x*/, const double* lx, std::size_t n,
                         double kappa, double alpha, double beta) {
    const double log_beta = std::log(beta);
    const double log_ab = std::log(alpha) + log_beta;
    const double inv_kappa = 1.0 / kappa;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = log_beta + alpha * lx[i];
        double body;
        if (w > kBigW) {
            // asinh(k e^w)/k -> (log(2k) + w)/k,  log sqrt(1+u^2) -> log(k) + w
            body = -(std::log(2.0 * kappa) + w) * inv_kappa - (std::log(kappa) + w);
        } else {
            const double u = kappa * std::exp(w);
            const double s = std::sqrt(1.0 + u * u);
            body = -std::log(u + s) * inv_kappa - std::log(s);
        }
        acc += (alpha - 1.0) * lx[i] + body;
    }
    return acc + static_cast<double>(n) * log_ab;
}

void survival_scalar(const double* x, std::size_t n, double kappa, double alpha,
                     double beta, double* out) {
    const double log_beta = std::log(beta);
    const double inv_kappa = 1.0 / kappa;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = log_beta + alpha * std::log(x[i]);
        if (w > kBigW) {
            out[i] = std::exp(-(std::log(2.0 * kappa) + w) * inv_kappa);
        } else {
            const double u = kappa * std::exp(w);
            out[i] = std::exp(-std::asinh(u) * inv_kappa);
        }
    }
}

void quantile_scalar(const double* u, std::size_t n, double kappa, double alpha,
                     double beta, double* out) {
    const double log_beta = std::log(beta);
    const double inv_alpha = 1.0 / alpha;
    for (std::size_t i = 0; i < n; ++i) {
        double ui = u[i];
        if (ui < 1e-15) ui = 1e-15;
        if (ui > 1.0 - 1e-15) ui = 1.0 - 1e-15;
        // -log_k(1 - u) = sinh(-k log(1-u)) / k
        const double L = -std::log1p(-ui);
        const double y = std::sinh(kappa * L) / kappa;
        out[i] = std::exp((std::log(y) - log_beta) * inv_alpha);
    }
}

double cos_mix_scalar(const double* t, const double* a, const double* b,
                      std::size_t n, double z) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double arg = t[i] * z;
        acc += a[i] * std::cos(arg) + b[i] * std::sin(arg);
    }
    return acc;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{loglik_sum_scalar, survival_scalar, quantile_scalar,
                         cos_mix_scalar, "scalar"};
    return ops;
}

}  // namespace kgenfit::kernels
