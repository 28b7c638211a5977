#pragma once

#include <cstddef>
#include <string>

namespace kgenfit::kernels {

// Batch kernels behind the hot loops: kappa-generalised log-likelihood
// sums, survival/quantile evaluation over whole samples, and the Fourier
// cosine-mixture reduction used by the stable-density quadrature tables.
//
// Every kernel has a scalar reference implementation and (on x86-64 with
// AVX2+FMA) a vectorised variant. The two are equivalence-tested; within
// one process the active variant is fixed, so results are reproducible
// run to run on the same machine.
struct Ops {
    // sum_i log_pdf(x_i; kappa, alpha, beta). lx must hold log(x_i),
    // precomputed once per data set by the caller.
    double (*kappa_loglik_sum)(const double* x, const double* lx, std::size_t n,
                               double kappa, double alpha, double beta);

    // out_i = P(X > x_i); x_i > 0.
    void (*kappa_survival)(const double* x, std::size_t n,
                           double kappa, double alpha, double beta, double* out);

    // out_i = quantile(u_i); u_i already clamped into (0, 1).
    void (*kappa_quantile)(const double* u, std::size_t n,
                           double kappa, double alpha, double beta, double* out);

    // sum_j a_j cos(t_j z) + b_j sin(t_j z)
    double (*cos_mix)(const double* t, const double* a, const double* b,
                      std::size_t n, double z);

    const char* name;
};

const Ops& scalar_ops();

bool avx2_available();
#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();
#endif

// Runtime-selected kernels: AVX2 when the CPU supports it, otherwise scalar.
// The KGENFIT_KERNEL environment variable ("scalar" or "avx2") overrides.
const Ops& active_ops();

// Test hook: force a specific implementation ("scalar", "avx2", "" = auto).
// Throws std::invalid_argument for unknown or unavailable names.
void force_kernels(const std::string& name);

}  // namespace kgenfit::kernels
