#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace kgenfit::gof {

// Two-sided KS statistic S = max_i |Phat(X > x_i) - P(X > x_i)| with the
// empirical tail checked at both step limits of every data point.
double ks_statistic(std::span<const double> data,
                    const std::function<double(double)>& survival);

// Same statistic with the model tail evaluated in one batch call
// (out_i = survival(x_i) for sorted x).
double ks_statistic_batch(
    std::span<const double> data,
    const std::function<void(std::span<const double>, std::span<double>)>& survival_batch);

struct GofResult {
    double s_data = 0.0;
    std::vector<double> s_boot;
    double p_value = 0.0;   // #{ s_boot > s_data } / n_boot
    int n_boot = 0;
    double alpha_level = 0.0;
    bool reject = false;    // p_value < alpha_level
    std::uint64_t seed = 0;
};

struct GofOptions {
    int n_boot = 100;
    double alpha_level = 0.1;
    std::uint64_t seed = 0;
    unsigned n_threads = 0;  // 0 = hardware concurrency
};

// Monte-Carlo (parametric bootstrap) goodness-of-fit test of a
// kappa-generalised tail fit:
//   1. fit the tail, compute S;
//   2. draw n_boot synthetic samples of the same size from the fit;
//   3. refit each sample, compute its KS statistic against its own refit;
//   4. p = fraction of replicate statistics strictly exceeding S;
//   5. reject iff p < alpha_level.
// Replicate i uses child seed (seed XOR splitmix(i)); a replicate whose
// refit fails is retried up to 3 times with fresh child seeds and then
// counted as exceeding S. Bit-reproducible for any thread count.
GofResult mc_gof_test(std::span<const double> tail, const GofOptions& opts);

}  // namespace kgenfit::gof
