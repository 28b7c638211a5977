#include "kgenfit/gof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>

#include "kgenfit/errors.hpp"
#include "kgenfit/fitters.hpp"
#include "kgenfit/kappa.hpp"
#include "kgenfit/parallel.hpp"
#include "kgenfit/rng.hpp"

namespace kgenfit::gof {

namespace {

// x must be sorted ascending; model holds survival(x_i). At the i-th order
// statistic the empirical tail takes the values (n-i)/n and (n-i+1)/n
// (its two step limits); both are compared.
double ks_from_sorted(const std::vector<double>& x, const std::vector<double>& model) {
    const double n = static_cast<double>(x.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double hi = (n - static_cast<double>(i)) / n;        // limit from the left
        const double lo = (n - static_cast<double>(i) - 1.0) / n;  // value at/right of x_i
        s = std::max(s, std::abs(hi - model[i]));
        s = std::max(s, std::abs(lo - model[i]));
    }
    return s;
}

}  // namespace

double ks_statistic(std::span<const double> data,
                    const std::function<double(double)>& survival) {
    return ks_statistic_batch(data,
                              [&](std::span<const double> xs, std::span<double> out) {
                                  for (std::size_t i = 0; i < xs.size(); ++i)
                                      out[i] = survival(xs[i]);
                              });
}

double ks_statistic_batch(
    std::span<const double> data,
    const std::function<void(std::span<const double>, std::span<double>)>& survival_batch) {
    if (data.empty()) throw std::domain_error("ks_statistic: empty sample");
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> model(sorted.size());
    survival_batch(sorted, model);
    return ks_from_sorted(sorted, model);
}

GofResult mc_gof_test(std::span<const double> tail, const GofOptions& opts) {
    if (opts.n_boot < 1) throw std::domain_error("mc_gof_test: n_boot must be >= 1");
    if (!(opts.alpha_level > 0.0) || !(opts.alpha_level <= 1.0))
        throw std::domain_error("mc_gof_test: alpha_level must lie in (0, 1]");

    // step 1: fit the data and compute its KS statistic
    const FitResult fit = fit_kappa(tail);
    const auto& p_hat = std::get<kappa::KappaParams>(fit.params);
    const double s_data = fit.ks;
    const std::size_t n = tail.size();

    // steps 2-3: synthetic samples from the fit, refit each, KS vs its own refit
    GofResult out;
    out.s_data = s_data;
    out.n_boot = opts.n_boot;
    out.alpha_level = opts.alpha_level;
    out.seed = opts.seed;
    out.s_boot.assign(static_cast<std::size_t>(opts.n_boot), 0.0);

    parallel_for_index(static_cast<std::size_t>(opts.n_boot), opts.n_threads,
                       [&](std::size_t i) {
        std::uint64_t replicate = child_seed(opts.seed, i);
        for (unsigned attempt = 0;; ++attempt) {
            const std::vector<double> synth = kappa::sample(n, p_hat, replicate);
            try {
                const FitResult refit = fit_kappa(synth);
                out.s_boot[i] = refit.ks;
                return;
            } catch (const ConvergenceError&) {
                if (attempt >= 3) {
                    // conservative: an unfittable replicate counts as exceeding
                    out.s_boot[i] = std::numeric_limits<double>::infinity();
                    return;
                }
                replicate = retry_seed(replicate, attempt + 1);
            }
        }
    });

    // steps 4-5: p = #{S_i > S}/N (strict inequality), reject iff p < level
    std::size_t exceed = 0;
    for (double s : out.s_boot)
        if (s > s_data) ++exceed;
    out.p_value = static_cast<double>(exceed) / static_cast<double>(opts.n_boot);
    out.reject = out.p_value < opts.alpha_level;
    return out;
}

}  // namespace kgenfit::gof
