#if defined(__x86_64__) || defined(_M_X64)

#include <cmath>
#include <cstddef>

#include "kgenfit/kernels.hpp"
#include "vecmath_avx2.hpp"

namespace kgenfit::kernels {

namespace {

using namespace vm;

constexpr double kBigW = 300.0;

// Scalar tail/overflow fallbacks mirror the reference formulas.
double loglik_one(double lx, double kappa, double alpha, double beta) {
    const double w = std::log(beta) + alpha * lx;
    double body;
    if (w > kBigW) {
        body = -(std::log(2.0 * kappa) + w) / kappa - (std::log(kappa) + w);
    } else {
        const double u = kappa * std::exp(w);
        const double s = std::sqrt(1.0 + u * u);
        body = -std::log(u + s) / kappa - std::log(s);
    }
    return (alpha - 1.0) * lx + body;
}

double loglik_sum_avx2(const double* /*x*/, const double* lx, std::size_t n,
                       double kappa, double alpha, double beta) {
    const double log_beta = std::log(beta);
    const __m256d valpha = vset(alpha);
    const __m256d vlogbeta = vset(log_beta);
    const __m256d vam1 = vset(alpha - 1.0);
    const __m256d vkappa = vset(kappa);
    const __m256d vinvk = vset(1.0 / kappa);
    const __m256d vone = vset(1.0);
    const __m256d vbig = vset(kBigW);

    __m256d acc = _mm256_setzero_pd();
    double acc_tail = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d lxv = _mm256_loadu_pd(lx + i);
        __m256d w = _mm256_fmadd_pd(valpha, lxv, vlogbeta);
        if (_mm256_movemask_pd(_mm256_cmp_pd(w, vbig, _CMP_GT_OQ)) != 0) {
            for (std::size_t k = 0; k < 4; ++k)
                acc_tail += loglik_one(lx[i + k], kappa, alpha, beta);
            continue;
        }
        __m256d u = _mm256_mul_pd(vkappa, vexp(w));
        __m256d s = _mm256_sqrt_pd(_mm256_fmadd_pd(u, u, vone));
        __m256d term = _mm256_mul_pd(vam1, lxv);
        term = _mm256_fnmadd_pd(vlog(_mm256_add_pd(u, s)), vinvk, term);
        term = _mm256_sub_pd(term, vlog(s));
        acc = _mm256_add_pd(acc, term);
    }
    double total = hsum(acc) + acc_tail;
    for (; i < n; ++i) total += loglik_one(lx[i], kappa, alpha, beta);
    return total + static_cast<double>(n) * (std::log(alpha) + log_beta);
}

double survival_one(double x, double kappa, double alpha, double beta) {
    const double w = std::log(beta) + alpha * std::log(x);
    if (w > kBigW) return std::exp(-(std::log(2.0 * kappa) + w) / kappa);
    return std::exp(-std::asinh(kappa * std::exp(w)) / kappa);
}

// asinh(u) for u >= 0 with a series below 1e-3 (the log form loses
// relative accuracy as u -> 0).
inline __m256d vasinh_pos(__m256d u) {
    __m256d u2 = _mm256_mul_pd(u, u);
    __m256d s = _mm256_sqrt_pd(_mm256_add_pd(u2, vset(1.0)));
    __m256d logform = vlog(_mm256_add_pd(u, s));

    // u (1 - u^2/6 + 3u^4/40 - 15u^6/336)
    __m256d p = _mm256_fmadd_pd(vset(-15.0 / 336.0), u2, vset(3.0 / 40.0));
    p = _mm256_fmadd_pd(p, u2, vset(-1.0 / 6.0));
    p = _mm256_fmadd_pd(p, u2, vset(1.0));
    __m256d series = _mm256_mul_pd(u, p);

    __m256d small = _mm256_cmp_pd(u, vset(1e-3), _CMP_LT_OQ);
    return _mm256_blendv_pd(logform, series, small);
}

void survival_avx2(const double* x, std::size_t n, double kappa, double alpha,
                   double beta, double* out) {
    const double log_beta = std::log(beta);
    const __m256d valpha = vset(alpha);
    const __m256d vlogbeta = vset(log_beta);
    const __m256d vkappa = vset(kappa);
    const __m256d vninvk = vset(-1.0 / kappa);
    const __m256d vbig = vset(kBigW);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d w = _mm256_fmadd_pd(valpha, vlog(xv), vlogbeta);
        if (_mm256_movemask_pd(_mm256_cmp_pd(w, vbig, _CMP_GT_OQ)) != 0) {
            for (std::size_t k = 0; k < 4; ++k)
                out[i + k] = survival_one(x[i + k], kappa, alpha, beta);
            continue;
        }
        __m256d u = _mm256_mul_pd(vkappa, vexp(w));
        __m256d res = vexp(_mm256_mul_pd(vasinh_pos(u), vninvk));
        _mm256_storeu_pd(out + i, res);
    }
    for (; i < n; ++i) out[i] = survival_one(x[i], kappa, alpha, beta);
}

double quantile_one(double u, double kappa, double alpha, double beta) {
    if (u < 1e-15) u = 1e-15;
    if (u > 1.0 - 1e-15) u = 1.0 - 1e-15;
    const double L = -std::log1p(-u);
    const double y = std::sinh(kappa * L) / kappa;
    return std::exp((std::log(y) - std::log(beta)) / alpha);
}

// sinh(z) for z in (0, ~35) with a series below 1e-2.
inline __m256d vsinh_pos(__m256d z) {
    __m256d ez = vexp(z);
    __m256d expform = _mm256_mul_pd(
        _mm256_sub_pd(ez, _mm256_div_pd(vset(1.0), ez)), vset(0.5));

    __m256d z2 = _mm256_mul_pd(z, z);
    __m256d p = _mm256_fmadd_pd(vset(1.0 / 5040.0), z2, vset(1.0 / 120.0));
    p = _mm256_fmadd_pd(p, z2, vset(1.0 / 6.0));
    p = _mm256_fmadd_pd(p, z2, vset(1.0));
    __m256d series = _mm256_mul_pd(z, p);

    __m256d small = _mm256_cmp_pd(z, vset(1e-2), _CMP_LT_OQ);
    return _mm256_blendv_pd(expform, series, small);
}

void quantile_avx2(const double* u, std::size_t n, double kappa, double alpha,
                   double beta, double* out) {
    const double log_beta = std::log(beta);
    const __m256d vkappa = vset(kappa);
    const __m256d vinvk = vset(1.0 / kappa);
    const __m256d vinva = vset(1.0 / alpha);
    const __m256d vlogbeta = vset(log_beta);
    const __m256d vone = vset(1.0);
    const __m256d ulo = vset(1e-15);
    const __m256d uhi = vset(1.0 - 1e-15);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d uv = _mm256_loadu_pd(u + i);
        uv = _mm256_max_pd(_mm256_min_pd(uv, uhi), ulo);
        __m256d L = _mm256_sub_pd(_mm256_setzero_pd(), vlog(_mm256_sub_pd(vone, uv)));
        __m256d y = _mm256_mul_pd(vsinh_pos(_mm256_mul_pd(vkappa, L)), vinvk);
        __m256d res = vexp(_mm256_mul_pd(_mm256_sub_pd(vlog(y), vlogbeta), vinva));
        _mm256_storeu_pd(out + i, res);
    }
    for (; i < n; ++i) out[i] = quantile_one(u[i], kappa, alpha, beta);
}

double cos_mix_avx2(const double* t, const double* a, const double* b,
                    std::size_t n, double z) {
    const __m256d vz = vset(z);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d arg = _mm256_mul_pd(_mm256_loadu_pd(t + i), vz);
        __m256d s, c;
        vsincos(arg, &s, &c);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), c, acc);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(b + i), s, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double arg = t[i] * z;
        total += a[i] * std::cos(arg) + b[i] * std::sin(arg);
    }
    return total;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{loglik_sum_avx2, survival_avx2, quantile_avx2,
                         cos_mix_avx2, "avx2"};
    return ops;
}

}  // namespace kgenfit::kernels

#endif  // x86-64
