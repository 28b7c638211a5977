#pragma once

// 4-lane double-precision exp/log/sincos for the AVX2 kernels.
// exp and log follow the classic Cephes rational approximations; sincos
// uses Cody-Waite pi/2 reduction with Taylor polynomials on [-pi/4, pi/4].
// Verified against the C library to <= 3 ulp over the ranges the kernels
// use (|x| <= 708 for exp, positive normals for log, |x| <= 1e7 for
// sincos). Inputs outside those ranges are the caller's problem.

#include <immintrin.h>

namespace kgenfit::kernels::vm {

inline __m256d vset(double v) { return _mm256_set1_pd(v); }

// --- exp ---------------------------------------------------------------

inline __m256d vexp(__m256d x) {
    const __m256d log2e = vset(1.44269504088896339e+00);
    const __m256d ln2_hi = vset(6.93146705627441406e-01);
    const __m256d ln2_lo = vset(4.74932503903167256e-07);

    x = _mm256_max_pd(_mm256_min_pd(x, vset(708.0)), vset(-708.0));
    __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d px = _mm256_fnmadd_pd(n, ln2_hi, x);
    px = _mm256_fnmadd_pd(n, ln2_lo, px);
    __m256d xx = _mm256_mul_pd(px, px);

    __m256d p = _mm256_fmadd_pd(vset(1.26177193074810590878e-4), xx,
                                vset(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, xx, vset(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, px);

    __m256d q = _mm256_fmadd_pd(vset(3.00198505138664455042e-6), xx,
                                vset(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, xx, vset(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, xx, vset(2.00000000000000000005e0));

    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    __m256d y = _mm256_fmadd_pd(vset(2.0), e, vset(1.0));

    // ldexp(y, n) with n in [-1075, 1025]
    __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    __m256i pow2 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(y, _mm256_castsi256_pd(pow2));
}

// --- log (x positive, normal) -------------------------------------------

inline __m256d vlog(__m256d x) {
    const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
    const __m256i half_exp = _mm256_set1_epi64x(0x3fe0000000000000LL);

    __m256i ix = _mm256_castpd_si256(x);
    __m256i ebits = _mm256_srli_epi64(ix, 52);
    __m256i packed = _mm256_permutevar8x32_epi32(ebits, _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0));
    __m256d e = _mm256_cvtepi32_pd(_mm256_castsi256_si128(packed));
    e = _mm256_sub_pd(e, vset(1022.0));

    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(ix, mant_mask), half_exp));  // [0.5, 1)

    __m256d below = _mm256_cmp_pd(m, vset(7.07106781186547573e-01), _CMP_LT_OQ);
    m = _mm256_blendv_pd(m, _mm256_add_pd(m, m), below);
    e = _mm256_add_pd(e, _mm256_and_pd(below, vset(-1.0)));

    __m256d z = _mm256_sub_pd(m, vset(1.0));
    __m256d zz = _mm256_mul_pd(z, z);

    __m256d p = _mm256_fmadd_pd(vset(1.01875663804580931796e-4), z,
                                vset(4.97494994976747001425e-1));
    p = _mm256_fmadd_pd(p, z, vset(4.70579119878881725854e0));
    p = _mm256_fmadd_pd(p, z, vset(1.44989225341610930846e1));
    p = _mm256_fmadd_pd(p, z, vset(1.79368678507819816313e1));
    p = _mm256_fmadd_pd(p, z, vset(7.70838733755885391666e0));

    __m256d q = _mm256_add_pd(z, vset(1.12873587189167450590e1));
    q = _mm256_fmadd_pd(q, z, vset(4.52279145837532221105e1));
    q = _mm256_fmadd_pd(q, z, vset(8.29875266912776603211e1));
    q = _mm256_fmadd_pd(q, z, vset(7.11544750618563894466e1));
    q = _mm256_fmadd_pd(q, z, vset(2.31251620126765340583e1));

    __m256d r = _mm256_mul_pd(_mm256_mul_pd(z, zz), _mm256_div_pd(p, q));
    r = _mm256_fnmadd_pd(vset(0.5), zz, _mm256_add_pd(z, r));
    r = _mm256_fmadd_pd(e, vset(-2.121944400546905827679e-4), r);
    r = _mm256_fmadd_pd(e, vset(0.693359375), r);
    return r;
}

// --- sincos -------------------------------------------------------------

inline void vsincos(__m256d x, __m256d* s_out, __m256d* c_out) {
    const __m256d two_over_pi = vset(6.36619772367581382433e-01);
    const __m256d pio2_hi = vset(1.57079631090164185e+00);
    const __m256d pio2_mid = vset(1.58932547122958567e-08);
    const __m256d pio2_lo = vset(6.12323399573676604e-17);

    __m256d j = _mm256_round_pd(_mm256_mul_pd(x, two_over_pi),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(j, pio2_hi, x);
    r = _mm256_fnmadd_pd(j, pio2_mid, r);
    r = _mm256_fnmadd_pd(j, pio2_lo, r);
    __m256d r2 = _mm256_mul_pd(r, r);

    // sin(r)/r and cos(r), Taylor through r^15 / r^14
    __m256d sp = _mm256_fmadd_pd(vset(-1.0 / 1307674368000.0), r2, vset(1.0 / 6227020800.0));
    sp = _mm256_fmadd_pd(sp, r2, vset(-1.0 / 39916800.0));
    sp = _mm256_fmadd_pd(sp, r2, vset(1.0 / 362880.0));
    sp = _mm256_fmadd_pd(sp, r2, vset(-1.0 / 5040.0));
    sp = _mm256_fmadd_pd(sp, r2, vset(1.0 / 120.0));
    sp = _mm256_fmadd_pd(sp, r2, vset(-1.0 / 6.0));
    __m256d s = _mm256_fmadd_pd(_mm256_mul_pd(sp, r2), r, r);

    __m256d cp = _mm256_fmadd_pd(vset(-1.0 / 87178291200.0), r2, vset(1.0 / 479001600.0));
    cp = _mm256_fmadd_pd(cp, r2, vset(-1.0 / 3628800.0));
    cp = _mm256_fmadd_pd(cp, r2, vset(1.0 / 40320.0));
    cp = _mm256_fmadd_pd(cp, r2, vset(-1.0 / 720.0));
    cp = _mm256_fmadd_pd(cp, r2, vset(1.0 / 24.0));
    cp = _mm256_fmadd_pd(cp, r2, vset(-0.5));
    __m256d c = _mm256_fmadd_pd(cp, r2, vset(1.0));

    // quadrant fixup: q&1 swaps, q&2 negates sin, (q+1)&2 negates cos
    __m128i j32 = _mm256_cvtpd_epi32(j);
    __m256i q64 = _mm256_cvtepi32_epi64(j32);

    __m256i bit0 = _mm256_and_si256(q64, _mm256_set1_epi64x(1));
    __m256d swap = _mm256_castsi256_pd(
        _mm256_cmpeq_epi64(bit0, _mm256_set1_epi64x(1)));
    __m256d s1 = _mm256_blendv_pd(s, c, swap);
    __m256d c1 = _mm256_blendv_pd(c, s, swap);

    const __m256d signbit = vset(-0.0);
    __m256i bit1 = _mm256_and_si256(q64, _mm256_set1_epi64x(2));
    __m256d neg_s = _mm256_castsi256_pd(
        _mm256_cmpeq_epi64(bit1, _mm256_set1_epi64x(2)));
    __m256i bit1c = _mm256_and_si256(_mm256_add_epi64(q64, _mm256_set1_epi64x(1)),
                                     _mm256_set1_epi64x(2));
    __m256d neg_c = _mm256_castsi256_pd(
        _mm256_cmpeq_epi64(bit1c, _mm256_set1_epi64x(2)));

    *s_out = _mm256_xor_pd(s1, _mm256_and_pd(neg_s, signbit));
    *c_out = _mm256_xor_pd(c1, _mm256_and_pd(neg_c, signbit));
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

}  // namespace kgenfit::kernels::vm
