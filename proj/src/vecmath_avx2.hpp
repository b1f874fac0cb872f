#pragma once

// Four-lane double-precision exp/log/sin for the AVX2 kernel backend,
// following the classic fdlibm argument reductions and polynomials.
// Domains covered (all this project needs):
//   exp: [-708, 708], underflow flushed to 0
//   log: normal positive doubles
//   sin: |x| <= ~1e6 (two-term Cody-Waite pi/2 reduction)

#include <immintrin.h>

#include <cstdint>

namespace uavsec::kernels::avx2 {

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

// exp(x) via cephes rational approximation on |r| <= ln(2)/2.
// Arguments above ~708 are not handled (never produced by the kernels).
inline __m256d exp_pd(__m256d x) {
    const __m256d log2e = set1(1.4426950408889634073599);
    const __m256d ln2_hi = set1(6.93147180369123816490e-01);
    const __m256d ln2_lo = set1(1.90821492927058770002e-10);

    const __m256d underflow = _mm256_cmp_pd(x, set1(-708.0), _CMP_LT_OQ);

    const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(k, ln2_hi, x);
    r = _mm256_fnmadd_pd(k, ln2_lo, r);

    const __m256d rr = _mm256_mul_pd(r, r);
    __m256d p = set1(1.26177193074810590878e-4);
    p = _mm256_fmadd_pd(p, rr, set1(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, rr, set1(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, r);
    __m256d q = set1(3.00198505138664455042e-6);
    q = _mm256_fmadd_pd(q, rr, set1(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, rr, set1(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, rr, set1(2.00000000000000000005e0));
    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    e = _mm256_fmadd_pd(set1(2.0), e, set1(1.0));

    // Scale by 2^k through the exponent field. Underflowed lanes may build
    // garbage bits here; they are blended to zero below.
    __m256i kbits = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(k));
    kbits = _mm256_slli_epi64(_mm256_add_epi64(kbits, _mm256_set1_epi64x(1023)), 52);
    e = _mm256_mul_pd(e, _mm256_castsi256_pd(kbits));

    return _mm256_blendv_pd(e, _mm256_setzero_pd(), underflow);
}

// log(x) for normal positive doubles, fdlibm structure.
inline __m256d log_pd(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    // Normalize mantissa into [sqrt(1/2), sqrt(2)).
    const __m256i mant_hi = _mm256_and_si256(_mm256_srli_epi64(bits, 32),
                                             _mm256_set1_epi64x(0xfffff));
    const __m256i shift = _mm256_and_si256(
        _mm256_srli_epi64(_mm256_add_epi64(mant_hi, _mm256_set1_epi64x(0x95f64)), 20),
        _mm256_set1_epi64x(1));
    const __m256i expo = _mm256_sub_epi64(
        _mm256_add_epi64(_mm256_srli_epi64(bits, 52), shift), _mm256_set1_epi64x(1023));
    const __m256i mant_bits = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL)),
        _mm256_slli_epi64(_mm256_sub_epi64(_mm256_set1_epi64x(0x3ff), shift), 52));
    const __m256d m = _mm256_castsi256_pd(mant_bits);

    // Convert the int64 exponent (small range) to double via epi32 packing.
    const __m256i expo32 = _mm256_shuffle_epi32(expo, _MM_SHUFFLE(2, 0, 2, 0));
    const __m128i lo = _mm256_castsi256_si128(expo32);
    const __m128i hi = _mm256_extracti128_si256(expo32, 1);
    const __m128i packed = _mm_unpacklo_epi64(lo, hi);
    const __m256d k = _mm256_cvtepi32_pd(packed);

    const __m256d f = _mm256_sub_pd(m, set1(1.0));
    const __m256d s = _mm256_div_pd(f, _mm256_add_pd(set1(2.0), f));
    const __m256d z = _mm256_mul_pd(s, s);
    const __m256d w = _mm256_mul_pd(z, z);
    __m256d t1 = set1(1.531383769920937332e-01);
    t1 = _mm256_fmadd_pd(t1, w, set1(2.222219843214978396e-01));
    t1 = _mm256_fmadd_pd(t1, w, set1(3.999999999940941908e-01));
    t1 = _mm256_mul_pd(t1, w);
    __m256d t2 = set1(1.479819860511658591e-01);
    t2 = _mm256_fmadd_pd(t2, w, set1(1.818357216161805012e-01));
    t2 = _mm256_fmadd_pd(t2, w, set1(2.857142874366239149e-01));
    t2 = _mm256_fmadd_pd(t2, w, set1(6.666666666666735130e-01));
    t2 = _mm256_mul_pd(t2, z);
    const __m256d rpoly = _mm256_add_pd(t1, t2);
    const __m256d hfsq = _mm256_mul_pd(set1(0.5), _mm256_mul_pd(f, f));

    const __m256d ln2_hi = set1(6.93147180369123816490e-01);
    const __m256d ln2_lo = set1(1.90821492927058770002e-10);
    // k*ln2_hi - ((hfsq - (s*(hfsq+R) + k*ln2_lo)) - f)
    __m256d inner = _mm256_fmadd_pd(s, _mm256_add_pd(hfsq, rpoly),
                                    _mm256_mul_pd(k, ln2_lo));
    inner = _mm256_sub_pd(_mm256_sub_pd(hfsq, inner), f);
    return _mm256_fmsub_pd(k, ln2_hi, inner);
}

// sin(x), quadrant reduction with fdlibm pi/2 split (exact for |j| < 2^22).
inline __m256d sin_pd(__m256d x) {
    const __m256d two_over_pi = set1(6.36619772367581382433e-01);
    const __m256d pio2_1 = set1(1.57079632673412561417e+00);
    const __m256d pio2_1t = set1(6.07710050650619224932e-11);

    const __m256d j = _mm256_round_pd(_mm256_mul_pd(x, two_over_pi),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(j, pio2_1, x);
    r = _mm256_fnmadd_pd(j, pio2_1t, r);

    const __m256d rr = _mm256_mul_pd(r, r);

    __m256d sp = set1(1.58969099521155010221e-10);
    sp = _mm256_fmadd_pd(sp, rr, set1(-2.50507602534068634195e-08));
    sp = _mm256_fmadd_pd(sp, rr, set1(2.75573137070700676789e-06));
    sp = _mm256_fmadd_pd(sp, rr, set1(-1.98412698298579493134e-04));
    sp = _mm256_fmadd_pd(sp, rr, set1(8.33333333332248946124e-03));
    sp = _mm256_fmadd_pd(sp, rr, set1(-1.66666666666666324348e-01));
    const __m256d sinr = _mm256_fmadd_pd(_mm256_mul_pd(r, rr), sp, r);

    __m256d cp = set1(-1.13596475577881948265e-11);
    cp = _mm256_fmadd_pd(cp, rr, set1(2.08757232129817482790e-09));
    cp = _mm256_fmadd_pd(cp, rr, set1(-2.75573143513906633035e-07));
    cp = _mm256_fmadd_pd(cp, rr, set1(2.48015872894767294178e-05));
    cp = _mm256_fmadd_pd(cp, rr, set1(-1.38888888888741095749e-03));
    cp = _mm256_fmadd_pd(cp, rr, set1(4.16666666666666019037e-02));
    __m256d cosr = _mm256_fmadd_pd(_mm256_mul_pd(rr, rr), cp,
                                   _mm256_fnmadd_pd(rr, set1(0.5), set1(1.0)));

    // Quadrant bits from j (two's complement low bits via the 1.5*2^52 trick).
    const __m256d magic = set1(6755399441055744.0);
    const __m256i jbits = _mm256_castpd_si256(_mm256_add_pd(j, magic));
    const __m256i q1 = _mm256_and_si256(jbits, _mm256_set1_epi64x(1));
    const __m256i q2 = _mm256_and_si256(jbits, _mm256_set1_epi64x(2));
    const __m256d use_cos = _mm256_castsi256_pd(
        _mm256_cmpeq_epi64(q1, _mm256_set1_epi64x(1)));
    const __m256d negate = _mm256_castsi256_pd(
        _mm256_cmpeq_epi64(q2, _mm256_set1_epi64x(2)));

    __m256d result = _mm256_blendv_pd(sinr, cosr, use_cos);
    const __m256d neg = _mm256_and_pd(negate, set1(-0.0));
    return _mm256_xor_pd(result, neg);
}

} // namespace uavsec::kernels::avx2
