#if defined(__x86_64__) || defined(_M_X64)

#include <cmath>
#include <numbers>

#include "uavsec/kernels.hpp"
#include "vecmath_avx2.hpp"

namespace uavsec::kernels {

namespace {

using avx2::exp_pd;
using avx2::log_pd;
using avx2::set1;
using avx2::sin_pd;

inline __m256d fejer_pd(const GainModel& gm, __m256d theta) {
    const __m256d half_pi = set1(0.5 * std::numbers::pi);
    __m256d u = _mm256_sub_pd(set1(gm.theta0), theta);
    const __m256d halved = _mm256_round_pd(_mm256_mul_pd(u, set1(0.5)),
                                           _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    u = _mm256_fnmadd_pd(halved, set1(2.0), u);

    const __m256d on_peak = _mm256_cmp_pd(
        _mm256_andnot_pd(set1(-0.0), u), set1(1e-9), _CMP_LT_OQ);

    const __m256d m = set1(gm.antennas);
    const __m256d num = sin_pd(_mm256_mul_pd(_mm256_mul_pd(half_pi, m), u));
    const __m256d den = sin_pd(_mm256_mul_pd(half_pi, u));
    const __m256d ratio = _mm256_div_pd(num, den);
    const __m256d gain = _mm256_div_pd(_mm256_mul_pd(ratio, ratio), m);
    return _mm256_blendv_pd(gain, m, on_peak);
}

inline __m256d path_loss_pd(const GainModel& gm, __m256d r) {
    const __m256d d2 = _mm256_fmadd_pd(r, r, set1(gm.h2));
    return exp_pd(_mm256_fmadd_pd(set1(1.05), log_pd(d2), set1(gm.ln_pl_c)));
}

void effective_gains_avx2(const GainModel& gm, const double* theta, const double* r,
                          const double* u01, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d th = _mm256_loadu_pd(theta + i);
        const __m256d rr = _mm256_loadu_pd(r + i);
        const __m256d u = _mm256_loadu_pd(u01 + i);
        const __m256d fade = _mm256_sub_pd(_mm256_setzero_pd(), log_pd(u));
        const __m256d g = _mm256_div_pd(_mm256_mul_pd(fade, fejer_pd(gm, th)),
                                        path_loss_pd(gm, rr));
        _mm256_storeu_pd(out + i, g);
    }
    if (i < n) scalar_backend().effective_gains(gm, theta + i, r + i, u01 + i, out + i, n - i);
}

void path_loss_avx2(const GainModel& gm, const double* r, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, path_loss_pd(gm, _mm256_loadu_pd(r + i)));
    }
    if (i < n) scalar_backend().path_loss(gm, r + i, out + i, n - i);
}

void exp_terms_avx2(const double* c, const double* w, double z, double* surv, double* dens,
                    std::size_t n) {
    const __m256d zz = set1(-z);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d cc = _mm256_loadu_pd(c + i);
        const __m256d e = _mm256_mul_pd(exp_pd(_mm256_mul_pd(zz, cc)),
                                        _mm256_loadu_pd(w + i));
        _mm256_storeu_pd(surv + i, e);
        _mm256_storeu_pd(dens + i, _mm256_mul_pd(cc, e));
    }
    if (i < n) scalar_backend().exp_terms(c + i, w + i, z, surv + i, dens + i, n - i);
}

} // namespace

const Backend* avx2_backend() {
    if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) return nullptr;
    static const Backend backend{"avx2", effective_gains_avx2, path_loss_avx2, exp_terms_avx2};
    return &backend;
}

} // namespace uavsec::kernels

#else

#include "uavsec/kernels.hpp"

namespace uavsec::kernels {
const Backend* avx2_backend() { return nullptr; }
} // namespace uavsec::kernels

#endif
