// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "topofield/simd.hpp"

namespace topofield::simd::detail {

void correlate_row_avx2(double* out, std::size_t n, const double* in, const double* taps,
                        std::size_t ntaps) {
    for (std::size_t t = 0; t < ntaps; ++t) {
        const double w = taps[t];
        if (w == 0.0) continue;
        const __m256d vw = _mm256_set1_pd(w);
        const double* src = in + t;
        std::size_t k = 0;
        for (; k + 8 <= n; k += 8) {
            __m256d a = _mm256_loadu_pd(out + k);
            __m256d b = _mm256_loadu_pd(out + k + 4);
            a = _mm256_fmadd_pd(vw, _mm256_loadu_pd(src + k), a);
            b = _mm256_fmadd_pd(vw, _mm256_loadu_pd(src + k + 4), b);
            _mm256_storeu_pd(out + k, a);
            _mm256_storeu_pd(out + k + 4, b);
        }
        for (; k + 4 <= n; k += 4) {
            __m256d a = _mm256_loadu_pd(out + k);
            a = _mm256_fmadd_pd(vw, _mm256_loadu_pd(src + k), a);
            _mm256_storeu_pd(out + k, a);
        }
        for (; k < n; ++k) out[k] += w * src[k];
    }
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc0);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace topofield::simd::detail
