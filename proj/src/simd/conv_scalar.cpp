#include "topofield/simd.hpp"

namespace topofield::simd::detail {

void correlate_row_scalar(double* out, std::size_t n, const double* in, const double* taps,
                          std::size_t ntaps) {
    for (std::size_t t = 0; t < ntaps; ++t) {
        const double w = taps[t];
        if (w == 0.0) continue;
        const double* src = in + t;
        for (std::size_t k = 0; k < n; ++k) out[k] += w * src[k];
    }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace topofield::simd::detail
