#pragma once

#include <cstddef>

namespace topofield::simd {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa);

/// True if the CPU can run `isa` and the library was built with it.
bool available(Isa isa);

/// ISA used by the dispatching entry points. Defaults to the best available;
/// the TOPOFIELD_SIMD environment variable ("scalar" or "avx2") caps it.
Isa active_isa();
void set_active_isa(Isa isa);

/// out[k] += sum_t taps[t] * in[k + t] for k in [0, n).
void correlate_row(double* out, std::size_t n, const double* in, const double* taps,
                   std::size_t ntaps);
void correlate_row(Isa isa, double* out, std::size_t n, const double* in, const double* taps,
                   std::size_t ntaps);

double dot(const double* a, const double* b, std::size_t n);
double dot(Isa isa, const double* a, const double* b, std::size_t n);

namespace detail {
void correlate_row_scalar(double* out, std::size_t n, const double* in, const double* taps,
                          std::size_t ntaps);
double dot_scalar(const double* a, const double* b, std::size_t n);
#if defined(__x86_64__) || defined(_M_X64)
void correlate_row_avx2(double* out, std::size_t n, const double* in, const double* taps,
                        std::size_t ntaps);
double dot_avx2(const double* a, const double* b, std::size_t n);
#endif
}  // namespace detail

}  // namespace topofield::simd
