#include <atomic>
#include <cstdlib>
#include <cstring>

#include "topofield/simd.hpp"

namespace topofield::simd {

namespace {

bool probe_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool cpu_has_avx2() {
    static const bool has = probe_avx2();
    return has;
}

Isa detect() {
    Isa best = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
    if (const char* env = std::getenv("TOPOFIELD_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) best = Isa::scalar;
    }
    return best;
}

std::atomic<int>& current() {
    static std::atomic<int> isa{static_cast<int>(detect())};
    return isa;
}

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() { return static_cast<Isa>(current().load(std::memory_order_relaxed)); }

void set_active_isa(Isa isa) {
    if (!available(isa)) isa = Isa::scalar;
    current().store(static_cast<int>(isa), std::memory_order_relaxed);
}

void correlate_row(Isa isa, double* out, std::size_t n, const double* in, const double* taps,
                   std::size_t ntaps) {
#if defined(__x86_64__) || defined(_M_X64)
    if (isa == Isa::avx2 && cpu_has_avx2()) {
        detail::correlate_row_avx2(out, n, in, taps, ntaps);
        return;
    }
#endif
    detail::correlate_row_scalar(out, n, in, taps, ntaps);
}

void correlate_row(double* out, std::size_t n, const double* in, const double* taps,
                   std::size_t ntaps) {
    correlate_row(active_isa(), out, n, in, taps, ntaps);
}

double dot(Isa isa, const double* a, const double* b, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (isa == Isa::avx2 && cpu_has_avx2()) return detail::dot_avx2(a, b, n);
#endif
    return detail::dot_scalar(a, b, n);
}

double dot(const double* a, const double* b, std::size_t n) { return dot(active_isa(), a, b, n); }

}  // namespace topofield::simd
