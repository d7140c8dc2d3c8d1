#pragma once

#include <array>
#include <cmath>

namespace topofield {

/// Truncated Taylor series in one variable up to order 3. Used to
/// differentiate radial kernel profiles exactly.
struct Jet {
    std::array<double, 4> c{};  // Taylor coefficients f^(k)(x0) / k!

    static Jet constant(double v) { return Jet{{v, 0.0, 0.0, 0.0}}; }
    static Jet variable(double x0) { return Jet{{x0, 1.0, 0.0, 0.0}}; }

    double value() const { return c[0]; }
    /// k-th derivative.
    double derivative(int k) const {
        static constexpr double factorial[4] = {1.0, 1.0, 2.0, 6.0};
        return c[static_cast<std::size_t>(k)] * factorial[k];
    }
};

inline Jet operator+(Jet a, const Jet& b) {
    for (int k = 0; k < 4; ++k) a.c[k] += b.c[k];
    return a;
}
inline Jet operator-(Jet a, const Jet& b) {
    for (int k = 0; k < 4; ++k) a.c[k] -= b.c[k];
    return a;
}
inline Jet operator-(Jet a) {
    for (auto& v : a.c) v = -v;
    return a;
}
inline Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; i + j < 4; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}
inline Jet operator*(double s, Jet a) {
    for (auto& v : a.c) v *= s;
    return a;
}
inline Jet operator+(double s, Jet a) {
    a.c[0] += s;
    return a;
}
inline Jet operator-(double s, const Jet& a) { return s + (-a); }

inline Jet reciprocal(const Jet& a) {
    Jet r;
    r.c[0] = 1.0 / a.c[0];
    for (int k = 1; k < 4; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += a.c[j] * r.c[k - j];
        r.c[k] = -s * r.c[0];
    }
    return r;
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
inline Jet operator/(double s, const Jet& b) { return s * reciprocal(b); }

inline Jet exp(const Jet& a) {
    Jet r;
    r.c[0] = std::exp(a.c[0]);
    for (int k = 1; k < 4; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * a.c[j] * r.c[k - j];
        r.c[k] = s / k;
    }
    return r;
}

inline Jet log(const Jet& a) {
    Jet r;
    r.c[0] = std::log(a.c[0]);
    for (int k = 1; k < 4; ++k) {
        double s = 0.0;
        for (int j = 1; j < k; ++j) s += j * r.c[j] * a.c[k - j];
        r.c[k] = (a.c[k] - s / k) / a.c[0];
    }
    return r;
}

inline Jet pow(const Jet& a, double p) { return exp(p * log(a)); }

}  // namespace topofield
