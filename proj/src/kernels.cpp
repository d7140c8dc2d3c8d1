#include "topofield/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "topofield/error.hpp"
#include "topofield/jet.hpp"
#include "topofield/quadrature.hpp"

namespace topofield {

const char* to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::uniform_indicator: return "uniform";
        case KernelFamily::smooth_bump: return "bump";
        case KernelFamily::polynomial_decay: return "polynomial";
    }
    return "unknown";
}

const char* to_string(Normalization norm) { return norm == Normalization::L1 ? "L1" : "L2"; }

KernelFamily parse_kernel_family(const std::string& name) {
    if (name == "uniform" || name == "uniform-indicator") return KernelFamily::uniform_indicator;
    if (name == "bump" || name == "truncated-smooth-bump") return KernelFamily::smooth_bump;
    if (name == "polynomial" || name == "polynomial-decay") return KernelFamily::polynomial_decay;
    fail(ErrorKind::invalid_argument, "unknown kernel family '" + name + "'");
}

Normalization parse_normalization(const std::string& name) {
    if (name == "L1" || name == "l1") return Normalization::L1;
    if (name == "L2" || name == "l2") return Normalization::L2;
    fail(ErrorKind::invalid_argument, "unknown normalization '" + name + "'");
}

namespace {

constexpr double poly_cutoff = 1e-8;

double norm2(const Coord& x, int dim) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += x[a] * x[a];
    return s;
}

// Smooth step: 1 for t >= 1, 0 for t <= 0.
Jet smooth_step(const Jet& t) {
    if (t.value() >= 1.0) return Jet::constant(1.0);
    if (t.value() <= 0.0) return Jet::constant(0.0);
    const Jet f = exp(-1.0 / t);
    const Jet g = exp(-1.0 / (1.0 - t));
    return f / (f + g);
}

}  // namespace

Kernel::Kernel(KernelSpec spec, double tol) : spec_(spec) {
    require(spec_.dim >= 1 && spec_.dim <= max_dim, ErrorKind::invalid_argument,
            "kernel dimension must be in 1..3");
    switch (spec_.family) {
        case KernelFamily::uniform_indicator:
        case KernelFamily::smooth_bump:
            require(spec_.b0 > 0.0, ErrorKind::invalid_argument, "kernel b0 must be positive");
            break;
        case KernelFamily::polynomial_decay:
            require(spec_.eta > spec_.dim, ErrorKind::invalid_argument,
                    "polynomial kernel needs eta > d");
            require(spec_.scale > 0.0 && spec_.taper_radius > 0.0, ErrorKind::invalid_argument,
                    "polynomial kernel needs positive scale and taper radius");
            break;
    }

    amplitude_ = 1.0;
    const int power = spec_.normalization == Normalization::L1 ? 1 : 2;
    double mass = 0.0;
    if (spec_.family == KernelFamily::uniform_indicator) {
        mass = std::pow(spec_.b0, spec_.dim);
    } else {
        mass = radial_integral(
            [&](double r) { return std::pow(value_at_radius(r), power); }, 0.0,
            support_radius(), tol);
    }
    require(mass > 0.0, ErrorKind::degeneracy, "kernel has zero mass");
    amplitude_ = power == 1 ? 1.0 / mass : 1.0 / std::sqrt(mass);

    synthesis_radius_ = support_radius();
    truncation_bias_ = 0.0;
    if (spec_.family == KernelFamily::polynomial_decay) {
        // amplitude * (1 + r^2/s^2)^(-eta/2) = cutoff
        const double ratio = amplitude_ / poly_cutoff;
        const double r = spec_.scale * std::sqrt(std::pow(ratio, 2.0 / spec_.eta) - 1.0);
        if (r < synthesis_radius_) {
            synthesis_radius_ = r;
            // Mass outside the inscribed ball bounds the mass outside the stencil cube.
            truncation_bias_ = radial_integral(
                [&](double rr) { return std::pow(value_at_radius(rr), power); }, r,
                support_radius(), tol);
        }
    }
}

double Kernel::value_at_radius(double r) const {
    Coord x{};
    x[0] = r;
    return value(x);
}

double Kernel::radial_integral(const std::function<double(double)>& g, double r0, double r1,
                               double tol) const {
    static constexpr double sphere[4] = {0.0, 2.0, 2.0 * std::numbers::pi, 4.0 * std::numbers::pi};
    const int d = spec_.dim;
    return sphere[d] * adaptive_simpson([&](double r) { return g(r) * std::pow(r, d - 1); }, r0, r1,
                                        tol / sphere[d]);
}

double Kernel::support_radius() const noexcept {
    switch (spec_.family) {
        case KernelFamily::uniform_indicator:
        case KernelFamily::smooth_bump: return 0.5 * spec_.b0;
        case KernelFamily::polynomial_decay: return spec_.taper_radius;
    }
    return 0.0;
}

Box Kernel::support_box() const {
    const double r = support_radius();
    return Box::cube(spec_.dim, -r, r);
}

std::string Kernel::id() const {
    std::ostringstream os;
    os << to_string(spec_.family) << "/d" << spec_.dim;
    if (spec_.family == KernelFamily::polynomial_decay)
        os << "/eta=" << spec_.eta << "/scale=" << spec_.scale << "/taper=" << spec_.taper_radius;
    else
        os << "/b0=" << spec_.b0;
    os << "/" << to_string(spec_.normalization);
    return os.str();
}

double Kernel::profile(double rho) const {
    switch (spec_.family) {
        case KernelFamily::uniform_indicator: return 1.0;
        case KernelFamily::smooth_bump: return rho < 1.0 ? std::exp(-1.0 / (1.0 - rho)) : 0.0;
        case KernelFamily::polynomial_decay: {
            const double rt2 = spec_.taper_radius * spec_.taper_radius;
            if (rho >= rt2) return 0.0;
            const double core = std::pow(1.0 + rho / (spec_.scale * spec_.scale), -0.5 * spec_.eta);
            const double t = (rt2 - rho) / (0.75 * rt2);
            return core * smooth_step(Jet::constant(t)).value();
        }
    }
    return 0.0;
}

double Kernel::value(const Coord& x) const {
    const int d = spec_.dim;
    switch (spec_.family) {
        case KernelFamily::uniform_indicator: {
            const double half = 0.5 * spec_.b0;
            for (int a = 0; a < d; ++a)
                if (std::abs(x[a]) > half) return 0.0;
            return amplitude_;
        }
        case KernelFamily::smooth_bump: {
            const double r = 0.5 * spec_.b0;
            return amplitude_ * profile(norm2(x, d) / (r * r));
        }
        case KernelFamily::polynomial_decay: return amplitude_ * profile(norm2(x, d));
    }
    return 0.0;
}

double Kernel::derivative(const MultiIndex& alpha, const Coord& x) const {
    require(smooth(), ErrorKind::unsupported_operation,
            "derivatives are not defined for the uniform indicator kernel");
    const int m = order(alpha);
    require(m <= 3, ErrorKind::invalid_argument, "derivative order must be at most 3");
    for (int a = spec_.dim; a < max_dim; ++a)
        require(alpha[a] == 0, ErrorKind::invalid_argument, "derivative axis outside kernel dimension");
    if (m == 0) return value(x);

    const int d = spec_.dim;
    // The profile is a function of rho = |x|^2 / scale2.
    double scale2 = 1.0;
    if (spec_.family == KernelFamily::smooth_bump) scale2 = 0.25 * spec_.b0 * spec_.b0;
    const double rho0 = norm2(x, d) / scale2;

    Jet phi;
    const Jet rho = Jet::variable(rho0);
    if (spec_.family == KernelFamily::smooth_bump) {
        if (rho0 >= 1.0) return 0.0;
        phi = exp(-1.0 / (1.0 - rho));
    } else {
        const double rt2 = spec_.taper_radius * spec_.taper_radius;
        if (rho0 >= rt2) return 0.0;
        const Jet core = pow(1.0 + (1.0 / (spec_.scale * spec_.scale)) * rho, -0.5 * spec_.eta);
        phi = core * smooth_step((1.0 / (0.75 * rt2)) * (rt2 - rho));
    }

    std::array<int, 3> axes{};
    int n = 0;
    for (int a = 0; a < d; ++a)
        for (int k = 0; k < alpha[a]; ++k) axes[n++] = a;
    const double c = 2.0 / scale2;
    auto g = [&](int a) { return c * x[a]; };
    auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };

    double v = 0.0;
    if (m == 1) {
        v = phi.derivative(1) * g(axes[0]);
    } else if (m == 2) {
        const int a = axes[0], b = axes[1];
        v = phi.derivative(2) * g(a) * g(b) + phi.derivative(1) * c * delta(a, b);
    } else {
        const int a = axes[0], b = axes[1], e = axes[2];
        v = phi.derivative(3) * g(a) * g(b) * g(e) +
            phi.derivative(2) * c * (delta(a, b) * g(e) + delta(a, e) * g(b) + delta(b, e) * g(a));
    }
    return amplitude_ * v;
}

double eval_kernel(const Kernel& kernel, const Coord& x) { return kernel.value(x); }

double kernel_derivative(const Kernel& kernel, const MultiIndex& alpha, const Coord& x) {
    return kernel.derivative(alpha, x);
}

double covariance(const Kernel& kernel, const Coord& lag, double tol) {
    require(kernel.spec().normalization == Normalization::L2, ErrorKind::mode_mismatch,
            "covariance needs an L2-normalized kernel");
    const int d = kernel.dim();
    const Box s = kernel.support_box();
    Box region;
    region.dim = d;
    for (int a = 0; a < d; ++a) {
        region.lo[a] = std::max(s.lo[a], s.lo[a] - lag[a]);
        region.hi[a] = std::min(s.hi[a], s.hi[a] - lag[a]);
        if (!(region.hi[a] > region.lo[a])) return 0.0;
    }
    return integrate_box(
        [&](const Coord& y) {
            Coord z = y;
            for (int a = 0; a < d; ++a) z[a] += lag[a];
            return kernel.value(y) * kernel.value(z);
        },
        region, tol);
}

CovarianceTable spectral_moments(const Kernel& kernel, double tol) {
    require(kernel.spec().normalization == Normalization::L2, ErrorKind::mode_mismatch,
            "spectral moments need an L2-normalized kernel");
    require(kernel.smooth(), ErrorKind::unsupported_operation,
            "spectral moments need a smooth kernel family");
    CovarianceTable t;
    t.kernel = kernel.spec();
    const int d = kernel.dim();
    // Isotropic kernels: each λ_i is the mean of |∇q|^2 over the d axes.
    MultiIndex alpha{};
    alpha[0] = 1;
    const double grad2 = kernel.radial_integral(
        [&](double r) {
            Coord x{};
            x[0] = r;
            const double g = kernel.derivative(alpha, x);
            return g * g;
        },
        0.0, kernel.support_radius(), tol);
    const double lam = grad2 / d;
    require(lam > 1e-9, ErrorKind::degeneracy, "degenerate kernel: vanishing gradient variance");
    t.lambda.assign(static_cast<std::size_t>(d), lam);
    t.lags.push_back(Coord{});
    t.values.push_back(1.0);
    return t;
}

CovarianceTable covariance_table(const Kernel& kernel, const std::vector<Coord>& lags, double tol) {
    CovarianceTable t;
    t.kernel = kernel.spec();
    t.lags = lags;
    for (const auto& x : lags) t.values.push_back(covariance(kernel, x, tol));
    if (kernel.smooth()) t.lambda = spectral_moments(kernel).lambda;
    return t;
}

}  // namespace topofield
