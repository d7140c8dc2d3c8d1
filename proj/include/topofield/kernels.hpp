#pragma once

#include <functional>
#include <string>
#include <vector>

#include "topofield/grid.hpp"

namespace topofield {

enum class KernelFamily { uniform_indicator, smooth_bump, polynomial_decay };
enum class Normalization { L1, L2 };

const char* to_string(KernelFamily family);
const char* to_string(Normalization norm);
KernelFamily parse_kernel_family(const std::string& name);
Normalization parse_normalization(const std::string& name);

/// Parametric kernel description.
///
/// `b0` is the side of the support cube Q_{b0} = [-b0/2, b0/2]^d:
///  - uniform indicator: 1{x in Q_{b0}} (b0 = 1 gives the indicator of Q_1);
///  - smooth bump: exp(-1 / (1 - |2x/b0|^2)) on the Euclidean ball of radius b0/2;
///  - polynomial decay: (1 + |x|^2 / scale^2)^(-eta/2), times a smooth taper that
///    is 1 up to taper_radius/2 and vanishes from taper_radius on.
/// Amplitudes are fixed by `normalization`: L1 (integral 1) or L2 (integral of
/// the square 1).
struct KernelSpec {
    KernelFamily family = KernelFamily::smooth_bump;
    int dim = 2;
    double b0 = 2.0;
    double eta = 3.0;
    Normalization normalization = Normalization::L2;
    double scale = 1.0;
    double taper_radius = 16.0;

    bool operator==(const KernelSpec&) const = default;
};

/// Per-axis derivative orders; total order at most 3.
using MultiIndex = std::array<int, max_dim>;

inline int order(const MultiIndex& alpha) { return alpha[0] + alpha[1] + alpha[2]; }

/// A validated kernel with its normalization constant computed by quadrature.
class Kernel {
public:
    explicit Kernel(KernelSpec spec, double quadrature_tol = 1e-10);

    const KernelSpec& spec() const noexcept { return spec_; }
    int dim() const noexcept { return spec_.dim; }

    double value(const Coord& x) const;
    /// Analytic partial derivative; smooth families only.
    double derivative(const MultiIndex& alpha, const Coord& x) const;

    bool smooth() const noexcept { return spec_.family != KernelFamily::uniform_indicator; }
    bool compact() const noexcept { return spec_.family != KernelFamily::polynomial_decay; }

    /// L-infinity radius outside of which the kernel vanishes identically.
    double support_radius() const noexcept;
    /// Stencil radius for field synthesis (support radius, or for the
    /// polynomial family the radius where |q| drops below 1e-8, if smaller).
    double synthesis_radius() const noexcept { return synthesis_radius_; }
    /// Upper bound on the L1 or L2 mass (per normalization) lost by the
    /// synthesis truncation.
    double truncation_bias() const noexcept { return truncation_bias_; }
    double amplitude() const noexcept { return amplitude_; }
    /// Box containing the support.
    Box support_box() const;

    std::string id() const;

    /// ∫_{r0 <= |x| <= r1} g(|x|) dx for a radial integrand g.
    double radial_integral(const std::function<double(double)>& g, double r0, double r1,
                           double tol) const;

private:
    double value_at_radius(double r) const;
    double profile(double rho) const;  // un-normalized radial profile
    KernelSpec spec_;
    double amplitude_ = 1.0;
    double synthesis_radius_ = 0.0;
    double truncation_bias_ = 0.0;
};

double eval_kernel(const Kernel& kernel, const Coord& x);
double kernel_derivative(const Kernel& kernel, const MultiIndex& alpha, const Coord& x);

/// C(x) = ∫ q(y) q(y + x) dy, absolute error at most `tol`.
double covariance(const Kernel& kernel, const Coord& lag, double tol = 1e-7);

struct CovarianceTable {
    KernelSpec kernel;
    std::vector<Coord> lags;
    std::vector<double> values;
    std::vector<double> lambda;  // -d^2 C / dx_i^2 at 0
};

/// λ_i = ∫ (∂_i q)^2, i.e. the variances of the gradient components.
CovarianceTable spectral_moments(const Kernel& kernel, double tol = 1e-9);

CovarianceTable covariance_table(const Kernel& kernel, const std::vector<Coord>& lags,
                                 double tol = 1e-7);

}  // namespace topofield
