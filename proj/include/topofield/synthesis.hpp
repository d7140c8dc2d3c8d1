#pragma once

#include <vector>

#include "topofield/grid.hpp"
#include "topofield/kernels.hpp"
#include "topofield/noise.hpp"
#include "topofield/rng.hpp"

namespace topofield {

/// Kernel (or kernel derivative) sampled at the vertex-minus-cell-center
/// offsets of a vertex grid over cells of the same spacing. Vertex k reads
/// cells k + t, t in [0, taps)^d, of a noise grid whose origin sits `half`
/// cells below the vertex origin.
struct Stencil {
    int dim = 1;
    int half = 1;  // P = ceil(r / h)
    int taps = 2;  // 2P per axis
    double spacing = 1.0;
    std::vector<double> values;  // taps^dim, row-major

    std::size_t size() const { return values.size(); }
};

int stencil_half_width(const Kernel& kernel, double spacing);
Stencil make_stencil(const Kernel& kernel, double spacing, const MultiIndex& alpha = {});

/// Cell grid covering window ⊕ [-P h, P h]^d.
GridGeometry noise_geometry_for(const Kernel& kernel, const Box& window, double spacing);

WhiteNoiseGrid sample_noise_for(const Kernel& kernel, const Box& window, double spacing,
                                const RngStream& stream);

enum class ConvolutionMethod { automatic, direct, fft };

/// F(vertex) = sum_cells q(vertex - center) W(cell) on the vertex grid of
/// `window`; with `alpha` the derivative field ∂^α F. The noise must cover the
/// padded window on the same lattice, otherwise a geometry error is raised.
GridField synthesize_gaussian(const Kernel& kernel, const WhiteNoiseGrid& noise, const Box& window,
                              ConvolutionMethod method = ConvolutionMethod::automatic,
                              const MultiIndex& alpha = {});
/// Same, with the window taken as the noise domain shrunk by the padding.
GridField synthesize_gaussian(const Kernel& kernel, const WhiteNoiseGrid& noise);

/// out[k] = sum_t stencil[t] * in[offset + k + t] over an out_shape block.
void correlate(const Stencil& stencil, const std::vector<double>& in, const Extent& in_shape,
               const Extent& offset, std::vector<double>& out, const Extent& out_shape,
               ConvolutionMethod method);

/// One field value at an arbitrary point, by direct summation.
double evaluate_gaussian_at(const Kernel& kernel, const WhiteNoiseGrid& noise, const Coord& x);

/// F_n(x) = sum_i S_i g(x - P_i) at the vertices of `grid`, or ∂^α F_n.
GridField synthesize_shot_noise(const Kernel& kernel, const PointConfiguration& config,
                                const GridGeometry& grid, const MultiIndex& alpha = {});

/// Open half-space {y : normal · y > offset}.
struct HalfSpace {
    int dim = 1;
    Coord normal{};
    double offset = 0.0;

    bool contains(const Coord& y) const;
    double distance(const Coord& y) const;  // 0 inside
};

/// Points strictly closer to j than to i.
HalfSpace halfspace_between(int dim, const Coord& i, const Coord& j);

struct ResampleRegion {
    enum class Kind { halfspace, box };
    Kind kind = Kind::halfspace;
    HalfSpace half;
    Box box;

    static ResampleRegion of(const HalfSpace& h);
    static ResampleRegion of(const Box& b);
    bool contains(const Coord& y) const;
    double distance(const Coord& y) const;
    std::string describe() const;
};

/// Cells with centers in `region` get fresh draws from `stream` (indexed by
/// cell), all others are copied.
WhiteNoiseGrid resample_region(const WhiteNoiseGrid& noise, const ResampleRegion& region,
                               const RngStream& stream);
WhiteNoiseGrid resample_halfspace(const WhiteNoiseGrid& noise, const Coord& i, const Coord& j,
                                  const RngStream& stream);
/// Box resampling: the box is intersected with the noise domain.
WhiteNoiseGrid resample_box(const WhiteNoiseGrid& noise, const Box& box, const RngStream& stream);

/// Δ_B = F - F^(B) on the window of `base`.
struct DeltaField {
    GridField base;
    ResampleRegion region;
    std::vector<double> values;

    GridField perturbed() const;
};

DeltaField make_delta(const Kernel& kernel, const WhiteNoiseGrid& noise,
                      const WhiteNoiseGrid& resampled, const ResampleRegion& region,
                      const Box& window);

struct DeltaProbe {
    Coord x{};
    double distance = 0.0;
    double empirical_var = 0.0;
    double empirical_se = 0.0;
    double quadrature_var = 0.0;
};

struct DeltaProfile {
    std::vector<DeltaProbe> probes;
    double slope = 0.0;  // log Var vs log(1 + dist) over probes with dist >= tail_min
    double intercept = 0.0;
    int fitted = 0;
};

/// Empirical Var Δ_B(x) over replicates against 2 ∫_B q(x - y)^2 dy.
DeltaProfile delta_variance_profile(const Kernel& kernel, const ResampleRegion& region,
                                    const std::vector<Coord>& probes, int replicates,
                                    double spacing, const RngStream& stream,
                                    double tail_min = 1.0, double quadrature_tol = 1e-9);

}  // namespace topofield
