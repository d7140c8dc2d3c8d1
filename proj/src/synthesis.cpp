#include "topofield/synthesis.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <sstream>

#include "topofield/error.hpp"
#include "topofield/quadrature.hpp"
#include "topofield/simd.hpp"

namespace topofield {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// Map a dim-d extent onto three axes with leading ones, so the last axis is
// always the contiguous one.
std::array<Index, 3> as3(const Extent& e, int dim, Index fill) {
    std::array<Index, 3> r{fill, fill, fill};
    for (int a = 0; a < dim; ++a) r[3 - dim + a] = e[a];
    return r;
}

Index product(const std::array<Index, 3>& e) { return e[0] * e[1] * e[2]; }

void correlate_direct(const Stencil& s, const std::vector<double>& in, const Extent& in_shape,
                      const Extent& offset, std::vector<double>& out, const Extent& out_shape) {
    const int d = s.dim;
    const auto i3 = as3(in_shape, d, 1);
    const auto o3 = as3(out_shape, d, 1);
    const auto off3 = as3(offset, d, 0);
    Extent tshape{1, 1, 1};
    for (int a = 0; a < d; ++a) tshape[a] = s.taps;
    const auto t3 = as3(tshape, d, 1);
    out.assign(static_cast<std::size_t>(product(o3)), 0.0);
    for (Index o0 = 0; o0 < o3[0]; ++o0)
        for (Index o1 = 0; o1 < o3[1]; ++o1) {
            double* row = out.data() + (o0 * o3[1] + o1) * o3[2];
            for (Index t0 = 0; t0 < t3[0]; ++t0)
                for (Index t1 = 0; t1 < t3[1]; ++t1) {
                    const double* src =
                        in.data() + ((off3[0] + o0 + t0) * i3[1] + off3[1] + o1 + t1) * i3[2] +
                        off3[2];
                    const double* taps = s.values.data() + (t0 * t3[1] + t1) * t3[2];
                    simd::correlate_row(row, static_cast<std::size_t>(o3[2]), src, taps,
                                        static_cast<std::size_t>(t3[2]));
                }
        }
}

// Smallest 7-smooth integer >= n: sizes FFTW handles fast.
int good_fft_size(Index n) {
    for (Index m = std::max<Index>(n, 1);; ++m) {
        Index r = m;
        for (Index p : {2, 3, 5, 7})
            while (r % p == 0) r /= p;
        if (r == 1) return static_cast<int>(m);
    }
}

void correlate_fft(const Stencil& s, const std::vector<double>& in, const Extent& in_shape,
                   const Extent& offset, std::vector<double>& out, const Extent& out_shape) {
    const int d = s.dim;
    int n[max_dim];
    Index total = 1;
    for (int a = 0; a < d; ++a) {
        // Any size >= out + taps - 1 avoids wrap-around in the rows read back.
        n[a] = good_fft_size(out_shape[a] + s.taps - 1);
        total *= n[a];
    }
    const Index half_last = n[d - 1] / 2 + 1;
    const Index ctotal = total / n[d - 1] * half_last;

    double* a = fftw_alloc_real(static_cast<std::size_t>(total));
    double* b = fftw_alloc_real(static_cast<std::size_t>(total));
    fftw_complex* fa = fftw_alloc_complex(static_cast<std::size_t>(ctotal));
    fftw_complex* fb = fftw_alloc_complex(static_cast<std::size_t>(ctotal));
    require(a && b && fa && fb, ErrorKind::resource, "FFT buffer allocation failed");

    Extent block{1, 1, 1}, used{1, 1, 1};
    for (int ax = 0; ax < d; ++ax) {
        block[ax] = n[ax];
        used[ax] = out_shape[ax] + s.taps - 1;
    }
    const auto b3 = as3(block, d, 1);
    const auto u3 = as3(used, d, 1);
    const auto i3 = as3(in_shape, d, 1);
    const auto off3 = as3(offset, d, 0);
    std::fill(a, a + total, 0.0);
    for (Index k0 = 0; k0 < u3[0]; ++k0)
        for (Index k1 = 0; k1 < u3[1]; ++k1)
            for (Index k2 = 0; k2 < u3[2]; ++k2)
                a[(k0 * b3[1] + k1) * b3[2] + k2] =
                    in[static_cast<std::size_t>(((off3[0] + k0) * i3[1] + off3[1] + k1) * i3[2] +
                                                off3[2] + k2)];
    std::fill(b, b + total, 0.0);
    Extent tshape{1, 1, 1};
    for (int ax = 0; ax < d; ++ax) tshape[ax] = s.taps;
    const auto t3 = as3(tshape, d, 1);
    // Reversed stencil turns the correlation into a convolution.
    for (Index t0 = 0; t0 < t3[0]; ++t0)
        for (Index t1 = 0; t1 < t3[1]; ++t1)
            for (Index t2 = 0; t2 < t3[2]; ++t2) {
                const Index r0 = t3[0] - 1 - t0, r1 = t3[1] - 1 - t1, r2 = t3[2] - 1 - t2;
                b[(r0 * b3[1] + r1) * b3[2] + r2] = s.values[(t0 * t3[1] + t1) * t3[2] + t2];
            }

    fftw_plan pa, pb, pc;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        pa = fftw_plan_dft_r2c(d, n, a, fa, FFTW_ESTIMATE);
        pb = fftw_plan_dft_r2c(d, n, b, fb, FFTW_ESTIMATE);
        pc = fftw_plan_dft_c2r(d, n, fa, a, FFTW_ESTIMATE);
    }
    fftw_execute(pa);
    fftw_execute(pb);
    const double scale = 1.0 / static_cast<double>(total);
    for (Index k = 0; k < ctotal; ++k) {
        const double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
        const double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
        fa[k][0] = re * scale;
        fa[k][1] = im * scale;
    }
    fftw_execute(pc);

    const auto o3 = as3(out_shape, d, 1);
    out.assign(static_cast<std::size_t>(product(o3)), 0.0);
    const Index s0 = t3[0] - 1, s1 = t3[1] - 1, s2 = t3[2] - 1;
    for (Index k0 = 0; k0 < o3[0]; ++k0)
        for (Index k1 = 0; k1 < o3[1]; ++k1)
            for (Index k2 = 0; k2 < o3[2]; ++k2)
                out[static_cast<std::size_t>((k0 * o3[1] + k1) * o3[2] + k2)] =
                    a[((k0 + s0) * b3[1] + k1 + s1) * b3[2] + k2 + s2];

    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(pa);
        fftw_destroy_plan(pb);
        fftw_destroy_plan(pc);
    }
    fftw_free(a);
    fftw_free(b);
    fftw_free(fa);
    fftw_free(fb);
}

bool is_integer(double v, double tol = 1e-7) { return std::abs(v - std::round(v)) <= tol; }

}  // namespace

int stencil_half_width(const Kernel& kernel, double spacing) {
    require(spacing > 0.0, ErrorKind::invalid_argument, "spacing must be positive");
    const double ratio = kernel.synthesis_radius() / spacing;
    return std::max(1, static_cast<int>(std::ceil(ratio - 1e-9)));
}

Stencil make_stencil(const Kernel& kernel, double spacing, const MultiIndex& alpha) {
    Stencil s;
    s.dim = kernel.dim();
    s.half = stencil_half_width(kernel, spacing);
    s.taps = 2 * s.half;
    s.spacing = spacing;
    Index count = 1;
    for (int a = 0; a < s.dim; ++a) count *= s.taps;
    s.values.resize(static_cast<std::size_t>(count));
    const bool plain = order(alpha) == 0;
    for (Index idx = 0; idx < count; ++idx) {
        Index rest = idx;
        Coord o{};
        for (int a = s.dim - 1; a >= 0; --a) {
            const Index t = rest % s.taps;
            rest /= s.taps;
            o[a] = (s.half - 0.5 - static_cast<double>(t)) * spacing;
        }
        s.values[static_cast<std::size_t>(idx)] =
            plain ? kernel.value(o) : kernel.derivative(alpha, o);
    }
    return s;
}

GridGeometry noise_geometry_for(const Kernel& kernel, const Box& window, double spacing) {
    const GridGeometry v = vertex_grid(window, spacing);
    const int p = stencil_half_width(kernel, spacing);
    GridGeometry g;
    g.dim = v.dim;
    g.spacing = spacing;
    for (int a = 0; a < v.dim; ++a) {
        g.origin[a] = window.lo[a] - p * spacing;
        g.shape[a] = v.shape[a] - 1 + 2 * p;
    }
    return g;
}

WhiteNoiseGrid sample_noise_for(const Kernel& kernel, const Box& window, double spacing,
                                const RngStream& stream) {
    const GridGeometry g = noise_geometry_for(kernel, window, spacing);
    return sample_white_noise(g.dim, g.shape, spacing, stream, g.origin);
}

void correlate(const Stencil& stencil, const std::vector<double>& in, const Extent& in_shape,
               const Extent& offset, std::vector<double>& out, const Extent& out_shape,
               ConvolutionMethod method) {
    if (method == ConvolutionMethod::automatic) {
        Index outsz = 1;
        for (int a = 0; a < stencil.dim; ++a) outsz *= out_shape[a];
        method = (stencil.size() >= 256 && outsz >= 4096) ? ConvolutionMethod::fft
                                                            : ConvolutionMethod::direct;
    }
    if (method == ConvolutionMethod::fft)
        correlate_fft(stencil, in, in_shape, offset, out, out_shape);
    else
        correlate_direct(stencil, in, in_shape, offset, out, out_shape);
}

GridField synthesize_gaussian(const Kernel& kernel, const WhiteNoiseGrid& noise, const Box& window,
                              ConvolutionMethod method, const MultiIndex& alpha) {
    require(kernel.spec().normalization == Normalization::L2, ErrorKind::mode_mismatch,
            "Gaussian synthesis needs an L2-normalized kernel");
    const int d = kernel.dim();
    require(noise.geometry.dim == d && window.dim == d, ErrorKind::geometry,
            "noise, window and kernel dimensions differ");
    const double h = noise.geometry.spacing;
    const GridGeometry vg = vertex_grid(window, h);
    const Stencil s = make_stencil(kernel, h, alpha);

    Extent offset{0, 0, 0};
    for (int a = 0; a < d; ++a) {
        const double rel = (window.lo[a] - s.half * h - noise.geometry.origin[a]) / h;
        require(is_integer(rel), ErrorKind::geometry, "window is not aligned with the noise lattice");
        offset[a] = static_cast<Index>(std::llround(rel));
        require(offset[a] >= 0 && offset[a] + vg.shape[a] - 1 + s.taps <= noise.geometry.shape[a],
                ErrorKind::geometry, "noise grid does not cover the window plus kernel padding");
    }

    GridField f;
    f.geometry = vg;
    f.provenance.model = ModelKind::gaussian;
    f.provenance.kernel_id = kernel.id();
    correlate(s, noise.values, noise.geometry.shape, offset, f.values, vg.shape, method);
    return f;
}

GridField synthesize_gaussian(const Kernel& kernel, const WhiteNoiseGrid& noise) {
    const int p = stencil_half_width(kernel, noise.geometry.spacing);
    Box dom = noise.domain();
    for (int a = 0; a < dom.dim; ++a) {
        dom.lo[a] += p * noise.geometry.spacing;
        dom.hi[a] -= p * noise.geometry.spacing;
        require(dom.hi[a] >= dom.lo[a], ErrorKind::geometry,
                "noise grid is smaller than the kernel padding");
    }
    return synthesize_gaussian(kernel, noise, dom);
}

double evaluate_gaussian_at(const Kernel& kernel, const WhiteNoiseGrid& noise, const Coord& x) {
    const int d = kernel.dim();
    const double h = noise.geometry.spacing;
    const double r = kernel.synthesis_radius();
    Extent lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < d; ++a) {
        const double base = (x[a] - noise.geometry.origin[a]) / h - 0.5;
        lo[a] = std::max<Index>(0, static_cast<Index>(std::ceil(base - r / h)));
        hi[a] = std::min<Index>(noise.geometry.shape[a] - 1,
                                static_cast<Index>(std::floor(base + r / h)));
        if (hi[a] < lo[a]) return 0.0;
    }
    double sum = 0.0;
    Extent k{0, 0, 0};
    for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0])
        for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1])
            for (k[2] = lo[2]; k[2] <= hi[2]; ++k[2]) {
                const double w = noise.values[static_cast<std::size_t>(noise.geometry.flat(k))];
                if (w == 0.0) continue;
                Coord o{};
                for (int a = 0; a < d; ++a)
                    o[a] = x[a] - (noise.geometry.origin[a] + (static_cast<double>(k[a]) + 0.5) * h);
                sum += kernel.value(o) * w;
            }
    return sum;
}

GridField synthesize_shot_noise(const Kernel& kernel, const PointConfiguration& config,
                                const GridGeometry& grid, const MultiIndex& alpha) {
    require(kernel.spec().normalization == Normalization::L1, ErrorKind::mode_mismatch,
            "shot-noise synthesis needs an L1-normalized kernel");
    require(kernel.compact(), ErrorKind::unsupported_operation,
            "shot-noise synthesis needs a compactly supported kernel");
    const bool plain = order(alpha) == 0;
    if (!plain)
        require(kernel.smooth(), ErrorKind::unsupported_operation,
                "derivative fields need a smooth kernel");
    const int d = kernel.dim();
    require(grid.dim == d, ErrorKind::geometry, "grid and kernel dimensions differ");
    GridField f;
    f.geometry = grid;
    f.provenance.model = ModelKind::shot_noise;
    f.provenance.kernel_id = kernel.id();
    f.values.assign(static_cast<std::size_t>(grid.size()), 0.0);
    const double r = kernel.support_radius();
    const double h = grid.spacing;
    for (std::size_t p = 0; p < config.points.size(); ++p) {
        const Coord& P = config.points[p];
        const double mark = config.marks[p];
        Extent lo{0, 0, 0}, hi{0, 0, 0};
        bool empty = false;
        for (int a = 0; a < d; ++a) {
            lo[a] = std::max<Index>(0, static_cast<Index>(std::ceil((P[a] - r - grid.origin[a]) / h)));
            hi[a] = std::min<Index>(grid.shape[a] - 1,
                                    static_cast<Index>(std::floor((P[a] + r - grid.origin[a]) / h)));
            if (hi[a] < lo[a]) empty = true;
        }
        if (empty) continue;
        Extent k{0, 0, 0};
        for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0])
            for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1])
                for (k[2] = lo[2]; k[2] <= hi[2]; ++k[2]) {
                    const Coord x = grid.position(k);
                    Coord o{};
                    for (int a = 0; a < d; ++a) o[a] = x[a] - P[a];
                    const double v = plain ? kernel.value(o) : kernel.derivative(alpha, o);
                    f.values[static_cast<std::size_t>(grid.flat(k))] += mark * v;
                }
    }
    return f;
}

bool HalfSpace::contains(const Coord& y) const {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += normal[a] * y[a];
    return s > offset;
}

double HalfSpace::distance(const Coord& y) const {
    double s = 0.0, n2 = 0.0;
    for (int a = 0; a < dim; ++a) {
        s += normal[a] * y[a];
        n2 += normal[a] * normal[a];
    }
    return std::max(0.0, (offset - s) / std::sqrt(n2));
}

HalfSpace halfspace_between(int dim, const Coord& i, const Coord& j) {
    HalfSpace h;
    h.dim = dim;
    double ni = 0.0, nj = 0.0;
    bool same = true;
    for (int a = 0; a < dim; ++a) {
        h.normal[a] = j[a] - i[a];
        if (h.normal[a] != 0.0) same = false;
        ni += i[a] * i[a];
        nj += j[a] * j[a];
    }
    require(!same, ErrorKind::invalid_argument, "half-space needs two distinct lattice points");
    h.offset = 0.5 * (nj - ni);
    return h;
}

ResampleRegion ResampleRegion::of(const HalfSpace& h) {
    ResampleRegion r;
    r.kind = Kind::halfspace;
    r.half = h;
    r.box.dim = h.dim;
    return r;
}

ResampleRegion ResampleRegion::of(const Box& b) {
    ResampleRegion r;
    r.kind = Kind::box;
    r.box = b;
    r.half.dim = b.dim;
    return r;
}

bool ResampleRegion::contains(const Coord& y) const {
    if (kind == Kind::halfspace) return half.contains(y);
    for (int a = 0; a < box.dim; ++a)
        if (y[a] < box.lo[a] || y[a] >= box.hi[a]) return false;
    return true;
}

double ResampleRegion::distance(const Coord& y) const {
    if (kind == Kind::halfspace) return half.distance(y);
    double s = 0.0;
    for (int a = 0; a < box.dim; ++a) {
        const double g = std::max({box.lo[a] - y[a], 0.0, y[a] - box.hi[a]});
        s += g * g;
    }
    return std::sqrt(s);
}

std::string ResampleRegion::describe() const {
    std::ostringstream os;
    const int d = kind == Kind::halfspace ? half.dim : box.dim;
    if (kind == Kind::halfspace) {
        os << "halfspace(n=";
        for (int a = 0; a < d; ++a) os << (a ? "," : "") << half.normal[a];
        os << ";c=" << half.offset << ")";
    } else {
        os << "box(";
        for (int a = 0; a < d; ++a) os << (a ? "x" : "") << "[" << box.lo[a] << "," << box.hi[a] << ")";
        os << ")";
    }
    return os.str();
}

WhiteNoiseGrid resample_region(const WhiteNoiseGrid& noise, const ResampleRegion& region,
                               const RngStream& stream) {
    WhiteNoiseGrid out = noise;
    const double sd = std::sqrt(noise.cell_measure());
    const Index n = noise.geometry.size();
    for (Index c = 0; c < n; ++c)
        if (region.contains(noise.cell_center(c)))
            out.values[static_cast<std::size_t>(c)] = sd * stream.normal(static_cast<std::uint64_t>(c));
    return out;
}

WhiteNoiseGrid resample_halfspace(const WhiteNoiseGrid& noise, const Coord& i, const Coord& j,
                                  const RngStream& stream) {
    return resample_region(noise, ResampleRegion::of(halfspace_between(noise.geometry.dim, i, j)),
                           stream);
}

WhiteNoiseGrid resample_box(const WhiteNoiseGrid& noise, const Box& box, const RngStream& stream) {
    return resample_region(noise, ResampleRegion::of(box), stream);
}

GridField DeltaField::perturbed() const {
    GridField f = base;
    for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] -= values[k];
    return f;
}

DeltaField make_delta(const Kernel& kernel, const WhiteNoiseGrid& noise,
                      const WhiteNoiseGrid& resampled, const ResampleRegion& region,
                      const Box& window) {
    require(noise.geometry == resampled.geometry, ErrorKind::geometry,
            "resampled noise has a different geometry");
    DeltaField df;
    df.region = region;
    df.base = synthesize_gaussian(kernel, noise, window);
    WhiteNoiseGrid diff = noise;
    for (std::size_t k = 0; k < diff.values.size(); ++k) diff.values[k] -= resampled.values[k];
    // Direct summation keeps Δ exactly zero where no changed cell is in reach.
    df.values = synthesize_gaussian(kernel, diff, window, ConvolutionMethod::direct).values;
    return df;
}

DeltaProfile delta_variance_profile(const Kernel& kernel, const ResampleRegion& region,
                                    const std::vector<Coord>& probes, int replicates,
                                    double spacing, const RngStream& stream, double tail_min,
                                    double quadrature_tol) {
    require(kernel.spec().normalization == Normalization::L2, ErrorKind::mode_mismatch,
            "Δ-variance profile needs an L2-normalized kernel");
    require(replicates >= 2, ErrorKind::invalid_argument, "need at least two replicates");
    require(!probes.empty(), ErrorKind::invalid_argument, "need at least one probe");
    const int d = kernel.dim();
    const double r = kernel.synthesis_radius();

    // Cell lattice at multiples of h covering every probe stencil.
    Coord origin{};
    Extent shape{1, 1, 1};
    for (int a = 0; a < d; ++a) {
        double lo = probes[0][a], hi = probes[0][a];
        for (const auto& p : probes) {
            lo = std::min(lo, p[a]);
            hi = std::max(hi, p[a]);
        }
        const Index c0 = static_cast<Index>(std::floor((lo - r) / spacing)) - 1;
        const Index c1 = static_cast<Index>(std::ceil((hi + r) / spacing)) + 1;
        origin[a] = c0 * spacing;
        shape[a] = c1 - c0;
    }

    const std::size_t np = probes.size();
    std::vector<double> s1(np, 0.0), s2(np, 0.0), s4(np, 0.0);
    std::vector<std::vector<double>> samples(np, std::vector<double>(static_cast<std::size_t>(replicates)));
    for (int rep = 0; rep < replicates; ++rep) {
        const RngStream rs = stream.child(static_cast<std::uint64_t>(rep));
        const WhiteNoiseGrid w = sample_white_noise(d, shape, spacing, rs.child(0), origin);
        const WhiteNoiseGrid w2 = resample_region(w, region, rs.child(1));
        WhiteNoiseGrid diff = w;
        for (std::size_t k = 0; k < diff.values.size(); ++k) diff.values[k] -= w2.values[k];
        for (std::size_t p = 0; p < np; ++p)
            samples[p][static_cast<std::size_t>(rep)] = evaluate_gaussian_at(kernel, diff, probes[p]);
    }

    DeltaProfile prof;
    const double n = replicates;
    std::vector<double> xs, ys;
    for (std::size_t p = 0; p < np; ++p) {
        DeltaProbe pr;
        pr.x = probes[p];
        pr.distance = region.distance(probes[p]);
        double mean = 0.0;
        for (double v : samples[p]) mean += v;
        mean /= n;
        double m2 = 0.0, m4 = 0.0;
        for (double v : samples[p]) {
            const double c = (v - mean) * (v - mean);
            m2 += c;
            m4 += c * c;
        }
        pr.empirical_var = m2 / (n - 1.0);
        const double pm2 = m2 / n;
        pr.empirical_se = std::sqrt(std::max(0.0, m4 / n - pm2 * pm2) / n);

        const Coord x = probes[p];
        auto integrand = [&](const Coord& z) {
            const double v = kernel.value(z);
            return v * v;
        };
        Box supp = kernel.support_box();
        if (region.kind == ResampleRegion::Kind::halfspace) {
            double nx = 0.0;
            for (int a = 0; a < d; ++a) nx += region.half.normal[a] * x[a];
            pr.quadrature_var = 2.0 * integrate_box_halfspace(integrand, supp, region.half.normal,
                                                              region.half.offset - nx, quadrature_tol);
        } else {
            Box b = supp;
            for (int a = 0; a < d; ++a) {
                b.lo[a] = std::max(supp.lo[a], region.box.lo[a] - x[a]);
                b.hi[a] = std::min(supp.hi[a], region.box.hi[a] - x[a]);
            }
            pr.quadrature_var = 2.0 * integrate_box(integrand, b, quadrature_tol);
        }
        if (pr.distance >= tail_min && pr.empirical_var > 0.0) {
            xs.push_back(std::log1p(pr.distance));
            ys.push_back(std::log(pr.empirical_var));
        }
        prof.probes.push_back(pr);
    }
    prof.fitted = static_cast<int>(xs.size());
    if (xs.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            mx += xs[k];
            my += ys[k];
        }
        mx /= static_cast<double>(xs.size());
        my /= static_cast<double>(xs.size());
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            sxy += (xs[k] - mx) * (ys[k] - my);
            sxx += (xs[k] - mx) * (xs[k] - mx);
        }
        prof.slope = sxy / sxx;
        prof.intercept = my - prof.slope * mx;
    }
    return prof;
}

}  // namespace topofield
