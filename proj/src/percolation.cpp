#include "topofield/percolation.hpp"

#include <algorithm>
#include <cmath>

#include "topofield/cubical.hpp"
#include "topofield/error.hpp"
#include "topofield/parallel.hpp"

namespace topofield {

CenterComponent center_component(const GridField& field, double u) {
    const GridGeometry& g = field.geometry;
    Extent c{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) c[a] = (g.shape[a] - 1) / 2;
    CenterComponent out;
    const Index start = g.flat(c);
    if (!(field.values[static_cast<std::size_t>(start)] >= u)) return out;
    out.present = true;
    std::vector<char> seen(static_cast<std::size_t>(g.size()), 0);
    std::vector<Index> stack{start}, nb;
    seen[static_cast<std::size_t>(start)] = 1;
    Extent lo = c, hi = c;
    while (!stack.empty()) {
        const Index v = stack.back();
        stack.pop_back();
        ++out.size;
        const Extent k = g.unflat(v);
        if (g.on_boundary(k)) out.touches_boundary = true;
        for (int a = 0; a < g.dim; ++a) {
            lo[a] = std::min(lo[a], k[a]);
            hi[a] = std::max(hi[a], k[a]);
        }
        vertex_neighbors(g, v, nb);
        for (Index w : nb) {
            auto& s = seen[static_cast<std::size_t>(w)];
            if (!s && field.values[static_cast<std::size_t>(w)] >= u) {
                s = 1;
                stack.push_back(w);
            }
        }
    }
    Index ext = 0;
    for (int a = 0; a < g.dim; ++a) ext = std::max(ext, hi[a] - lo[a]);
    out.diameter = static_cast<double>(ext) * g.spacing;
    return out;
}

TailCurve tail_from_diameters(const std::vector<double>& diameters, double u,
                              const std::vector<double>& radii, const TailOptions& options) {
    require(!radii.empty(), ErrorKind::invalid_argument, "radii must not be empty");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        require(radii[k] > 0.0, ErrorKind::invalid_argument, "radii must be positive");
        if (k > 0)
            require(radii[k] > radii[k - 1], ErrorKind::invalid_argument, "radii must be increasing");
    }
    TailCurve t;
    t.level = u;
    t.radii = radii;
    t.replicates = diameters.size();
    for (double d : diameters) t.max_diameter = std::max(t.max_diameter, d);
    for (double r : radii) {
        std::uint64_t e = 0;
        // small slack so radii that are lattice multiples count exactly
        for (double d : diameters)
            if (d >= r - 1e-9) ++e;
        t.exceed.push_back(e);
        t.prob.push_back(t.replicates ? static_cast<double>(e) / static_cast<double>(t.replicates) : 0.0);
        t.ci.push_back(stats::wilson_interval(e, t.replicates));
    }
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (radii[k] < options.fit_min_radius || t.exceed[k] < options.min_exceed) continue;
        lx.push_back(std::log(radii[k]));
        ly.push_back(std::log(t.prob[k]));
        if (lx.size() == 1) t.fit_lo = radii[k];
        t.fit_hi = radii[k];
    }
    t.fitted = static_cast<int>(lx.size());
    if (lx.size() >= 2) {
        const auto fit = stats::linear_fit(lx, ly);
        t.slope = fit.slope;
        t.intercept = fit.intercept;
        t.slope_se = fit.slope_se;
    }
    return t;
}

TailCurve diameter_tail(const FieldModel& model, const Box& window, double u,
                        const std::vector<double>& radii, int replicates, const RngStream& root,
                        const TailOptions& options) {
    require(replicates >= 1, ErrorKind::invalid_argument, "replicates must be >= 1");
    std::vector<double> diam(static_cast<std::size_t>(replicates));
    std::vector<char> hit(static_cast<std::size_t>(replicates), 0);
    parallel_for(diam.size(), options.threads, [&](std::size_t r) {
        const Realization z = model.realize(window, root.child(r));
        const CenterComponent c = center_component(z.field, u);
        diam[r] = c.diameter;
        hit[r] = c.touches_boundary;
    });
    TailCurve t = tail_from_diameters(diam, u, radii, options);
    for (char h : hit) t.boundary_hits += h ? 1 : 0;
    return t;
}

}  // namespace topofield
