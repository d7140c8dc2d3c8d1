#include "topofield/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "topofield/error.hpp"
#include "topofield/parallel.hpp"

namespace topofield {

namespace {

double norm(int dim, const Coord& a, const Coord& b) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

std::string coord_str(int dim, const Coord& x) {
    std::ostringstream os;
    os.precision(17);
    for (int a = 0; a < dim; ++a) os << (a ? ":" : "") << x[a];
    return os.str();
}

// Realization together with the raw randomness that can be resampled.
struct State {
    GridField field;
    WhiteNoiseGrid noise;
    PointConfiguration points;
};

State base_state(const FieldModel& model, const Box& window, const RngStream& rep) {
    Realization r = model.realize(window, rep);
    return {std::move(r.field), std::move(r.noise), std::move(r.points)};
}

GridField perturbed_field(const FieldModel& model, const State& s, const Box& window,
                          const ResampleRegion& region, const RngStream& stream) {
    if (model.gaussian()) {
        const WhiteNoiseGrid fresh = resample_region(s.noise, region, stream);
        return make_delta(model.kernel(), s.noise, fresh, region, window).perturbed();
    }
    const auto& shot = model.config().shot;
    const PointConfiguration pts = resample_points(s.points, region, shot.intensity, shot.marks, stream);
    return synthesize_shot_noise(model.kernel(), pts, s.field.geometry);
}

}  // namespace

Box unit_cell(int dim, const Coord& i) {
    Box b;
    b.dim = dim;
    for (int a = 0; a < dim; ++a) {
        b.lo[a] = i[a] - 0.5;
        b.hi[a] = i[a] + 0.5;
    }
    return b;
}

bool in_cell(const Box& cell, const Coord& x) {
    for (int a = 0; a < cell.dim; ++a)
        if (x[a] < cell.lo[a] || x[a] >= cell.hi[a]) return false;
    return true;
}

std::int64_t local_betti(const CubicalFiltration& f, const Box& cell, double u, bool interior_only) {
    std::int64_t n = 0;
    for (const auto& c : components_at_level(f, u, interior_only))
        if (c.reference_vertex >= 0 && in_cell(cell, f.vertices().position(c.reference_vertex))) ++n;
    return n;
}

std::int64_t local_betti_interval(const CubicalFiltration& f, const Box& cell, double u_minus,
                                  double u_plus, bool interior_only) {
    return local_betti(f, cell, u_minus, interior_only) - local_betti(f, cell, u_plus, interior_only);
}

double max_component_diameter(const CubicalFiltration& f, const Box& cell, double u) {
    const GridGeometry& g = f.vertices();
    const auto label = label_components(f, u);
    const auto recs = components_at_level(f, u, false);
    double d = 0.0;
    for (Index v = 0; v < g.size(); ++v) {
        const int l = label[static_cast<std::size_t>(v)];
        if (l >= 0 && in_cell(cell, g.position(v)))
            d = std::max(d, recs[static_cast<std::size_t>(l)].diameter);
    }
    return d;
}

double kernel_reach(const Kernel& kernel, double spacing) {
    const int p = stencil_half_width(kernel, spacing);
    return std::max((p - 0.5) * spacing, kernel.support_radius());
}

double guaranteed_zero_separation(const Kernel& kernel, double spacing, int dim,
                                  double component_diameter) {
    require(kernel.compact(), ErrorKind::unsupported_operation,
            "no guaranteed-zero separation for a kernel without compact support");
    const double reach = 0.5 + component_diameter + spacing + kernel_reach(kernel, spacing);
    return 2.0 * std::sqrt(static_cast<double>(dim)) * reach;
}

PointConfiguration resample_points(const PointConfiguration& config, const ResampleRegion& region,
                                   double intensity, const MarkDistribution& marks,
                                   const RngStream& stream) {
    PointConfiguration out;
    out.window = config.window;
    for (std::size_t k = 0; k < config.points.size(); ++k)
        if (!region.contains(config.points[k])) {
            out.points.push_back(config.points[k]);
            out.marks.push_back(config.marks[k]);
        }
    const PointConfiguration fresh = sample_poisson_points(config.window, intensity, marks, stream);
    for (std::size_t k = 0; k < fresh.points.size(); ++k)
        if (region.contains(fresh.points[k])) {
            out.points.push_back(fresh.points[k]);
            out.marks.push_back(fresh.marks[k]);
        }
    return out;
}

namespace {

void check_setup(const ChangeSetup& s) {
    require(s.replicates >= 1, ErrorKind::invalid_argument, "replicates must be >= 1");
    require(s.u_plus >= s.u_minus, ErrorKind::invalid_argument, "interval must satisfy u_plus >= u_minus");
    require(!s.targets.empty(), ErrorKind::invalid_argument, "no target cells");
    for (const auto& j : s.targets)
        require(norm(s.window.dim, s.i, j) > 0.0, ErrorKind::invalid_argument, "cells i and j must differ");
}

ResampleRecord make_record(const FieldModel& model, const ChangeSetup& setup, const State& base,
                           std::int64_t before, double diameter,
                           const RngStream& rep_stream, std::uint64_t rep, std::size_t t) {
    const int dim = setup.window.dim;
    const Coord& j = setup.targets[t];
    const Box cell = unit_cell(dim, setup.i);
    ResampleRecord rec;
    rec.rep = rep;
    rec.i = setup.i;
    rec.j = j;
    const double sep = norm(dim, setup.i, j);
    rec.dist = 1.0 + sep / 3.0;
    rec.u_minus = setup.u_minus;
    rec.u_plus = setup.u_plus;
    rec.before = before;
    const ResampleRegion region = ResampleRegion::of(halfspace_between(dim, setup.i, j));
    const GridField pf = perturbed_field(model, base, setup.window, region,
                                         rep_stream.child(stream_tag::resample).child(t));
    const CubicalFiltration fp(pf);
    rec.after = local_betti_interval(fp, cell, setup.u_minus, setup.u_plus, setup.interior_only);
    rec.changed = rec.before != rec.after;
    if (model.kernel().compact())
        rec.guaranteed_zero =
            sep > guaranteed_zero_separation(model.kernel(), model.spacing(), dim, diameter);
    return rec;
}

}  // namespace

ResampleRecord resample_once(const FieldModel& model, const ChangeSetup& setup, const RngStream& root,
                             std::uint64_t rep, std::size_t t) {
    check_setup(setup);
    const RngStream rs = root.child(rep);
    const State base = base_state(model, setup.window, rs);
    const CubicalFiltration fb(base.field);
    const Box cell = unit_cell(setup.window.dim, setup.i);
    const auto before = local_betti_interval(fb, cell, setup.u_minus, setup.u_plus, setup.interior_only);
    const double diam = max_component_diameter(fb, cell, setup.u_minus);
    return make_record(model, setup, base, before, diam, rs, rep, t);
}

ChangeResult topology_change_probability(const FieldModel& model, const ChangeSetup& setup,
                                         const RngStream& root) {
    check_setup(setup);
    const std::size_t nt = setup.targets.size();
    const auto nrep = static_cast<std::size_t>(setup.replicates);
    ChangeResult out;
    out.records.resize(nrep * nt);
    const Box cell = unit_cell(setup.window.dim, setup.i);
    parallel_for(nrep, setup.threads, [&](std::size_t r) {
        const RngStream rs = root.child(r);
        const State base = base_state(model, setup.window, rs);
        const CubicalFiltration fb(base.field);
        const auto before =
            local_betti_interval(fb, cell, setup.u_minus, setup.u_plus, setup.interior_only);
        const double diam = max_component_diameter(fb, cell, setup.u_minus);
        for (std::size_t t = 0; t < nt; ++t)
            out.records[r * nt + t] = make_record(model, setup, base, before, diam, rs, r, t);
    });
    for (std::size_t t = 0; t < nt; ++t) {
        ChangeEstimate e;
        e.j = setup.targets[t];
        e.separation = norm(setup.window.dim, setup.i, e.j);
        for (std::size_t r = 0; r < nrep; ++r) {
            const auto& rec = out.records[r * nt + t];
            ++e.n;
            if (rec.changed) ++e.changes;
            if (rec.guaranteed_zero) {
                ++e.guaranteed;
                if (rec.changed) ++e.guaranteed_changes;
            }
        }
        e.estimate = static_cast<double>(e.changes) / static_cast<double>(e.n);
        e.ci = stats::wilson_interval(e.changes, e.n);
        out.estimates.push_back(e);
    }
    return out;
}

void write_records_csv(const std::vector<ResampleRecord>& records, int dim, const std::string& path,
                       const std::string& config_hash) {
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorKind::invalid_argument, "cannot write " + path);
    os.precision(17);
    if (!config_hash.empty()) os << "# config_hash=" << config_hash << "\n";
    os << "rep,i,j,dist,u_minus,u_plus,before,after,changed\n";
    for (const auto& r : records)
        os << r.rep << ',' << coord_str(dim, r.i) << ',' << coord_str(dim, r.j) << ',' << r.dist << ','
           << r.u_minus << ',' << r.u_plus << ',' << r.before << ',' << r.after << ','
           << (r.changed ? 1 : 0) << "\n";
}

StabilizationResult stabilization_radius(const FieldModel& model, const StabilizationSetup& setup,
                                         const RngStream& root) {
    require(setup.replicates >= 1, ErrorKind::invalid_argument, "replicates must be >= 1");
    require(!setup.radii.empty(), ErrorKind::invalid_argument, "radii must not be empty");
    for (std::size_t k = 0; k < setup.radii.size(); ++k) {
        require(setup.radii[k] > 0.0, ErrorKind::invalid_argument, "radii must be positive");
        if (k) require(setup.radii[k] > setup.radii[k - 1], ErrorKind::invalid_argument,
                       "radii must be increasing");
    }
    const int dim = setup.window.dim;
    const std::size_t nr = setup.radii.size();
    const Box cell = unit_cell(dim, setup.origin);
    StabilizationResult out;
    out.samples.resize(static_cast<std::size_t>(setup.replicates));
    parallel_for(out.samples.size(), setup.threads, [&](std::size_t rep) {
        const RngStream rs = root.child(rep);
        const State base = base_state(model, setup.window, rs);
        const CubicalFiltration fb(base.field);
        const auto before =
            local_betti_interval(fb, cell, setup.u_minus, setup.u_plus, setup.interior_only);
        int last = -1;
        std::uint64_t t = 0;
        for (std::size_t k = 0; k < nr; ++k) {
            bool changed = false;
            for (int a = 0; a < dim && !changed; ++a)
                for (int sgn = -1; sgn <= 1 && !changed; sgn += 2) {
                    Coord j = setup.origin;
                    j[a] += sgn * 2.0 * setup.radii[k];
                    const ResampleRegion region = ResampleRegion::of(halfspace_between(dim, setup.origin, j));
                    const GridField pf = perturbed_field(model, base, setup.window, region,
                                                         rs.child(stream_tag::resample).child(t++));
                    const CubicalFiltration fp(pf);
                    changed = local_betti_interval(fp, cell, setup.u_minus, setup.u_plus,
                                                   setup.interior_only) != before;
                }
            if (changed) last = static_cast<int>(k);
        }
        StabilizationSample s;
        s.rep = rep;
        if (last < 0) {
            s.radius = setup.radii.front();
        } else if (last + 1 >= static_cast<int>(nr)) {
            s.radius = setup.radii.back();
            s.censored = true;
        } else {
            s.radius = setup.radii[static_cast<std::size_t>(last + 1)];
        }
        out.samples[rep] = s;
    });
    std::uint64_t cens = 0;
    for (const auto& s : out.samples) cens += s.censored ? 1 : 0;
    const auto n = static_cast<double>(out.samples.size());
    out.censored_fraction = static_cast<double>(cens) / n;
    std::vector<double> lx, ly;
    for (double r : setup.radii) {
        std::uint64_t above = 0;
        for (const auto& s : out.samples)
            if (s.radius > r || (s.censored && s.radius >= r)) ++above;
        const double p = static_cast<double>(above) / n;
        out.tail.push_back(p);
        if (above >= 10) {
            lx.push_back(std::log(r));
            ly.push_back(std::log(p));
        }
    }
    out.fitted = static_cast<int>(lx.size());
    if (lx.size() >= 2) out.slope = stats::linear_fit(lx, ly).slope;
    return out;
}

SigmaResult sigma_conditional(const FieldModel& model, const SigmaSetup& setup, const RngStream& root) {
    require(model.gaussian(), ErrorKind::unsupported_operation,
            "the conditioning representation needs the Gaussian model");
    require(setup.inner >= 2, ErrorKind::invalid_argument, "inner replicates must be >= 2");
    require(setup.outer >= 2, ErrorKind::invalid_argument, "outer replicates must be >= 2");
    require(setup.box_side > 0.0, ErrorKind::invalid_argument, "box side must be positive");
    const int dim = setup.window.dim;
    Box box;
    box.dim = dim;
    const Coord c = setup.window.center();
    for (int a = 0; a < dim; ++a) {
        box.lo[a] = c[a] - 0.5 * setup.box_side;
        box.hi[a] = c[a] + 0.5 * setup.box_side;
    }
    const ResampleRegion region = ResampleRegion::of(box);
    const GridGeometry ng = noise_geometry_for(model.kernel(), setup.window, model.spacing());

    // Indicator of the box cells, and its field q ⋆ 1_box.
    WhiteNoiseGrid ind;
    ind.geometry = ng;
    ind.values.assign(static_cast<std::size_t>(ng.size()), 0.0);
    std::vector<Index> cells;
    for (Index k = 0; k < ng.size(); ++k)
        if (region.contains(ind.cell_center(k))) {
            cells.push_back(k);
            ind.values[static_cast<std::size_t>(k)] = 1.0;
        }
    require(!cells.empty(), ErrorKind::geometry, "box holds no noise cells");
    const double m_cells = static_cast<double>(cells.size());
    const GridField bump = model.field_from_noise(ind, setup.window);
    const double z_sd = std::sqrt(m_cells * ind.cell_measure());

    std::vector<double> shifts = setup.shifts;
    if (std::find(shifts.begin(), shifts.end(), 0.0) == shifts.end()) shifts.insert(shifts.begin(), 0.0);
    const std::size_t ns = shifts.size();
    const std::size_t s0 = static_cast<std::size_t>(std::find(shifts.begin(), shifts.end(), 0.0) - shifts.begin());
    const auto K = static_cast<std::size_t>(setup.inner);
    const auto O = static_cast<std::size_t>(setup.outer);

    auto count = [&](const GridField& f) {
        return static_cast<double>(components_at_level(CubicalFiltration(f), setup.u, setup.interior_only).size());
    };

    // g[o][s] = inner mean of B at shift s; v[o] = inner variance at s = 0
    std::vector<std::vector<double>> g(O, std::vector<double>(ns, 0.0));
    std::vector<double> v(O, 0.0);
    parallel_for(O, setup.threads, [&](std::size_t o) {
        const RngStream os = root.child(o);
        const double z = z_sd * os.child(stream_tag::conditioning).normal(0);
        std::vector<std::vector<double>> b(ns, std::vector<double>(K));
        for (std::size_t k = 0; k < K; ++k) {
            const RngStream is = os.child(stream_tag::inner).child(k);
            WhiteNoiseGrid w = sample_white_noise(dim, ng.shape, ng.spacing, is.child(stream_tag::noise), ng.origin);
            double sum = 0.0;
            for (Index cidx : cells) sum += w.values[static_cast<std::size_t>(cidx)];
            for (Index cidx : cells) w.values[static_cast<std::size_t>(cidx)] += (z - sum) / m_cells;
            const WhiteNoiseGrid w2 = resample_region(w, region, is.child(stream_tag::resample));
            const double after = count(model.field_from_noise(w2, setup.window));
            const GridField f = model.field_from_noise(w, setup.window);
            for (std::size_t si = 0; si < ns; ++si) {
                GridField fs = f;
                const double a = shifts[si] / m_cells;
                if (a != 0.0)
                    for (std::size_t x = 0; x < fs.values.size(); ++x) fs.values[x] += a * bump.values[x];
                b[si][k] = count(fs) - after;
            }
        }
        for (std::size_t si = 0; si < ns; ++si)
            g[o][si] = std::accumulate(b[si].begin(), b[si].end(), 0.0) / static_cast<double>(K);
        v[o] = stats::k_statistic(b[s0], 2);
    });

    SigmaResult out;
    out.box_cells = cells.size();
    out.shifts = shifts;
    auto estimate = [&](std::span<const double> idx) {
        std::vector<double> gs;
        double vm = 0.0;
        for (double d : idx) {
            const auto o = static_cast<std::size_t>(d);
            gs.push_back(g[o][s0]);
            vm += v[o];
        }
        vm /= static_cast<double>(idx.size());
        return stats::k_statistic(gs, 2) - vm / static_cast<double>(K);
    };
    std::vector<double> idx(O);
    std::iota(idx.begin(), idx.end(), 0.0);
    out.sigma2_raw = estimate(idx);
    out.sigma2 = std::max(0.0, out.sigma2_raw);
    out.jackknife = stats::jackknife(idx, estimate);
    out.jackknife.ci.lo = std::max(0.0, out.jackknife.ci.lo);
    out.jackknife.ci.hi = std::max(0.0, out.jackknife.ci.hi);
    for (std::size_t si = 0; si < ns; ++si) {
        std::vector<double> col(O);
        for (std::size_t o = 0; o < O; ++o) col[o] = g[o][si];
        const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(O);
        const double se = std::sqrt(stats::k_statistic(col, 2) / static_cast<double>(O));
        out.curve.push_back(mean);
        out.curve_se.push_back(se);
        if (si == s0) {
            out.mean_g = mean;
            out.mean_g_se = se;
        }
    }
    return out;
}

}  // namespace topofield
