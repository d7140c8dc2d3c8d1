#pragma once

#include <cstdint>
#include <vector>

#include "topofield/grid.hpp"
#include "topofield/model.hpp"
#include "topofield/rng.hpp"
#include "topofield/stats.hpp"

namespace topofield {

/// Component of {F >= u} containing the vertex nearest the window center.
struct CenterComponent {
    bool present = false;        // center vertex at or above u
    double diameter = -1.0;      // max per-axis extent; -1 when absent
    bool touches_boundary = false;
    Index size = 0;
};

CenterComponent center_component(const GridField& field, double u);

struct TailCurve {
    double level = 0.0;
    std::vector<double> radii;
    std::vector<std::uint64_t> exceed;  // #{diam >= r}
    std::vector<double> prob;
    std::vector<stats::Interval> ci;
    std::uint64_t replicates = 0;
    std::uint64_t boundary_hits = 0;  // component reached the window boundary
    double max_diameter = 0.0;
    // log P vs log r over the resolvable range
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    int fitted = 0;
    double fit_lo = 0.0, fit_hi = 0.0;
};

struct TailOptions {
    double fit_min_radius = 0.0;
    std::uint64_t min_exceed = 10;  // points with fewer exceedances are unresolvable
    int threads = 1;
};

/// Empirical P(diam C(center) >= r) with Wilson intervals.
TailCurve diameter_tail(const FieldModel& model, const Box& window, double u,
                        const std::vector<double>& radii, int replicates, const RngStream& root,
                        const TailOptions& options = {});

/// Tail curve from raw diameters (absent components as negative values).
TailCurve tail_from_diameters(const std::vector<double>& diameters, double u,
                              const std::vector<double>& radii, const TailOptions& options);

}  // namespace topofield
