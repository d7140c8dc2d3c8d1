#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topofield/cubical.hpp"
#include "topofield/model.hpp"
#include "topofield/stats.hpp"
#include "topofield/synthesis.hpp"

namespace topofield {

/// Unit cube Q_i = i + [-1/2, 1/2)^d.
Box unit_cell(int dim, const Coord& i);
bool in_cell(const Box& cell, const Coord& x);

/// Local β0 contribution of Q_i at level u: components whose reference
/// vertex (lexicographically smallest local maximum) lies in the cell.
std::int64_t local_betti(const CubicalFiltration& f, const Box& cell, double u,
                         bool interior_only = true);
/// local_betti(u_minus) - local_betti(u_plus).
std::int64_t local_betti_interval(const CubicalFiltration& f, const Box& cell, double u_minus,
                                  double u_plus, bool interior_only = true);

/// Largest per-axis extent among components at level u with a vertex in the
/// cell; 0 if there are none.
double max_component_diameter(const CubicalFiltration& f, const Box& cell, double u);

/// Range of influence of one noise cell on the vertex grid, ℓ∞.
double kernel_reach(const Kernel& kernel, double spacing);

/// ‖i - j‖ beyond which resampling H_{i,j} cannot change the local
/// functional of Q_i (compact kernels): the half-space then stays out of
/// reach of every component meeting Q_i and of its outer vertex layer.
double guaranteed_zero_separation(const Kernel& kernel, double spacing, int dim,
                                  double component_diameter);

/// Points of `config` inside `region` replaced by a fresh Poisson sample.
PointConfiguration resample_points(const PointConfiguration& config, const ResampleRegion& region,
                                   double intensity, const MarkDistribution& marks,
                                   const RngStream& stream);

struct ResampleRecord {
    std::uint64_t rep = 0;
    Coord i{};
    Coord j{};
    double dist = 0.0;  // δ_j = 1 + ‖i - j‖ / 3
    double u_minus = 0.0, u_plus = 0.0;
    std::int64_t before = 0, after = 0;
    bool changed = false;
    bool guaranteed_zero = false;  // separation beyond guaranteed_zero_separation
};

struct ChangeSetup {
    Box window;
    Coord i{};
    std::vector<Coord> targets;  // cells j
    double u_minus = 0.0, u_plus = 0.0;
    int replicates = 100;
    bool interior_only = true;
    int threads = 1;
};

struct ChangeEstimate {
    Coord j{};
    double separation = 0.0;  // ‖i - j‖
    std::uint64_t changes = 0, n = 0;
    double estimate = 0.0;
    stats::Interval ci;
    std::uint64_t guaranteed = 0;          // replicates with a guaranteed zero
    std::uint64_t guaranteed_changes = 0;  // changes among those (must be 0)
};

struct ChangeResult {
    std::vector<ResampleRecord> records;  // ordered by (rep, target)
    std::vector<ChangeEstimate> estimates;
};

/// P(β_[i](I) changes when H_{i,j} is resampled), per target j.
ChangeResult topology_change_probability(const FieldModel& model, const ChangeSetup& setup,
                                         const RngStream& root);

/// One record, from scratch: base and resampled realizations of replicate
/// `rep`, target index `t`.
ResampleRecord resample_once(const FieldModel& model, const ChangeSetup& setup,
                             const RngStream& root, std::uint64_t rep, std::size_t t);

void write_records_csv(const std::vector<ResampleRecord>& records, int dim, const std::string& path,
                       const std::string& config_hash = {});

struct StabilizationSample {
    std::uint64_t rep = 0;
    double radius = 0.0;
    bool censored = false;
};

struct StabilizationSetup {
    Box window;
    Coord origin{};
    std::vector<double> radii;  // half-space distances from origin, increasing
    double u_minus = 0.0, u_plus = 0.0;
    int replicates = 100;
    bool interior_only = true;
    int threads = 1;
};

struct StabilizationResult {
    std::vector<StabilizationSample> samples;
    std::vector<double> tail;  // P(R > r_k)
    double censored_fraction = 0.0;
    double slope = 0.0;  // log tail vs log r where the tail has >= 10 samples
    int fitted = 0;
};

/// Smallest tested radius after which resampling the half-spaces at every
/// farther tested radius, in the directions ±e_a, leaves β_[o] unchanged.
StabilizationResult stabilization_radius(const FieldModel& model, const StabilizationSetup& setup,
                                         const RngStream& root);

struct SigmaSetup {
    Box window;
    double box_side = 1.0;  // m
    double u = 0.5;
    int outer = 100;
    int inner = 8;
    std::vector<double> shifts{0.0};  // s values for the G-curve
    bool interior_only = true;
    int threads = 1;
};

struct SigmaResult {
    double sigma2 = 0.0;  // Var Ĝ(Z₀) with inner-noise correction, clamped at 0
    double sigma2_raw = 0.0;
    stats::JackknifeResult jackknife;
    double mean_g = 0.0;  // Ê G(Z₀)
    double mean_g_se = 0.0;
    std::vector<double> shifts;
    std::vector<double> curve;  // s -> Ê G(Z₀ + s)
    std::vector<double> curve_se;
    std::uint64_t box_cells = 0;
};

/// Nested Monte Carlo for G(Z₀) = E(B_Δ | Z₀), Z₀ = W(mQ₀), where B_Δ is
/// the interior β0 at level u before minus after resampling the noise in the
/// centered box mQ₀. Gaussian model only.
SigmaResult sigma_conditional(const FieldModel& model, const SigmaSetup& setup, const RngStream& root);

}  // namespace topofield
