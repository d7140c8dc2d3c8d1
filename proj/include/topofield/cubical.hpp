#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "topofield/grid.hpp"

namespace topofield {

/// Order among equal vertex values (simulation of simplicity).
enum class TieBreak { index_ascending, index_descending };

/// Superlevel V-construction filtration of the cubical complex of a vertex
/// grid. Cells are addressed in doubled coordinates: cell c has coordinates
/// c_a in [0, 2 N_a - 2], odd coordinates span an edge direction, and the
/// cell dimension is the number of odd coordinates. A cell enters with its
/// latest vertex, so value(cell) = min of its vertex values.
class CubicalFiltration {
public:
    CubicalFiltration() = default;
    explicit CubicalFiltration(const GridField& field, TieBreak tie = TieBreak::index_ascending);

    const GridGeometry& vertices() const noexcept { return geom_; }
    const std::vector<double>& vertex_values() const noexcept { return values_; }
    int dim() const noexcept { return geom_.dim; }

    /// Vertex position in the filtration order (0 = highest value).
    std::uint32_t vertex_rank(Index v) const { return rank_[static_cast<std::size_t>(v)]; }
    Index vertex_at_rank(std::uint32_t r) const { return order_[r]; }
    Index vertex_count() const { return geom_.size(); }

    // Doubled-coordinate cell addressing.
    const Extent& cell_shape() const noexcept { return cshape_; }
    Index cell_count() const noexcept { return cshape_[0] * cshape_[1] * cshape_[2]; }
    Extent cell_coords(Index cell) const;
    Index cell_index(const Extent& c) const { return (c[0] * cshape_[1] + c[1]) * cshape_[2] + c[2]; }
    int cell_dim(Index cell) const;
    /// Latest vertex of the cell in filtration order.
    std::uint32_t cell_rank(Index cell) const;
    double cell_value(Index cell) const;
    /// Vertices of the cell (2^dim of them).
    std::vector<Index> cell_vertices(Index cell) const;
    /// Codimension-1 faces.
    std::vector<Index> faces(Index cell) const;

    /// Number of vertices with value >= u (a prefix of the rank order).
    std::uint32_t vertices_at_level(double u) const;
    bool cell_at_level(Index cell, double u) const;
    /// All cells with value >= u.
    std::vector<Index> cells_at_level(double u) const;
    /// Cell counts per dimension at level u.
    std::vector<Index> cell_counts_at_level(double u) const;
    /// Euler characteristic of the complex at level u.
    std::int64_t euler_characteristic(double u) const;

    /// Cells sorted by (rank, dim, index): a valid filtration order.
    std::vector<Index> filtration_order(int max_cell_dim) const;

private:
    GridGeometry geom_;
    std::vector<double> values_;
    std::vector<std::uint32_t> rank_;
    std::vector<Index> order_;
    Extent cshape_{1, 1, 1};
};

CubicalFiltration build_filtration(const GridField& field, TieBreak tie = TieBreak::index_ascending);

/// Grid-edge neighbours of a vertex (2d of them in the interior).
void vertex_neighbors(const GridGeometry& g, Index v, std::vector<Index>& out);

struct ComponentRecord {
    int id = 0;
    Index root = 0;                // vertex with the smallest rank
    Index size = 0;                // vertex count
    double diameter = 0.0;         // max per-axis extent, continuum units
    bool touches_boundary = false;
    Index reference_vertex = 0;    // lexicographically smallest local maximum
    Box bounding_box;
};

/// Components of {F >= u} joined along grid edges (the 1-skeleton of the
/// included complex). With interior_only, components containing a window
/// boundary vertex are dropped.
std::vector<ComponentRecord> components_at_level(const CubicalFiltration& f, double u,
                                                 bool interior_only);

/// Number of components of {F >= u} straight from the field values, without
/// a filtration; same connectivity and boundary rule as components_at_level.
Index count_components(const GridField& field, double u, bool interior_only);

/// Label of every vertex's component at level u (-1 below the level).
std::vector<int> label_components(const CubicalFiltration& f, double u);

/// Strict local maximum in the filtration order (all grid neighbours later).
bool is_local_max(const CubicalFiltration& f, Index v);

inline constexpr double essential_death = -std::numeric_limits<double>::infinity();

struct PersistencePair {
    int dim = 0;
    double birth = 0.0;
    double death = essential_death;
    Index birth_cell = 0;   // doubled-grid cell index
    Index death_cell = -1;  // -1 for essential classes
    /// Highest level at which the component holding the birth cell touches
    /// the window boundary; -inf if it never does.
    double touch_level = -std::numeric_limits<double>::infinity();
    /// Component of the birth cell, identified by its oldest vertex at birth.
    Index component = 0;

    bool essential() const { return death_cell < 0; }
    /// Interior at its birth level.
    bool interior() const { return touch_level < birth; }
    /// Effective death for interior counting: the level where the feature
    /// dies or its component first touches the boundary.
    double interior_death() const { return std::max(death, touch_level); }
};

struct PersistenceDiagram {
    int dim = 1;     // ambient dimension
    int max_dim = 0; // highest homology dimension computed
    std::vector<PersistencePair> pairs;

    std::vector<PersistencePair> of_dim(int q) const;
};

/// Level at which each vertex first connects to the window boundary along a
/// path in the superlevel set (widest-path value); boundary vertices map to
/// their own value.
std::vector<double> boundary_touch_levels(const CubicalFiltration& f);

/// 0-dimensional pairs by union-find with the elder rule.
PersistenceDiagram zero_dim_persistence(const CubicalFiltration& f);

/// Pairs up to dimension max_q over the 2-element field. Dimension 0 by
/// union-find; higher dimensions by column reduction with clearing.
/// Zero-persistence pairs are not reported.
PersistenceDiagram reduce_persistence(const CubicalFiltration& f, int max_q);

/// Exact step function u -> β(u) = #{birth >= u > death}, left-continuous in
/// u (right-continuous as the level is scanned downwards).
struct BettiPath {
    std::vector<double> levels;  // evaluation grid, ascending
    std::vector<std::int64_t> values;
    std::vector<double> jump_levels;  // descending distinct levels with nonzero net jump
    std::vector<std::int64_t> jumps;  // net jump δ_v = β(v) - β(v+)

    std::int64_t at(double u) const;  // exact evaluation from the jump list
};

BettiPath betti_curve(const PersistenceDiagram& d, const std::vector<double>& levels, int q,
                      bool interior_only);

struct MonotoneSplit {
    std::vector<double> levels;
    std::vector<std::int64_t> plus;   // β⁺(u) = Σ_{v >= u} [δ_v]₊
    std::vector<std::int64_t> minus;  // β⁻(u) = Σ_{v >= u} [δ_v]₋
};

MonotoneSplit split_monotone(const BettiPath& path);
/// β⁺ evaluated exactly at level u.
std::int64_t betti_plus_at(const BettiPath& path, double u);
std::int64_t betti_minus_at(const BettiPath& path, double u);

/// #{dim-q pairs with birth >= u_plus and death < u_minus}.
std::int64_t persistent_betti(const PersistenceDiagram& d, double u_minus, double u_plus, int q,
                              bool interior_only = false);

/// Distinct vertex values, ascending.
std::vector<double> critical_values(const CubicalFiltration& f);

struct CriticalPoint {
    Index vertex = 0;  // lower corner of the cell holding the point
    Coord position{};
    double value = 0.0;
};

/// Cells on which every derivative field changes sign and a Newton solve of
/// the multilinearly interpolated gradient lands inside the cell; value by
/// multilinear interpolation of F at that point. Only cells inside `window`
/// with value in [lo, hi) are returned.
std::vector<CriticalPoint> locate_critical_points(const GridField& field,
                                                  const std::vector<GridField>& gradient,
                                                  const Box& window, double lo, double hi);

void write_diagram_csv(const PersistenceDiagram& d, const std::string& path);
void write_betti_csv(const std::vector<double>& levels,
                     const std::vector<std::vector<std::int64_t>>& curves, bool interior_only,
                     const std::string& path);

}  // namespace topofield
