#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace topofield {

using Index = std::int64_t;

inline constexpr int max_dim = 3;

using Coord = std::array<double, max_dim>;
using Extent = std::array<Index, max_dim>;

/// Axis-aligned box [lo, hi] in continuum coordinates (unused axes ignored).
struct Box {
    int dim = 1;
    Coord lo{};
    Coord hi{};

    double side(int axis) const { return hi[axis] - lo[axis]; }
    double volume() const;
    bool contains(const Coord& x) const;
    Coord center() const;

    static Box cube(int dim, double lo, double hi);
};

/// Regular lattice of `shape` points with spacing `spacing`, first point at
/// `origin`. Flat index is row-major with axis 0 slowest, so flat order is
/// lexicographic order on coordinates.
struct GridGeometry {
    int dim = 1;
    Extent shape{1, 1, 1};
    Coord origin{};
    double spacing = 1.0;

    Index size() const { return shape[0] * shape[1] * shape[2]; }
    Index flat(const Extent& k) const { return (k[0] * shape[1] + k[1]) * shape[2] + k[2]; }
    Extent unflat(Index i) const;
    Coord position(const Extent& k) const;
    Coord position(Index i) const { return position(unflat(i)); }
    bool on_boundary(const Extent& k) const;
    /// Box spanned by the lattice points.
    Box span() const;

    bool operator==(const GridGeometry&) const = default;
};

/// Vertex lattice that tiles `window` exactly with spacing h; the window
/// sides must be integer multiples of h.
GridGeometry vertex_grid(const Box& window, double spacing);

struct GridField;

/// Provenance of a field realization.
enum class ModelKind { gaussian, shot_noise, synthetic };

const char* to_string(ModelKind kind);

struct Provenance {
    ModelKind model = ModelKind::synthetic;
    std::string kernel_id;
    std::vector<std::uint64_t> stream_path;
};

/// Field sampled at the vertices of a grid.
struct GridField {
    GridGeometry geometry;
    std::vector<double> values;
    Provenance provenance;

    double at(const Extent& k) const { return values[static_cast<std::size_t>(geometry.flat(k))]; }
};

/// Flat binary (little-endian doubles) plus a JSON header.
void write_field(const GridField& field, const std::string& path_stem);
GridField read_field(const std::string& path_stem);
/// CSV export, d <= 2: one row per vertex `x,y,value` (y omitted for d = 1).
void write_field_csv(const GridField& field, const std::string& path);

}  // namespace topofield
