#pragma once

#include <span>
#include <vector>

#include "topofield/grid.hpp"
#include "topofield/rng.hpp"

namespace topofield {

/// iid Normal(0, h^d) cell values: the discrete white noise W(cell).
/// `geometry` addresses cells; `geometry.origin` is the lower corner of cell 0
/// so cell k covers [origin + k h, origin + (k + 1) h].
struct WhiteNoiseGrid {
    GridGeometry geometry;
    std::vector<double> values;

    double cell_measure() const;
    Coord cell_center(Index cell) const;
    Box domain() const;
};

WhiteNoiseGrid sample_white_noise(int dim, const Extent& shape, double spacing,
                                  const RngStream& stream, const Coord& origin = {});

/// Compactly supported mark distributions on [0, inf).
struct MarkDistribution {
    enum class Kind { point_mass, uniform, discrete };
    Kind kind = Kind::point_mass;
    double a = 1.0;  // point mass location, or uniform lower bound
    double b = 1.0;  // uniform upper bound
    std::vector<double> atoms;
    std::vector<double> weights;

    static MarkDistribution point(double value);
    static MarkDistribution uniform_on(double lo, double hi);
    static MarkDistribution finite(std::vector<double> atoms, std::vector<double> weights);

    void validate() const;
    double sample(RngCursor& cursor) const;
    double mean() const;
    std::string describe() const;
};

struct PointConfiguration {
    Box window;
    std::vector<Coord> points;
    std::vector<double> marks;
};

/// Poisson(mean) variate by chunked inversion; exact for any mean.
std::uint64_t sample_poisson(double mean, RngCursor& cursor);

PointConfiguration sample_poisson_points(const Box& window, double intensity,
                                         const MarkDistribution& marks,
                                         const RngStream& stream);

}  // namespace topofield
