#include "topofield/noise.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "topofield/error.hpp"

namespace topofield {

double WhiteNoiseGrid::cell_measure() const { return std::pow(geometry.spacing, geometry.dim); }

Coord WhiteNoiseGrid::cell_center(Index cell) const {
    Coord c = geometry.position(cell);
    for (int a = 0; a < geometry.dim; ++a) c[a] += 0.5 * geometry.spacing;
    return c;
}

Box WhiteNoiseGrid::domain() const {
    Box b;
    b.dim = geometry.dim;
    for (int a = 0; a < geometry.dim; ++a) {
        b.lo[a] = geometry.origin[a];
        b.hi[a] = geometry.origin[a] + static_cast<double>(geometry.shape[a]) * geometry.spacing;
    }
    return b;
}

WhiteNoiseGrid sample_white_noise(int dim, const Extent& shape, double spacing,
                                  const RngStream& stream, const Coord& origin) {
    require(spacing > 0.0, ErrorKind::invalid_argument, "white noise spacing must be positive");
    require(dim >= 1 && dim <= max_dim, ErrorKind::invalid_argument, "dimension must be in 1..3");
    WhiteNoiseGrid w;
    w.geometry.dim = dim;
    w.geometry.spacing = spacing;
    w.geometry.origin = origin;
    for (int a = 0; a < max_dim; ++a) {
        w.geometry.shape[a] = a < dim ? shape[a] : 1;
        require(w.geometry.shape[a] >= 1, ErrorKind::invalid_argument,
                "white noise shape entries must be >= 1");
    }
    w.values.resize(static_cast<std::size_t>(w.geometry.size()));
    stream.fill_normal(0, w.values);
    const double sd = std::sqrt(w.cell_measure());
    for (auto& v : w.values) v *= sd;
    return w;
}

MarkDistribution MarkDistribution::point(double value) {
    MarkDistribution m;
    m.kind = Kind::point_mass;
    m.a = m.b = value;
    return m;
}

MarkDistribution MarkDistribution::uniform_on(double lo, double hi) {
    MarkDistribution m;
    m.kind = Kind::uniform;
    m.a = lo;
    m.b = hi;
    return m;
}

MarkDistribution MarkDistribution::finite(std::vector<double> atoms, std::vector<double> weights) {
    MarkDistribution m;
    m.kind = Kind::discrete;
    m.atoms = std::move(atoms);
    m.weights = std::move(weights);
    return m;
}

void MarkDistribution::validate() const {
    switch (kind) {
        case Kind::point_mass:
            require(a >= 0.0, ErrorKind::invalid_argument, "point-mass mark must be >= 0");
            break;
        case Kind::uniform:
            require(a > 0.0 && a < b, ErrorKind::invalid_argument,
                    "uniform marks need 0 < a < b");
            break;
        case Kind::discrete: {
            require(!atoms.empty() && atoms.size() == weights.size(), ErrorKind::invalid_argument,
                    "discrete marks need matching non-empty atoms and weights");
            double total = 0.0;
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                require(atoms[i] >= 0.0 && weights[i] >= 0.0, ErrorKind::invalid_argument,
                        "discrete marks need non-negative atoms and weights");
                total += weights[i];
            }
            require(total > 0.0, ErrorKind::invalid_argument, "discrete mark weights sum to 0");
            break;
        }
    }
}

double MarkDistribution::sample(RngCursor& cursor) const {
    switch (kind) {
        case Kind::point_mass: return a;
        case Kind::uniform: return a + (b - a) * cursor.uniform();
        case Kind::discrete: {
            const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
            double u = cursor.uniform() * total;
            for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
                if (u < weights[i]) return atoms[i];
                u -= weights[i];
            }
            return atoms.back();
        }
    }
    return a;
}

double MarkDistribution::mean() const {
    switch (kind) {
        case Kind::point_mass: return a;
        case Kind::uniform: return 0.5 * (a + b);
        case Kind::discrete: {
            double s = 0.0, w = 0.0;
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                s += atoms[i] * weights[i];
                w += weights[i];
            }
            return s / w;
        }
    }
    return a;
}

std::string MarkDistribution::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::point_mass: os << "point(" << a << ")"; break;
        case Kind::uniform: os << "uniform(" << a << "," << b << ")"; break;
        case Kind::discrete:
            os << "discrete(";
            for (std::size_t i = 0; i < atoms.size(); ++i)
                os << (i ? ";" : "") << atoms[i] << ":" << weights[i];
            os << ")";
            break;
    }
    return os.str();
}

std::uint64_t sample_poisson(double mean, RngCursor& cursor) {
    require(mean >= 0.0 && std::isfinite(mean), ErrorKind::invalid_argument,
            "Poisson mean must be finite and >= 0");
    // Sum of independent Poisson(chunk) variates, each drawn by inversion.
    constexpr double chunk = 16.0;
    std::uint64_t total = 0;
    double remaining = mean;
    while (remaining > 0.0) {
        const double mu = std::min(chunk, remaining);
        remaining -= mu;
        double u = cursor.uniform();
        double p = std::exp(-mu);
        double cdf = p;
        std::uint64_t k = 0;
        while (u > cdf && k < 1000) {
            ++k;
            p *= mu / static_cast<double>(k);
            cdf += p;
        }
        total += k;
    }
    return total;
}

PointConfiguration sample_poisson_points(const Box& window, double intensity,
                                         const MarkDistribution& marks,
                                         const RngStream& stream) {
    require(intensity >= 0.0, ErrorKind::invalid_argument, "intensity must be >= 0");
    require(window.volume() > 0.0, ErrorKind::invalid_argument, "window must be non-degenerate");
    marks.validate();
    PointConfiguration cfg;
    cfg.window = window;
    RngCursor count_cursor(stream.child(0));
    const auto n = sample_poisson(intensity * window.volume(), count_cursor);
    RngCursor pos(stream.child(1));
    RngCursor mark_cursor(stream.child(2));
    cfg.points.reserve(n);
    cfg.marks.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        Coord p{};
        for (int a = 0; a < window.dim; ++a)
            p[a] = window.lo[a] + window.side(a) * pos.uniform();
        cfg.points.push_back(p);
        cfg.marks.push_back(marks.sample(mark_cursor));
    }
    return cfg;
}

}  // namespace topofield
