#include "topofield/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "topofield/error.hpp"

namespace topofield {

double Box::volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= side(a);
    return v;
}

bool Box::contains(const Coord& x) const {
    for (int a = 0; a < dim; ++a)
        if (x[a] < lo[a] || x[a] > hi[a]) return false;
    return true;
}

Coord Box::center() const {
    Coord c{};
    for (int a = 0; a < dim; ++a) c[a] = 0.5 * (lo[a] + hi[a]);
    return c;
}

Box Box::cube(int dim, double lo, double hi) {
    Box b;
    b.dim = dim;
    for (int a = 0; a < dim; ++a) {
        b.lo[a] = lo;
        b.hi[a] = hi;
    }
    return b;
}

Extent GridGeometry::unflat(Index i) const {
    Extent k{};
    k[2] = i % shape[2];
    i /= shape[2];
    k[1] = i % shape[1];
    k[0] = i / shape[1];
    return k;
}

Coord GridGeometry::position(const Extent& k) const {
    Coord x{};
    for (int a = 0; a < dim; ++a) x[a] = origin[a] + static_cast<double>(k[a]) * spacing;
    return x;
}

bool GridGeometry::on_boundary(const Extent& k) const {
    for (int a = 0; a < dim; ++a)
        if (k[a] == 0 || k[a] == shape[a] - 1) return true;
    return false;
}

Box GridGeometry::span() const {
    Box b;
    b.dim = dim;
    for (int a = 0; a < dim; ++a) {
        b.lo[a] = origin[a];
        b.hi[a] = origin[a] + static_cast<double>(shape[a] - 1) * spacing;
    }
    return b;
}

GridGeometry vertex_grid(const Box& window, double spacing) {
    require(spacing > 0.0, ErrorKind::invalid_argument, "grid spacing must be positive");
    require(window.dim >= 1 && window.dim <= max_dim, ErrorKind::invalid_argument,
            "dimension must be in 1..3");
    GridGeometry g;
    g.dim = window.dim;
    g.spacing = spacing;
    for (int a = 0; a < window.dim; ++a) {
        const double cells = window.side(a) / spacing;
        const double rounded = std::round(cells);
        require(rounded >= 1.0 && std::abs(cells - rounded) < 1e-9 * std::max(1.0, cells),
                ErrorKind::geometry, "window side must be a positive multiple of the spacing");
        g.shape[a] = static_cast<Index>(rounded) + 1;
        g.origin[a] = window.lo[a];
    }
    return g;
}

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::gaussian: return "gaussian";
        case ModelKind::shot_noise: return "shot-noise";
        case ModelKind::synthetic: return "synthetic";
    }
    return "unknown";
}

void write_field(const GridField& field, const std::string& stem) {
    const auto& g = field.geometry;
    nlohmann::json header;
    header["d"] = g.dim;
    header["shape"] = std::vector<Index>(g.shape.begin(), g.shape.begin() + g.dim);
    header["h"] = g.spacing;
    const Box w = g.span();
    header["window"] = {{"lo", std::vector<double>(w.lo.begin(), w.lo.begin() + g.dim)},
                        {"hi", std::vector<double>(w.hi.begin(), w.hi.begin() + g.dim)}};
    header["provenance"] = {{"model", to_string(field.provenance.model)},
                            {"kernel", field.provenance.kernel_id},
                            {"stream_path", field.provenance.stream_path}};
    header["dtype"] = "float64-le";
    std::ofstream(stem + ".json") << header.dump(2) << "\n";
    std::ofstream bin(stem + ".bin", std::ios::binary);
    bin.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    require(static_cast<bool>(bin), ErrorKind::resource, "failed to write " + stem + ".bin");
}

GridField read_field(const std::string& stem) {
    std::ifstream hin(stem + ".json");
    require(static_cast<bool>(hin), ErrorKind::invalid_argument, "cannot open " + stem + ".json");
    const auto header = nlohmann::json::parse(hin);
    GridField f;
    f.geometry.dim = header.at("d").get<int>();
    const auto shape = header.at("shape").get<std::vector<Index>>();
    const auto lo = header.at("window").at("lo").get<std::vector<double>>();
    for (int a = 0; a < f.geometry.dim; ++a) {
        f.geometry.shape[a] = shape[static_cast<std::size_t>(a)];
        f.geometry.origin[a] = lo[static_cast<std::size_t>(a)];
    }
    f.geometry.spacing = header.at("h").get<double>();
    const auto& prov = header.at("provenance");
    const auto model = prov.at("model").get<std::string>();
    f.provenance.model = model == "gaussian"     ? ModelKind::gaussian
                         : model == "shot-noise" ? ModelKind::shot_noise
                                                 : ModelKind::synthetic;
    f.provenance.kernel_id = prov.at("kernel").get<std::string>();
    f.provenance.stream_path = prov.at("stream_path").get<std::vector<std::uint64_t>>();
    f.values.resize(static_cast<std::size_t>(f.geometry.size()));
    std::ifstream bin(stem + ".bin", std::ios::binary);
    bin.read(reinterpret_cast<char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    require(static_cast<bool>(bin), ErrorKind::invalid_argument, "truncated " + stem + ".bin");
    return f;
}

void write_field_csv(const GridField& field, const std::string& path) {
    const auto& g = field.geometry;
    require(g.dim <= 2, ErrorKind::invalid_argument, "CSV export supports d <= 2");
    std::ofstream out(path);
    out << (g.dim == 1 ? "x,value\n" : "x,y,value\n");
    char buf[96];
    for (Index i = 0; i < g.size(); ++i) {
        const Coord x = g.position(i);
        if (g.dim == 1)
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x[0], field.values[i]);
        else
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x[0], x[1], field.values[i]);
        out << buf;
    }
}

}  // namespace topofield
