#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "doctest.h"

#include "oracles.hpp"
#include "topofield/cubical.hpp"
#include "topofield/error.hpp"

using namespace topofield;

namespace {

std::vector<double> probe_levels(const GridField& f) {
    std::set<double> s(f.values.begin(), f.values.end());
    std::vector<double> v(s.begin(), s.end());
    std::vector<double> out = v;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) out.push_back(0.5 * (v[k] + v[k + 1]));
    out.push_back(v.front() - 1.0);
    out.push_back(v.back() + 1.0);
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t library_betti(const PersistenceDiagram& d, double u, int q) {
    return betti_curve(d, {u}, q, false).values[0];
}

GridField grid_field(int dim, const Extent& shape, std::vector<double> values) {
    GridField f;
    f.geometry.dim = dim;
    f.geometry.shape = shape;
    f.values = std::move(values);
    return f;
}

}  // namespace

TEST_CASE("filtration cell values are vertex minima") {
    const GridField f = grid_field(2, {2, 2, 1}, {1.0, 2.0, 3.0, 4.0});
    const CubicalFiltration c(f);
    CHECK(c.cell_count() == 9);
    CHECK(c.cell_value(c.cell_index({1, 1, 0})) == 1.0);
    CHECK(c.cell_value(c.cell_index({2, 1, 0})) == 3.0);
    CHECK(c.cell_dim(c.cell_index({1, 1, 0})) == 2);
    CHECK(c.vertex_at_rank(0) == 3);
    CHECK(c.vertices_at_level(2.5) == 2);
}

TEST_CASE("betti numbers match the rank oracle on random 4x4 fields") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const GridField f = oracle::random_field(2, {4, 4, 1}, seed, seed % 3 == 0);
        const CubicalFiltration c(f);
        const PersistenceDiagram d = reduce_persistence(c, 2);
        for (double u : probe_levels(f)) {
            const auto b = oracle::betti(f, u);
            for (int q = 0; q <= 2; ++q) REQUIRE(library_betti(d, u, q) == b[static_cast<std::size_t>(q)]);
        }
    }
}

TEST_CASE("betti numbers match the rank oracle on random 3x3x3 fields") {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        const GridField f = oracle::random_field(3, {3, 3, 3}, seed, seed % 4 == 0);
        const PersistenceDiagram d = reduce_persistence(CubicalFiltration(f), 3);
        for (double u : probe_levels(f)) {
            const auto b = oracle::betti(f, u);
            for (int q = 0; q <= 3; ++q) REQUIRE(library_betti(d, u, q) == b[static_cast<std::size_t>(q)]);
        }
    }
}

TEST_CASE("persistent betti ranks match the oracle") {
    for (std::uint64_t seed = 200; seed < 220; ++seed) {
        const int dim = seed % 2 ? 2 : 3;
        const GridField f = dim == 2 ? oracle::random_field(2, {4, 4, 1}, seed) : oracle::random_field(3, {3, 3, 3}, seed);
        const PersistenceDiagram d = reduce_persistence(CubicalFiltration(f), dim);
        const auto lv = probe_levels(f);
        for (std::size_t a = 0; a < lv.size(); a += 3)
            for (std::size_t b = a; b < lv.size(); b += 4)
                for (int q = 0; q < dim; ++q)
                    REQUIRE(persistent_betti(d, lv[a], lv[b], q) == oracle::persistent_betti(f, lv[a], lv[b], q));
    }
}

TEST_CASE("euler identity holds at every level") {
    for (std::uint64_t seed = 300; seed < 330; ++seed) {
        const int dim = 1 + static_cast<int>(seed % 3);
        const Extent shape = dim == 1 ? Extent{9, 1, 1} : dim == 2 ? Extent{5, 4, 1} : Extent{3, 3, 3};
        const GridField f = oracle::random_field(dim, shape, seed, seed % 5 == 0);
        const CubicalFiltration c(f);
        const PersistenceDiagram d = reduce_persistence(c, dim);
        for (double u : probe_levels(f)) {
            std::int64_t alt = 0;
            for (int q = 0; q <= dim; ++q) alt += (q % 2 ? -1 : 1) * library_betti(d, u, q);
            REQUIRE(alt == c.euler_characteristic(u));
            REQUIRE(alt == oracle::euler(f, u));
        }
    }
}

TEST_CASE("zero-dimensional persistence agrees with the general reduction") {
    for (std::uint64_t seed = 400; seed < 420; ++seed) {
        const GridField f = oracle::random_field(2, {6, 5, 1}, seed, seed % 2 == 0);
        const CubicalFiltration c(f);
        const auto lv = probe_levels(f);
        const auto a = betti_curve(zero_dim_persistence(c), lv, 0, true).values;
        const auto b = betti_curve(reduce_persistence(c, 1), lv, 0, true).values;
        CHECK(a == b);
    }
}

TEST_CASE("interior and full component counts match flood fill") {
    for (std::uint64_t seed = 500; seed < 540; ++seed) {
        const int dim = 1 + static_cast<int>(seed % 3);
        const Extent shape = dim == 1 ? Extent{40, 1, 1} : dim == 2 ? Extent{9, 8, 1} : Extent{5, 4, 5};
        const GridField f = oracle::random_field(dim, shape, seed, seed % 4 == 0);
        const CubicalFiltration c(f);
        const PersistenceDiagram d = zero_dim_persistence(c);
        const auto lv = probe_levels(f);
        const auto interior = betti_curve(d, lv, 0, true).values;
        const auto full = betti_curve(d, lv, 0, false).values;
        for (std::size_t k = 0; k < lv.size(); ++k) {
            REQUIRE(interior[k] == oracle::components(f, lv[k], true));
            REQUIRE(full[k] == oracle::components(f, lv[k], false));
            REQUIRE(interior[k] <= full[k]);
            REQUIRE(static_cast<std::int64_t>(components_at_level(c, lv[k], true).size()) == interior[k]);
        }
    }
}

TEST_CASE("levelwise counting equals the diagram count") {
    for (std::uint64_t seed = 600; seed < 640; ++seed) {
        const int dim = 1 + static_cast<int>(seed % 3);
        const Extent shape = dim == 1 ? Extent{64, 1, 1} : dim == 2 ? Extent{10, 7, 1} : Extent{4, 5, 4};
        const GridField f = oracle::random_field(dim, shape, seed, seed % 3 == 0);
        const PersistenceDiagram d = zero_dim_persistence(CubicalFiltration(f));
        for (double u : probe_levels(f))
            for (bool interior : {true, false})
                REQUIRE(count_components(f, u, interior) == betti_curve(d, {u}, 0, interior).values[0]);
    }
}

TEST_CASE("boundary touch levels equal widest-path values") {
    for (std::uint64_t seed = 700; seed < 730; ++seed) {
        const int dim = 1 + static_cast<int>(seed % 3);
        const Extent shape = dim == 1 ? Extent{30, 1, 1} : dim == 2 ? Extent{8, 9, 1} : Extent{5, 5, 4};
        const GridField f = oracle::random_field(dim, shape, seed, seed % 2 == 0);
        const auto lib = boundary_touch_levels(CubicalFiltration(f));
        const auto ref = oracle::touch_levels(f);
        REQUIRE(lib.size() == ref.size());
        for (std::size_t v = 0; v < lib.size(); ++v) REQUIRE(lib[v] == ref[v]);
    }
}

TEST_CASE("betti values do not depend on the tie-break order") {
    for (std::uint64_t seed = 800; seed < 815; ++seed) {
        const GridField f = oracle::random_field(2, {5, 5, 1}, seed, true);
        const auto lv = probe_levels(f);
        const auto a = reduce_persistence(CubicalFiltration(f, TieBreak::index_ascending), 2);
        const auto b = reduce_persistence(CubicalFiltration(f, TieBreak::index_descending), 2);
        for (int q = 0; q <= 2; ++q) CHECK(betti_curve(a, lv, q, false).values == betti_curve(b, lv, q, false).values);
    }
}

TEST_CASE("monotone split reproduces the curve") {
    for (std::uint64_t seed = 900; seed < 920; ++seed) {
        const GridField f = oracle::random_field(2, {8, 8, 1}, seed, seed % 2 == 0);
        const PersistenceDiagram d = reduce_persistence(CubicalFiltration(f), 1);
        std::vector<double> lv;
        for (int k = 0; k <= 40; ++k) lv.push_back(-1.05 + 0.0525 * k);
        for (int q = 0; q <= 1; ++q)
            for (bool interior : {true, false}) {
                const BettiPath p = betti_curve(d, lv, q, interior);
                const MonotoneSplit s = split_monotone(p);
                for (std::size_t k = 0; k < lv.size(); ++k) {
                    REQUIRE(p.values[k] == s.plus[k] - s.minus[k]);
                    REQUIRE(p.at(lv[k]) == p.values[k]);
                    REQUIRE(betti_plus_at(p, lv[k]) == s.plus[k]);
                    REQUIRE(betti_minus_at(p, lv[k]) == s.minus[k]);
                    if (k > 0) {
                        REQUIRE(s.plus[k] <= s.plus[k - 1]);
                        REQUIRE(s.minus[k] <= s.minus[k - 1]);
                    }
                }
            }
    }
}

TEST_CASE("persistence pairs are ordered and zero-persistence pairs dropped") {
    const GridField f = oracle::random_field(3, {4, 4, 4}, 17);
    const PersistenceDiagram d = reduce_persistence(CubicalFiltration(f), 3);
    int essential0 = 0;
    for (const auto& p : d.pairs) {
        CHECK(p.birth > p.death);
        if (p.essential()) {
            ++essential0;
            CHECK(p.dim == 0);
        }
    }
    CHECK(essential0 == 1);
}

TEST_CASE("a single bump has one interior component") {
    GridField f = grid_field(2, {7, 7, 1}, std::vector<double>(49, 0.0));
    f.values[static_cast<std::size_t>(f.geometry.flat({3, 3, 0}))] = 2.0;
    f.values[static_cast<std::size_t>(f.geometry.flat({3, 4, 0}))] = 1.5;
    const CubicalFiltration c(f);
    const auto comps = components_at_level(c, 1.0, true);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].size == 2);
    CHECK(comps[0].reference_vertex == f.geometry.flat({3, 3, 0}));
    CHECK(comps[0].diameter == doctest::Approx(1.0));
    CHECK(is_local_max(c, f.geometry.flat({3, 3, 0})));
    CHECK_FALSE(is_local_max(c, f.geometry.flat({3, 4, 0})));
    // the whole field at level 0 touches the boundary
    CHECK(components_at_level(c, 0.0, true).empty());
    CHECK(components_at_level(c, 0.0, false).size() == 1);
}

TEST_CASE("critical points of a quadratic bump") {
    GridGeometry g;
    g.dim = 2;
    g.shape = {21, 21, 1};
    g.origin = {-1.0, -1.0, 0.0};
    g.spacing = 0.1;
    GridField f{g, {}, {}}, gx{g, {}, {}}, gy{g, {}, {}};
    const double a = 0.13, b = -0.27;
    for (Index v = 0; v < g.size(); ++v) {
        const Coord x = g.position(v);
        f.values.push_back(1.0 - (x[0] - a) * (x[0] - a) - (x[1] - b) * (x[1] - b));
        gx.values.push_back(-2.0 * (x[0] - a));
        gy.values.push_back(-2.0 * (x[1] - b));
    }
    const auto pts = locate_critical_points(f, {gx, gy}, g.span(), 0.0, 2.0);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].position[0] == doctest::Approx(a).epsilon(1e-9));
    CHECK(pts[0].position[1] == doctest::Approx(b).epsilon(1e-9));
    CHECK(pts[0].value == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(locate_critical_points(f, {gx, gy}, g.span(), 1.5, 2.0).empty());
    CHECK_THROWS_AS(locate_critical_points(f, {gx}, g.span(), 0.0, 2.0), Error);
}

TEST_CASE("betti curve csv has a mode header") {
    const std::string path = "betti_test.csv";
    write_betti_csv({0.0, 1.0}, {{1, 0}, {0, 0}}, true, path);
    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    CHECK(line == "# mode=interior");
    std::getline(is, line);
    CHECK(line == "u,beta0,beta1");
}
