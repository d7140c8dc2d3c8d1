#include "doctest.h"

#include "topofield/error.hpp"
#include "topofield/grid.hpp"

using namespace topofield;

TEST_CASE("vertex grids tile windows exactly") {
    const GridGeometry g = vertex_grid(Box::cube(2, -1.0, 1.0), 0.25);
    CHECK(g.shape == Extent{9, 9, 1});
    CHECK(g.size() == 81);
    CHECK(g.position(Index{0})[0] == doctest::Approx(-1.0));
    CHECK(g.position(g.flat({8, 4, 0}))[1] == doctest::Approx(0.0));
    CHECK(g.unflat(g.flat({3, 5, 0})) == Extent{3, 5, 0});
    CHECK(g.on_boundary({0, 4, 0}));
    CHECK_FALSE(g.on_boundary({1, 4, 0}));
    CHECK(g.span().hi[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS(vertex_grid(Box::cube(1, 0.0, 1.1), 0.25), Error);
    CHECK_THROWS_AS(vertex_grid(Box::cube(1, 0.0, 1.0), 0.0), Error);
}

TEST_CASE("boxes") {
    const Box b = Box::cube(3, 0.0, 2.0);
    CHECK(b.volume() == doctest::Approx(8.0));
    CHECK(b.contains({1.0, 2.0, 0.0}));
    CHECK_FALSE(b.contains({1.0, 2.1, 0.0}));
    CHECK(b.center()[2] == doctest::Approx(1.0));
}

TEST_CASE("field binary round trip and csv export") {
    GridField f;
    f.geometry = vertex_grid(Box::cube(2, 0.0, 1.0), 0.5);
    f.values = {0.1, -0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 1.0 / 3.0};
    f.provenance.model = ModelKind::gaussian;
    f.provenance.kernel_id = "bump";
    f.provenance.stream_path = {1, 2};
    write_field(f, "field_test");
    const GridField g = read_field("field_test");
    CHECK(g.geometry == f.geometry);
    CHECK(g.values == f.values);
    CHECK(g.provenance.kernel_id == "bump");
    CHECK(g.provenance.stream_path == f.provenance.stream_path);
    CHECK_NOTHROW(write_field_csv(f, "field_test.csv"));
    CHECK_THROWS_AS(read_field("no_such_field"), Error);
}
