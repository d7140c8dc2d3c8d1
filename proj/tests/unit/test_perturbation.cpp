#include <cmath>
#include <fstream>
#include <set>

#include "doctest.h"

#include "topofield/error.hpp"
#include "topofield/perturbation.hpp"

using namespace topofield;

namespace {

FieldModel bump_model(int d, double b0 = 1.0, double h = 0.25) {
    ModelConfig m;
    m.kernel.dim = d;
    m.kernel.b0 = b0;
    m.spacing = h;
    return FieldModel(m);
}

}  // namespace

TEST_CASE("local functionals add up to the interior count") {
    const FieldModel m = bump_model(2);
    const Box w = Box::cube(2, -4.0, 4.0);
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
        const CubicalFiltration f(m.realize(w, RngStream(1, {rep})).field);
        for (double u : {0.0, 0.5, 1.0}) {
            std::int64_t total = 0;
            for (int x = -4; x <= 4; ++x)
                for (int y = -4; y <= 4; ++y) total += local_betti(f, unit_cell(2, {double(x), double(y), 0.0}), u);
            CHECK(total == static_cast<std::int64_t>(components_at_level(f, u, true).size()));
        }
        const Box c = unit_cell(2, {0, 0, 0});
        CHECK(local_betti_interval(f, c, 0.3, 0.8) == local_betti(f, c, 0.3) - local_betti(f, c, 0.8));
    }
}

TEST_CASE("unit cells are half open") {
    const Box c = unit_cell(2, {1.0, -2.0, 0.0});
    CHECK(in_cell(c, {0.5, -2.5, 0.0}));
    CHECK_FALSE(in_cell(c, {1.5, -2.0, 0.0}));
}

TEST_CASE("guaranteed-zero separation") {
    const FieldModel m = bump_model(2);
    const double r = kernel_reach(m.kernel(), 0.25);
    CHECK(r == doctest::Approx(0.5));
    CHECK(guaranteed_zero_separation(m.kernel(), 0.25, 2, 1.0) == doctest::Approx(2.0 * std::sqrt(2.0) * 2.25));
    KernelSpec p;
    p.family = KernelFamily::polynomial_decay;
    p.dim = 2;
    CHECK_THROWS_AS(guaranteed_zero_separation(Kernel(p), 0.25, 2, 1.0), Error);
}

TEST_CASE("resampling far away never changes the local functional") {
    const FieldModel m = bump_model(2);
    ChangeSetup s;
    s.window = Box::cube(2, -8.0, 8.0);
    s.i = {0, 0, 0};
    s.targets = {{1, 0, 0}, {7, 0, 0}};
    s.u_minus = -0.5;
    s.u_plus = 0.5;
    s.replicates = 40;
    const ChangeResult r = topology_change_probability(m, s, RngStream(5, {}));
    REQUIRE(r.records.size() == 80);
    REQUIRE(r.estimates.size() == 2);
    for (const auto& e : r.estimates) CHECK(e.guaranteed_changes == 0);
    CHECK(r.estimates[0].changes > 0);
    CHECK(r.estimates[1].changes <= r.estimates[0].changes);
    // ordered by (rep, target) and reproducible from scratch
    for (std::size_t k = 0; k < 6; ++k) {
        const auto& x = r.records[k];
        CHECK(x.rep == k / 2);
        const ResampleRecord y = resample_once(m, s, RngStream(5, {}), x.rep, k % 2);
        CHECK(y.before == x.before);
        CHECK(y.after == x.after);
        CHECK(y.changed == x.changed);
    }
    // threads do not change the records
    ChangeSetup s2 = s;
    s2.threads = 3;
    const ChangeResult r2 = topology_change_probability(m, s2, RngStream(5, {}));
    for (std::size_t k = 0; k < r.records.size(); ++k) CHECK(r2.records[k].after == r.records[k].after);
    CHECK(r.records[0].dist == doctest::Approx(1.0 + 1.0 / 3.0));
}

TEST_CASE("records csv layout") {
    ResampleRecord x;
    x.rep = 3;
    x.j = {2.0, 0.0, 0.0};
    x.dist = 1.5;
    x.before = 2;
    x.after = 1;
    x.changed = true;
    write_records_csv({x}, 2, "records_test.csv", "abc");
    std::ifstream is("records_test.csv");
    std::string a, b, c;
    std::getline(is, a);
    std::getline(is, b);
    std::getline(is, c);
    CHECK(a == "# config_hash=abc");
    CHECK(b == "rep,i,j,dist,u_minus,u_plus,before,after,changed");
    CHECK(c.rfind("3,0:0,2:0,1.5,", 0) == 0);
}

TEST_CASE("shot-noise resampling keeps points outside the region") {
    PointConfiguration pc;
    pc.window = Box::cube(1, 0.0, 10.0);
    pc.points = {{1.0, 0, 0}, {8.0, 0, 0}};
    pc.marks = {1.0, 1.0};
    const auto region = ResampleRegion::of(halfspace_between(1, {0, 0, 0}, {10, 0, 0}));
    const auto out = resample_points(pc, region, 1.0, MarkDistribution::point(1.0), RngStream(1, {}));
    CHECK(out.points[0][0] == 1.0);
    for (std::size_t k = 1; k < out.points.size(); ++k) CHECK(out.points[k][0] > 5.0);
    ModelConfig mc;
    mc.kind = ModelKind::shot_noise;
    mc.kernel.dim = 1;
    mc.kernel.b0 = 1.0;
    mc.kernel.normalization = Normalization::L1;
    const FieldModel m(mc);
    ChangeSetup s;
    s.window = Box::cube(1, -8.0, 8.0);
    s.targets = {{2, 0, 0}};
    s.u_minus = 0.2;
    s.u_plus = 0.6;
    s.replicates = 20;
    CHECK(topology_change_probability(m, s, RngStream(2, {})).records.size() == 20);
}

TEST_CASE("stabilization radii and censoring") {
    const FieldModel m = bump_model(1);
    StabilizationSetup s;
    s.window = Box::cube(1, -8.0, 8.0);
    s.radii = {1, 2, 4};
    s.u_minus = -0.5;
    s.u_plus = 0.5;
    s.replicates = 30;
    const StabilizationResult r = stabilization_radius(m, s, RngStream(3, {}));
    REQUIRE(r.samples.size() == 30);
    REQUIRE(r.tail.size() == 3);
    for (std::size_t k = 1; k < r.tail.size(); ++k) CHECK(r.tail[k] <= r.tail[k - 1]);
    for (const auto& x : r.samples) CHECK((x.radius == 0.0 || x.radius == 1 || x.radius == 2 || x.radius == 4));
    CHECK(r.censored_fraction >= 0.0);
    CHECK(r.censored_fraction <= 1.0);
}

TEST_CASE("conditional sigma estimate") {
    const FieldModel m = bump_model(1);
    SigmaSetup s;
    s.window = Box::cube(1, -4.0, 4.0);
    s.box_side = 2.0;
    s.u = 0.5;
    s.outer = 12;
    s.inner = 4;
    s.shifts = {-1.0, 1.0};
    const SigmaResult r = sigma_conditional(m, s, RngStream(4, {}));
    CHECK(r.sigma2 >= 0.0);
    CHECK(r.jackknife.ci.lo >= 0.0);
    CHECK(r.box_cells == 8);
    REQUIRE(r.shifts.size() == 3);
    CHECK(r.shifts[0] == 0.0);
    CHECK(r.curve.size() == 3);
    const SigmaResult again = sigma_conditional(m, s, RngStream(4, {}));
    CHECK(again.sigma2_raw == r.sigma2_raw);
    s.inner = 1;
    CHECK_THROWS_AS(sigma_conditional(m, s, RngStream(4, {})), Error);
    ModelConfig mc;
    mc.kind = ModelKind::shot_noise;
    mc.kernel.dim = 1;
    mc.kernel.normalization = Normalization::L1;
    s.inner = 4;
    CHECK_THROWS_AS(sigma_conditional(FieldModel(mc), s, RngStream(4, {})), Error);
}
