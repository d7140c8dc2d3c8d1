#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"

#include "topofield/rng.hpp"

using namespace topofield;

TEST_CASE("philox4x32-10 known-answer vectors") {
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) ==
          std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are pure functions of seed and path") {
    const RngStream a(7, {1, 2}), b(7, {1, 2});
    CHECK(a == b);
    CHECK(a.uniform(12345) == b.uniform(12345));
    CHECK(a.child(3) == RngStream(7, {1, 2, 3}));
    CHECK(make_stream(7, {1, 2}).normal(9) == a.normal(9));
    // different paths and seeds give different values
    CHECK(a.uniform(0) != RngStream(7, {1, 3}).uniform(0));
    CHECK(a.uniform(0) != RngStream(8, {1, 2}).uniform(0));
    CHECK(a.uniform(0) != RngStream(7, {2, 1}).uniform(0));
    CHECK(a.uniform(0) != RngStream(7, {1, 2, 0}).uniform(0));
}

TEST_CASE("fill_normal equals elementwise draws") {
    const RngStream s(3, {9});
    std::vector<double> v(17);
    s.fill_normal(5, v);
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(v[k] == s.normal(5 + k));
}

TEST_CASE("uniform and normal moments") {
    const RngStream s(11, {});
    const int n = 200000;
    double su = 0, su2 = 0, sn = 0, sn2 = 0, sn4 = 0;
    double umin = 1, umax = 0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform(static_cast<std::uint64_t>(i));
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        su += u;
        su2 += u * u;
        const double z = s.normal(static_cast<std::uint64_t>(i));
        sn += z;
        sn2 += z * z;
        sn4 += z * z * z * z;
    }
    CHECK(umin > 0.0);
    CHECK(umax < 1.0);
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(su2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
    CHECK(std::abs(sn / n) < 5.0 / std::sqrt(n));
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(sn4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("cursor walks a stream sequentially") {
    const RngStream s(5, {4});
    RngCursor c(s);
    CHECK(c.uniform() == s.uniform(0));
    CHECK(c.uniform() == s.uniform(1));
    CHECK(c.position() == 2);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) seen.insert(c.bits());
    CHECK(seen.size() == 1000);
}

TEST_CASE("splitmix64 reference values") {
    // state 0 advanced once
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafull);
}
