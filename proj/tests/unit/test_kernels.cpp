#include <cmath>

#include "doctest.h"

#include "oracles.hpp"
#include "topofield/error.hpp"
#include "topofield/kernels.hpp"
#include "topofield/quadrature.hpp"

using namespace topofield;

namespace {

KernelSpec spec(KernelFamily f, int d, Normalization n = Normalization::L2, double b0 = 2.0) {
    KernelSpec s;
    s.family = f;
    s.dim = d;
    s.b0 = b0;
    s.normalization = n;
    return s;
}

double integral(const Kernel& k, int power) {
    const Box box = k.support_box();
    return integrate_box([&](const Coord& x) { return std::pow(k.value(x), power); }, box, 1e-9);
}

}  // namespace

TEST_CASE("quadrature integrates polynomials and half-spaces") {
    CHECK(adaptive_simpson([](double x) { return x * x * x; }, 0.0, 2.0, 1e-12) == doctest::Approx(4.0));
    const Box b = Box::cube(2, 0.0, 1.0);
    CHECK(integrate_box([](const Coord& x) { return x[0] * x[1]; }, b, 1e-10) == doctest::Approx(0.25));
    // {x + y > 1} ∩ [0,1]^2 has area 1/2
    CHECK(integrate_box_halfspace([](const Coord&) { return 1.0; }, b, {1.0, 1.0, 0.0}, 1.0, 1e-10) ==
          doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("normalizations hold") {
    for (int d = 1; d <= 2; ++d) {
        for (auto fam : {KernelFamily::uniform_indicator, KernelFamily::smooth_bump}) {
            const Kernel l2(spec(fam, d, Normalization::L2, 1.5));
            const Kernel l1(spec(fam, d, Normalization::L1, 1.5));
            CHECK(integral(l2, 2) == doctest::Approx(1.0).epsilon(1e-5));
            CHECK(integral(l1, 1) == doctest::Approx(1.0).epsilon(1e-5));
        }
    }
    const Kernel u(spec(KernelFamily::uniform_indicator, 2, Normalization::L2, 1.0));
    CHECK(u.value({0.49, -0.49, 0.0}) == doctest::Approx(1.0));
    CHECK(u.value({0.51, 0.0, 0.0}) == 0.0);
}

TEST_CASE("bump support is the ball inside the cube of side b0") {
    const Kernel k(spec(KernelFamily::smooth_bump, 2, Normalization::L2, 2.0));
    CHECK(k.support_radius() == doctest::Approx(1.0));
    CHECK(k.value({0.99, 0.0, 0.0}) > 0.0);
    CHECK(k.value({1.0, 0.0, 0.0}) == 0.0);
    CHECK(k.value({0.8, 0.8, 0.0}) == 0.0);
    CHECK(k.compact());
    CHECK(k.smooth());
}

TEST_CASE("analytic derivatives match finite differences") {
    auto p = spec(KernelFamily::polynomial_decay, 2);
    p.eta = 4.0;
    for (const Kernel& k : {Kernel(spec(KernelFamily::smooth_bump, 2)), Kernel(p)}) {
        for (const Coord& x : {Coord{0.3, -0.2, 0.0}, Coord{-0.55, 0.4, 0.0}, Coord{0.1, 0.7, 0.0}}) {
            for (int a = 0; a < 2; ++a) {
                MultiIndex e{};
                e[a] = 1;
                CHECK(k.derivative(e, x) == doctest::Approx(oracle::finite_difference(k, x, a, 1e-5)).epsilon(1e-6));
                // second derivative from the first
                MultiIndex e2{};
                e2[a] = 2;
                Coord xp = x, xm = x;
                xp[a] += 1e-5;
                xm[a] -= 1e-5;
                const double fd = (k.derivative(e, xp) - k.derivative(e, xm)) / 2e-5;
                CHECK(k.derivative(e2, x) == doctest::Approx(fd).epsilon(1e-5));
            }
            const double mixed_fd = (k.derivative({1, 0, 0}, {x[0], x[1] + 1e-5, 0.0}) -
                                     k.derivative({1, 0, 0}, {x[0], x[1] - 1e-5, 0.0})) / 2e-5;
            CHECK(k.derivative({1, 1, 0}, x) == doctest::Approx(mixed_fd).epsilon(1e-5));
        }
    }
    const Kernel u(spec(KernelFamily::uniform_indicator, 1));
    CHECK_THROWS_AS(u.derivative({1, 0, 0}, {0.1, 0.0, 0.0}), Error);
    const Kernel b(spec(KernelFamily::smooth_bump, 1));
    CHECK_THROWS_AS(b.derivative({4, 0, 0}, {0.1, 0.0, 0.0}), Error);
    CHECK_THROWS_AS(b.derivative({0, 1, 0}, {0.1, 0.0, 0.0}), Error);
}

TEST_CASE("indicator covariance is triangular") {
    for (int d = 1; d <= 2; ++d) {
        const Kernel k(spec(KernelFamily::uniform_indicator, d, Normalization::L2, 1.0));
        for (const Coord& lag : {Coord{0.0, 0.0, 0.0}, Coord{0.3, 0.0, 0.0}, Coord{0.25, -0.5, 0.0}, Coord{1.2, 0.0, 0.0}})
            CHECK(covariance(k, lag, 1e-8) == doctest::Approx(oracle::indicator_covariance(d, 1.0, lag)).epsilon(1e-6));
    }
}

TEST_CASE("covariance is symmetric, maximal at 0, and vanishes beyond twice the support") {
    const Kernel k(spec(KernelFamily::smooth_bump, 2));
    const double c0 = covariance(k, {0.0, 0.0, 0.0});
    CHECK(c0 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(covariance(k, {0.5, 0.2, 0.0}) == doctest::Approx(covariance(k, {-0.5, -0.2, 0.0})).epsilon(1e-8));
    CHECK(covariance(k, {0.5, 0.2, 0.0}) < c0);
    CHECK(covariance(k, {2.01, 0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
    const auto t = covariance_table(k, {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}});
    CHECK(t.values.size() == 2);
    CHECK(t.lambda.size() == 2);
}

TEST_CASE("second spectral moment of the 1d bump") {
    // independent value: λ = ∫ q'(x)^2 dx with q the L2-normalized bump, b0 = 2
    const Kernel k(spec(KernelFamily::smooth_bump, 1));
    const auto t = spectral_moments(k);
    CHECK(t.lambda[0] == doctest::Approx(3.0776091312).epsilon(1e-8));
    // equals -C''(0)
    const double h = 1e-3;
    const double c2 = (covariance(k, {h, 0, 0}, 1e-12) - 2.0 * covariance(k, {0, 0, 0}, 1e-12) +
                       covariance(k, {-h, 0, 0}, 1e-12)) / (h * h);
    CHECK(-c2 == doctest::Approx(t.lambda[0]).epsilon(1e-4));
    CHECK_THROWS_AS(spectral_moments(Kernel(spec(KernelFamily::uniform_indicator, 1))), Error);
}

TEST_CASE("polynomial kernels truncate with a reported bias") {
    auto p = spec(KernelFamily::polynomial_decay, 1);
    p.eta = 3.0;
    p.taper_radius = 1e6;
    const Kernel k(p);
    CHECK_FALSE(k.compact());
    CHECK(k.synthesis_radius() > 0.0);
    CHECK(std::abs(k.value({k.synthesis_radius() * 1.01, 0, 0})) < 1e-8);
    CHECK(k.truncation_bias() > 0.0);
    CHECK(k.truncation_bias() < 1e-6);
    p.eta = 0.9;
    CHECK_THROWS_AS(Kernel{p}, Error);
}

TEST_CASE("invalid kernel specs are rejected") {
    auto s = spec(KernelFamily::smooth_bump, 4);
    CHECK_THROWS_AS(Kernel{s}, Error);
    s = spec(KernelFamily::smooth_bump, 2, Normalization::L2, -1.0);
    CHECK_THROWS_AS(Kernel{s}, Error);
    CHECK_THROWS_AS(parse_kernel_family("gauss"), Error);
    CHECK(parse_kernel_family("polynomial") == KernelFamily::polynomial_decay);
    CHECK(parse_normalization("L1") == Normalization::L1);
    CHECK_THROWS_AS(covariance(Kernel(spec(KernelFamily::smooth_bump, 1, Normalization::L1)), {0, 0, 0}), Error);
}
