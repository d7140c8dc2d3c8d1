#include <cmath>
#include <vector>

#include "doctest.h"

#include "topofield/error.hpp"
#include "topofield/rng.hpp"
#include "topofield/stats.hpp"

using namespace topofield;
using namespace topofield::stats;

namespace {
// reference values from scipy.stats (kstat, skew, kurtosis, jarque_bera)
const std::vector<double> sample{1, 2, 3, 4, 10, -2, 5.5};
}  // namespace

TEST_CASE("k-statistics match reference values") {
    CHECK(k_statistic(sample, 1) == doctest::Approx(3.357142857142857).epsilon(1e-12));
    CHECK(k_statistic(sample, 2) == doctest::Approx(14.226190476190476).epsilon(1e-12));
    CHECK(k_statistic(sample, 3) == doctest::Approx(31.232142857142858).epsilon(1e-12));
    CHECK(k_statistic(sample, 4) == doctest::Approx(226.11369047619047).epsilon(1e-12));
    CHECK_THROWS_AS(k_statistic(std::vector<double>{1.0}, 2), Error);
    CHECK_THROWS_AS(k_statistic(sample, 5), Error);
}

TEST_CASE("moment normality statistics") {
    std::vector<double> x;
    for (int k = 0; k < 3; ++k) x.insert(x.end(), sample.begin(), sample.end());
    const Normality n = normality_test(x);
    CHECK(n.skewness == doctest::Approx(0.4490701754423899).epsilon(1e-10));
    CHECK(n.excess_kurtosis == doctest::Approx(-0.2844799635860711).epsilon(1e-10));
    // JB = n/6 (S^2 + K^2/4) scales with n
    CHECK(n.jarque_bera == doctest::Approx(3.0 * 0.25887894070773226).epsilon(1e-10));
    CHECK(n.p_value == doctest::Approx(std::exp(-0.5 * n.jarque_bera)).epsilon(1e-10));
    CHECK_THROWS_AS(normality_test(sample), Error);
    CHECK_THROWS_AS(normality_test(std::vector<double>(30, 1.0)), Error);
}

TEST_CASE("normal samples pass normality and KS") {
    const RngStream s(21, {});
    std::vector<double> x(4000);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = s.normal(k);
    const Normality n = normality_test(x);
    CHECK(n.p_value > 1e-3);
    CHECK(n.qq_correlation > 0.99);
    CHECK(ks_statistic_normal(x) < ks_critical_1pct(x.size()));
    std::vector<double> y(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] * x[k];
    CHECK(normality_test(y).p_value < 1e-6);
}

TEST_CASE("plug-in moments and the raw-moment cumulant agree") {
    const PlugIn p = plug_in_moments(sample);
    CHECK(p.mean == doctest::Approx(3.357142857142857));
    // κ4 = m4 - 3 m2^2 computed two ways
    CHECK(p.kappa4_raw == doctest::Approx(p.m4 - 3.0 * p.m2 * p.m2).epsilon(1e-10));
}

TEST_CASE("wilson interval and normal functions") {
    const Interval i = wilson_interval(7, 50);
    CHECK(i.lo == doctest::Approx(0.05614371860633749).epsilon(1e-9));
    CHECK(i.hi == doctest::Approx(0.30820578743035476).epsilon(1e-9));
    const Interval z = wilson_interval(0, 100);
    CHECK(z.lo == 0.0);
    CHECK(z.hi > 0.0);
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
    CHECK(normal_cdf(1.3) == doctest::Approx(0.9031995154143897).epsilon(1e-12));
}

TEST_CASE("jackknife of the mean is the standard error") {
    const auto j = jackknife(sample, [](std::span<const double> v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    });
    CHECK(j.estimate == doctest::Approx(3.357142857142857));
    CHECK(j.se == doctest::Approx(std::sqrt(14.226190476190476 / 7.0)).epsilon(1e-10));
    CHECK(j.ci.hi - j.ci.lo == doctest::Approx(2 * 1.959963984540054 * j.se));
}

TEST_CASE("covariance, eigenvalues, mardia and line fit") {
    Eigen::MatrixXd m(4, 2);
    m << 1, 2, 2, 4, 3, 7, 4, 8;
    const Eigen::MatrixXd c = sample_covariance(m);
    CHECK(c(0, 0) == doctest::Approx(5.0 / 3.0));
    CHECK(c(0, 1) == doctest::Approx(c(1, 0)));
    CHECK(min_eigenvalue(c) > 0.0);
    Eigen::MatrixXd g(3000, 2);
    const RngStream s(22, {});
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
        g(r, 0) = s.normal(static_cast<std::uint64_t>(2 * r));
        g(r, 1) = 0.5 * g(r, 0) + s.normal(static_cast<std::uint64_t>(2 * r + 1));
    }
    const Mardia md = mardia_skewness(g);
    CHECK(md.dof == 4.0);
    CHECK(md.statistic < md.critical_1pct);
    const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
    const LineFit f = linear_fit(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.slope_se == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("moment accumulators merge exactly") {
    MomentAccumulator a, b, all;
    for (std::size_t k = 0; k < sample.size(); ++k) {
        (k < 3 ? a : b).add(sample[k]);
        all.add(sample[k]);
    }
    a.merge(b);
    CHECK(a.count() == all.count());
    CHECK(a.mean() == doctest::Approx(all.mean()).epsilon(1e-14));
    CHECK(a.variance() == doctest::Approx(14.226190476190476).epsilon(1e-12));
    CHECK(k_statistic(a.sums(), 4) == doctest::Approx(226.11369047619047).epsilon(1e-10));
}
