#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace topofield::stats {

/// Sums of centered powers about the sample mean.
struct CentralSums {
    std::size_t n = 0;
    double mean = 0.0;
    double s2 = 0.0, s3 = 0.0, s4 = 0.0;
};

CentralSums central_sums(std::span<const double> x);

/// Unbiased k-statistic k_r, r in 1..4. Needs n >= r (n >= 2 for r = 2).
double k_statistic(std::span<const double> x, int r);
double k_statistic(const CentralSums& c, int r);

/// Plug-in (biased) central moments and the fourth cumulant; the fourth
/// cumulant is obtained from raw moments, independently of m4.
struct PlugIn {
    double mean = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
    double kappa4_raw = 0.0;  // κ4 from raw moments
};

PlugIn plug_in_moments(std::span<const double> x);

struct Normality {
    std::size_t n = 0;
    double skewness = 0.0;         // m3 / m2^{3/2}
    double excess_kurtosis = 0.0;  // m4 / m2^2 - 3
    double jarque_bera = 0.0;
    double p_value = 1.0;          // chi-square(2) tail
    double qq_correlation = 1.0;
};

/// Moment-based normality statistics; n >= 20 and non-constant samples.
Normality normality_test(std::span<const double> x);

/// Kolmogorov-Smirnov distance of the samples to Normal(0, 1).
double ks_statistic_normal(std::vector<double> x);
/// Asymptotic 1% critical value.
double ks_critical_1pct(std::size_t n);

struct Interval {
    double lo = 0.0, hi = 0.0;
};

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 2.5758293035489004);

struct JackknifeResult {
    double estimate = 0.0;
    double se = 0.0;
    Interval ci;  // estimate ± z se
};

/// Delete-one jackknife of an arbitrary statistic.
JackknifeResult jackknife(std::span<const double> x,
                          const std::function<double(std::span<const double>)>& stat,
                          double z = 1.959963984540054);

/// Unbiased sample covariance of the rows of `samples` (replicates x K).
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples);
double min_eigenvalue(const Eigen::MatrixXd& sym);

struct Mardia {
    double b1 = 0.0;
    double statistic = 0.0;  // n b1 / 6
    double dof = 0.0;
    double p_value = 1.0;
    double critical_1pct = 0.0;
};

Mardia mardia_skewness(const Eigen::MatrixXd& samples);

struct LineFit {
    double slope = 0.0, intercept = 0.0, slope_se = 0.0;
    std::size_t n = 0;
};

LineFit linear_fit(std::span<const double> x, std::span<const double> y);

double normal_quantile(double p);
double normal_cdf(double x);

/// Mergeable streaming moments (pairwise update formulas).
class MomentAccumulator {
public:
    void add(double x);
    void merge(const MomentAccumulator& other);

    std::uint64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    CentralSums sums() const;
    double variance() const;  // unbiased

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0, m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
};

}  // namespace topofield::stats
