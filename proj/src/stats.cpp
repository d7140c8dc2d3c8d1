#include "topofield/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>

#include "topofield/error.hpp"

namespace topofield::stats {

CentralSums central_sums(std::span<const double> x) {
    CentralSums c;
    c.n = x.size();
    if (c.n == 0) return c;
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(c.n);
    c.mean = m;
    for (double v : x) {
        const double d = v - m;
        const double d2 = d * d;
        c.s2 += d2;
        c.s3 += d2 * d;
        c.s4 += d2 * d2;
    }
    return c;
}

double k_statistic(const CentralSums& c, int r) {
    require(r >= 1 && r <= 4, ErrorKind::invalid_argument, "k-statistic order must be 1..4");
    const double n = static_cast<double>(c.n);
    const std::size_t need = r == 1 ? 1 : static_cast<std::size_t>(r);
    require(c.n >= need, ErrorKind::invalid_argument, "not enough samples for this k-statistic");
    switch (r) {
        case 1: return c.mean;
        case 2: return c.s2 / (n - 1.0);
        case 3: return n * c.s3 / ((n - 1.0) * (n - 2.0));
        default:
            return (n * (n + 1.0) * c.s4 - 3.0 * (n - 1.0) * c.s2 * c.s2) /
                   ((n - 1.0) * (n - 2.0) * (n - 3.0));
    }
}

double k_statistic(std::span<const double> x, int r) { return k_statistic(central_sums(x), r); }

PlugIn plug_in_moments(std::span<const double> x) {
    require(!x.empty(), ErrorKind::invalid_argument, "no samples");
    const auto c = central_sums(x);
    const double n = static_cast<double>(c.n);
    PlugIn p;
    p.mean = c.mean;
    p.m2 = c.s2 / n;
    p.m3 = c.s3 / n;
    p.m4 = c.s4 / n;
    // Raw-moment route for κ4, shifted by the first sample for conditioning.
    const double shift = x[0];
    double r1 = 0, r2 = 0, r3 = 0, r4 = 0;
    for (double v : x) {
        const double y = v - shift;
        const double y2 = y * y;
        r1 += y;
        r2 += y2;
        r3 += y2 * y;
        r4 += y2 * y2;
    }
    r1 /= n;
    r2 /= n;
    r3 /= n;
    r4 /= n;
    p.kappa4_raw = r4 - 4.0 * r3 * r1 - 3.0 * r2 * r2 + 12.0 * r2 * r1 * r1 - 6.0 * r1 * r1 * r1 * r1;
    return p;
}

double normal_quantile(double p) {
    static const boost::math::normal_distribution<double> nd;
    return boost::math::quantile(nd, p);
}

double normal_cdf(double x) {
    static const boost::math::normal_distribution<double> nd;
    return boost::math::cdf(nd, x);
}

Normality normality_test(std::span<const double> x) {
    require(x.size() >= 20, ErrorKind::invalid_argument, "normality test needs at least 20 samples");
    const auto c = central_sums(x);
    const double n = static_cast<double>(c.n);
    const double m2 = c.s2 / n;
    require(m2 > 0.0 && m2 > 1e-28 * (c.mean * c.mean + 1e-300), ErrorKind::degenerate_sample,
            "samples are constant");
    Normality r;
    r.n = c.n;
    r.skewness = (c.s3 / n) / std::pow(m2, 1.5);
    r.excess_kurtosis = (c.s4 / n) / (m2 * m2) - 3.0;
    r.jarque_bera = n / 6.0 * (r.skewness * r.skewness + 0.25 * r.excess_kurtosis * r.excess_kurtosis);
    r.p_value = std::exp(-0.5 * r.jarque_bera);

    std::vector<double> z(x.begin(), x.end());
    std::sort(z.begin(), z.end());
    double sq = 0.0, sz = 0.0, sqz = 0.0, szz = 0.0, sqq = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double q = normal_quantile((static_cast<double>(i) + 1.0 - 0.375) / (n + 0.25));
        sq += q;
        sz += z[i];
        sqz += q * z[i];
        szz += z[i] * z[i];
        sqq += q * q;
    }
    const double cov = sqz - sq * sz / n;
    const double vz = szz - sz * sz / n;
    const double vq = sqq - sq * sq / n;
    r.qq_correlation = cov / std::sqrt(vz * vq);
    return r;
}

double ks_statistic_normal(std::vector<double> x) {
    require(!x.empty(), ErrorKind::invalid_argument, "no samples");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = normal_cdf(x[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_critical_1pct(std::size_t n) { return 1.6276236115189306 / std::sqrt(static_cast<double>(n)); }

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

JackknifeResult jackknife(std::span<const double> x,
                          const std::function<double(std::span<const double>)>& stat, double z) {
    require(x.size() >= 2, ErrorKind::invalid_argument, "jackknife needs at least two samples");
    const std::size_t n = x.size();
    JackknifeResult r;
    r.estimate = stat(x);
    std::vector<double> buf(n - 1);
    std::vector<double> loo(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(i), buf.begin());
        std::copy(x.begin() + static_cast<std::ptrdiff_t>(i) + 1, x.end(),
                  buf.begin() + static_cast<std::ptrdiff_t>(i));
        loo[i] = stat(buf);
    }
    double m = 0.0;
    for (double v : loo) m += v;
    m /= static_cast<double>(n);
    double s = 0.0;
    for (double v : loo) s += (v - m) * (v - m);
    r.se = std::sqrt(s * static_cast<double>(n - 1) / static_cast<double>(n));
    r.ci = {r.estimate - z * r.se, r.estimate + z * r.se};
    return r;
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples) {
    require(samples.rows() >= 2, ErrorKind::invalid_argument, "covariance needs two replicates");
    const Eigen::RowVectorXd mean = samples.colwise().mean();
    const Eigen::MatrixXd c = samples.rowwise() - mean;
    Eigen::MatrixXd cov = (c.transpose() * c) / static_cast<double>(samples.rows() - 1);
    // Exact symmetry.
    return 0.5 * (cov + cov.transpose());
}

double min_eigenvalue(const Eigen::MatrixXd& sym) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Mardia mardia_skewness(const Eigen::MatrixXd& samples) {
    const Eigen::Index n = samples.rows();
    const Eigen::Index p = samples.cols();
    require(n > p + 1, ErrorKind::invalid_argument, "not enough replicates for Mardia's test");
    const Eigen::RowVectorXd mean = samples.colwise().mean();
    const Eigen::MatrixXd c = samples.rowwise() - mean;
    const Eigen::MatrixXd s = (c.transpose() * c) / static_cast<double>(n);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
    require(ldlt.info() == Eigen::Success && ldlt.rcond() > 1e-14, ErrorKind::degenerate_sample,
            "singular covariance in Mardia's test");
    const Eigen::MatrixXd w = ldlt.solve(c.transpose());  // p x n
    const Eigen::MatrixXd g = c * w;                       // n x n
    double b1 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) b1 += g(i, j) * g(i, j) * g(i, j);
    Mardia m;
    m.b1 = b1 / (static_cast<double>(n) * static_cast<double>(n));
    m.statistic = static_cast<double>(n) * m.b1 / 6.0;
    m.dof = static_cast<double>(p * (p + 1) * (p + 2)) / 6.0;
    const boost::math::chi_squared_distribution<double> chi(m.dof);
    m.p_value = boost::math::cdf(boost::math::complement(chi, m.statistic));
    m.critical_1pct = boost::math::quantile(boost::math::complement(chi, 0.01));
    return m;
}

LineFit linear_fit(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::invalid_argument,
            "line fit needs two or more points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0.0, ErrorKind::degenerate_sample, "line fit with constant abscissa");
    LineFit f;
    f.n = x.size();
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (x.size() > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double e = y[i] - f.intercept - f.slope * x[i];
            rss += e * e;
        }
        f.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
    }
    return f;
}

void MomentAccumulator::add(double x) {
    MomentAccumulator one;
    one.n_ = 1;
    one.mean_ = x;
    merge(one);
}

void MomentAccumulator::merge(const MomentAccumulator& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
    const double n = na + nb;
    const double delta = o.mean_ - mean_;
    const double d2 = delta * delta;
    const double m2 = m2_ + o.m2_ + d2 * na * nb / n;
    const double m3 = m3_ + o.m3_ + d2 * delta * na * nb * (na - nb) / (n * n) +
                      3.0 * delta * (na * o.m2_ - nb * m2_) / n;
    const double m4 = m4_ + o.m4_ +
                      d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                      6.0 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) +
                      4.0 * delta * (na * o.m3_ - nb * m3_) / n;
    mean_ = mean_ + delta * nb / n;
    m2_ = m2;
    m3_ = m3;
    m4_ = m4;
    n_ += o.n_;
}

CentralSums MomentAccumulator::sums() const {
    CentralSums c;
    c.n = static_cast<std::size_t>(n_);
    c.mean = mean_;
    c.s2 = m2_;
    c.s3 = m3_;
    c.s4 = m4_;
    return c;
}

double MomentAccumulator::variance() const {
    return n_ >= 2 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

}  // namespace topofield::stats
