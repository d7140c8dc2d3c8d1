#include "topofield/clt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "topofield/error.hpp"
#include "topofield/parallel.hpp"

namespace topofield {

namespace {

void check_config(const EnsembleConfig& c) {
    require(c.replicates >= 1, ErrorKind::invalid_argument, "replicates must be >= 1");
    require(!c.windows.empty(), ErrorKind::invalid_argument, "no window sizes");
    require(!c.levels.empty(), ErrorKind::invalid_argument, "no levels");
    require(std::is_sorted(c.levels.begin(), c.levels.end()), ErrorKind::invalid_argument,
            "levels must be sorted ascending");
    for (double n : c.windows) require(n > 0.0, ErrorKind::invalid_argument, "window sizes must be positive");
    require(!c.levelwise || c.homology_dim == 0, ErrorKind::invalid_argument,
            "levelwise counting covers homology dimension 0 only");
    require(c.homology_dim >= 0 && c.homology_dim <= c.model.kernel.dim, ErrorKind::invalid_argument,
            "homology dimension must be in 0..d");
}

}  // namespace

RngStream replicate_stream(std::uint64_t seed, std::size_t window, std::uint64_t rep) {
    return make_stream(seed, {static_cast<std::uint64_t>(window), rep});
}

ReplicateSample run_replicate(const FieldModel& model, const EnsembleConfig& config, std::size_t window,
                              std::uint64_t rep) {
    const Box w = Box::cube(model.dim(), 0.0, config.windows[window]);
    const Realization r = model.realize(w, replicate_stream(config.seed, window, rep));
    if (config.levelwise) {
        ReplicateSample s;
        for (double u : config.levels) s.beta.push_back(count_components(r.field, u, config.interior_only));
        return s;
    }
    const CubicalFiltration f(r.field);
    const PersistenceDiagram d = config.homology_dim == 0 ? zero_dim_persistence(f)
                                                          : reduce_persistence(f, config.homology_dim);
    const BettiPath path = betti_curve(d, config.levels, config.homology_dim, config.interior_only);
    const MonotoneSplit split = split_monotone(path);
    return {path.values, split.plus, split.minus};
}

EnsembleData ensemble_samples(const EnsembleConfig& config, std::uint64_t first, std::uint64_t last) {
    check_config(config);
    require(first <= last, ErrorKind::invalid_argument, "empty replicate range");
    const FieldModel model(config.model);
    std::uint64_t peak = 0;
    for (double n : config.windows)
        peak = std::max(peak, model.estimated_bytes(Box::cube(model.dim(), 0.0, n)));
    const auto threads = static_cast<std::uint64_t>(std::max(1, config.threads));
    const std::uint64_t need = peak * threads +
                               (last - first) * config.windows.size() * config.levels.size() * 3 * 8;
    if (need > config.memory_limit_bytes)
        throw ResourceError(need, config.memory_limit_bytes, "ensemble does not fit in memory");

    EnsembleData data;
    data.windows = config.windows;
    data.levels = config.levels;
    data.dim = model.dim();
    data.samples.resize(config.windows.size());
    const std::size_t nrep = last - first;
    for (std::size_t w = 0; w < config.windows.size(); ++w) {
        std::vector<ReplicateSample> out(nrep);
        parallel_for(nrep, config.threads, [&](std::size_t k) { out[k] = run_replicate(model, config, w, first + k); });
        for (std::size_t k = 0; k < nrep; ++k) data.samples[w].emplace(first + k, std::move(out[k]));
    }
    return data;
}

EnsembleData merge(const EnsembleData& a, const EnsembleData& b) {
    require(a.windows == b.windows && a.levels == b.levels && a.dim == b.dim, ErrorKind::invalid_argument,
            "cannot merge ensembles over different windows or levels");
    EnsembleData out = a;
    for (std::size_t w = 0; w < b.samples.size(); ++w)
        for (const auto& [rep, s] : b.samples[w]) {
            const bool fresh = out.samples[w].emplace(rep, s).second;
            require(fresh, ErrorKind::invalid_argument, "replicate id present in both ensembles");
        }
    return out;
}

EnsembleSummary summarize(const EnsembleData& data, const std::string& config_hash, std::uint64_t seed) {
    EnsembleSummary s;
    s.config_hash = config_hash;
    s.seed = seed;
    s.dim = data.dim;
    s.levels = data.levels;
    s.data = data;
    const std::size_t nl = data.levels.size();
    s.replicates = data.samples.empty() ? 0 : data.samples.front().size();
    s.variance_undefined = s.replicates < 2;
    for (std::size_t w = 0; w < data.windows.size(); ++w) {
        WindowSummary ws;
        ws.side = data.windows[w];
        ws.volume = std::pow(ws.side, data.dim);
        ws.replicates = data.samples[w].size();
        std::vector<std::vector<double>> cols(nl);
        for (const auto& [rep, r] : data.samples[w])
            for (std::size_t l = 0; l < nl; ++l) cols[l].push_back(static_cast<double>(r.beta[l]));
        for (std::size_t l = 0; l < nl; ++l) {
            LevelStats ls;
            ls.level = data.levels[l];
            const auto c = stats::central_sums(cols[l]);
            ls.mean = c.mean;
            const double nan = std::numeric_limits<double>::quiet_NaN();
            ls.variance = c.n >= 2 ? stats::k_statistic(c, 2) : nan;
            ls.k3 = c.n >= 3 ? stats::k_statistic(c, 3) : nan;
            ls.k4 = c.n >= 4 ? stats::k_statistic(c, 4) : nan;
            ws.levels.push_back(ls);
            NormalityEntry ne;
            ne.level = ls.level;
            if (c.n >= 20 && c.s2 > 0.0) {
                ne.defined = true;
                ne.result = stats::normality_test(cols[l]);
            }
            ws.normality.push_back(ne);
        }
        if (ws.replicates >= 2) {
            Eigen::MatrixXd m(static_cast<Eigen::Index>(ws.replicates), static_cast<Eigen::Index>(nl));
            for (std::size_t l = 0; l < nl; ++l)
                for (std::size_t r = 0; r < cols[l].size(); ++r)
                    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) = cols[l][r] / std::sqrt(ws.volume);
            ws.sigma = stats::sample_covariance(m);
        }
        s.windows.push_back(std::move(ws));
    }
    return s;
}

EnsembleSummary ensemble_run(const EnsembleConfig& config, const std::string& config_hash) {
    return summarize(ensemble_samples(config, 0, static_cast<std::uint64_t>(config.replicates)), config_hash,
                     config.seed);
}

double cumulant(const std::vector<double>& samples, int k) {
    require(k >= 1 && k <= 4, ErrorKind::invalid_argument, "cumulant order must be 1..4");
    require(samples.size() >= static_cast<std::size_t>(k), ErrorKind::invalid_argument,
            "insufficient samples for the requested cumulant");
    return stats::k_statistic(samples, k);
}

std::size_t level_index(const EnsembleSummary& s, double u) {
    for (std::size_t l = 0; l < s.levels.size(); ++l)
        if (std::abs(s.levels[l] - u) <= 1e-12 * std::max(1.0, std::abs(u))) return l;
    fail(ErrorKind::invalid_argument, "level " + std::to_string(u) + " is not on the level grid");
}

namespace {

std::vector<double> column(const EnsembleSummary& s, std::size_t w, std::size_t l) {
    std::vector<double> out;
    out.reserve(s.data.samples[w].size());
    for (const auto& [rep, r] : s.data.samples[w]) out.push_back(static_cast<double>(r.beta[l]));
    return out;
}

}  // namespace

std::vector<double> standardized(const EnsembleSummary& s, std::size_t window, std::size_t level) {
    auto x = column(s, window, level);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    const double scale = 1.0 / std::sqrt(s.windows[window].volume);
    for (double& v : x) v = (v - mean) * scale;
    return x;
}

std::vector<DensityEstimate> mean_density(const EnsembleSummary& s, double u) {
    const std::size_t l = level_index(s, u);
    std::vector<DensityEstimate> out;
    for (std::size_t w = 0; w < s.windows.size(); ++w) {
        const auto& ws = s.windows[w];
        DensityEstimate e;
        e.side = ws.side;
        e.mu = ws.levels[l].mean / ws.volume;
        e.se = ws.replicates >= 2 ? std::sqrt(ws.levels[l].variance / static_cast<double>(ws.replicates)) / ws.volume
                                  : std::numeric_limits<double>::quiet_NaN();
        e.ci = {e.mu - 1.959963984540054 * e.se, e.mu + 1.959963984540054 * e.se};
        out.push_back(e);
    }
    return out;
}

VarianceScaling variance_scaling(const EnsembleSummary& s, double u) {
    require(s.windows.size() >= 2, ErrorKind::invalid_argument, "variance scaling needs >= 2 window sizes");
    require(!s.variance_undefined, ErrorKind::invalid_argument, "variance undefined with one replicate");
    const std::size_t l = level_index(s, u);
    VarianceScaling out;
    out.level = u;
    for (std::size_t w = 0; w < s.windows.size(); ++w) {
        const auto& ws = s.windows[w];
        VarianceRow row;
        row.side = ws.side;
        row.ratio = ws.levels[l].variance / ws.volume;
        const auto x = column(s, w, l);
        const double vol = ws.volume;
        row.jackknife = stats::jackknife(x, [vol](std::span<const double> y) { return stats::k_statistic(y, 2) / vol; });
        out.rows.push_back(row);
    }
    const double a = out.rows[out.rows.size() - 2].ratio, b = out.rows.back().ratio;
    out.stabilized = a > 0.0 && std::abs(b - a) <= 0.25 * a;
    return out;
}

Eigen::MatrixXd level_samples(const EnsembleSummary& s, std::size_t window, const std::vector<double>& levels) {
    require(!levels.empty(), ErrorKind::invalid_argument, "no levels");
    const auto n = static_cast<Eigen::Index>(s.data.samples[window].size());
    Eigen::MatrixXd m(n, static_cast<Eigen::Index>(levels.size()));
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const auto x = standardized(s, window, level_index(s, levels[k]));
        for (Eigen::Index r = 0; r < n; ++r) m(r, static_cast<Eigen::Index>(k)) = x[static_cast<std::size_t>(r)];
    }
    return m;
}

Eigen::MatrixXd multilevel_covariance(const EnsembleSummary& s, std::size_t window,
                                      const std::vector<double>& levels) {
    return stats::sample_covariance(level_samples(s, window, levels));
}

ChentsovResult chentsov_from_increments(const std::vector<double>& x, double lo, double hi, double volume) {
    require(hi >= lo, ErrorKind::invalid_argument, "interval must satisfy hi >= lo");
    ChentsovResult c;
    c.lo = lo;
    c.hi = hi;
    c.volume = volume;
    const double width = hi - lo;
    c.n_big = width >= std::pow(volume, -2.0 / 3.0);
    if (x.empty()) return c;
    const auto p = stats::plug_in_moments(x);
    c.mean_increment = p.mean;
    c.moment = p.m4;
    c.moment_identity = 3.0 * p.m2 * p.m2 + p.kappa4_raw;
    c.ratio = width > 0.0 ? c.moment / (volume * volume * std::pow(width, 1.25)) : 0.0;
    return c;
}

ChentsovResult chentsov_moment(const std::vector<BettiPath>& paths, double lo, double hi, double volume) {
    std::vector<double> x;
    for (const auto& p : paths) x.push_back(static_cast<double>(betti_plus_at(p, lo) - betti_plus_at(p, hi)));
    return chentsov_from_increments(x, lo, hi, volume);
}

ChentsovResult chentsov_moment(const EnsembleSummary& s, std::size_t window, double lo, double hi) {
    const std::size_t a = level_index(s, lo), b = level_index(s, hi);
    for (const auto& [rep, r] : s.data.samples[window])
        require(!r.plus.empty(), ErrorKind::invalid_argument, "ensemble was run without β⁺ samples");
    std::vector<double> x;
    for (const auto& [rep, r] : s.data.samples[window]) x.push_back(static_cast<double>(r.plus[a] - r.plus[b]));
    return chentsov_from_increments(x, lo, hi, s.windows[window].volume);
}

CriticalCounts critical_counts(const FieldModel& model, const Box& q,
                               const std::vector<std::pair<double, double>>& bands, int replicates,
                               const RngStream& root, int threads) {
    require(replicates >= 1, ErrorKind::invalid_argument, "replicates must be >= 1");
    require(!bands.empty(), ErrorKind::invalid_argument, "no bands");
    double lo = bands.front().first, hi = bands.front().second;
    for (const auto& [a, b] : bands) {
        require(b >= a, ErrorKind::invalid_argument, "band must satisfy hi >= lo");
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    // One spacing of margin so every cell meeting Q has its gradient samples.
    Box outer = q;
    for (int a = 0; a < q.dim; ++a) {
        outer.lo[a] -= model.spacing();
        outer.hi[a] += model.spacing();
    }
    const std::size_t nb = bands.size();
    std::vector<std::vector<double>> counts(static_cast<std::size_t>(replicates), std::vector<double>(nb, 0.0));
    parallel_for(counts.size(), threads, [&](std::size_t r) {
        const Realization z = model.realize(outer, root.child(r));
        const auto grad = model.gradient(z, outer);
        for (const auto& p : locate_critical_points(z.field, grad, q, lo, hi))
            for (std::size_t b = 0; b < nb; ++b)
                if (p.value >= bands[b].first && p.value < bands[b].second) counts[r][b] += 1.0;
    });
    CriticalCounts out;
    out.bands = bands;
    out.replicates = static_cast<std::uint64_t>(replicates);
    for (std::size_t b = 0; b < nb; ++b) {
        std::vector<double> x(counts.size()), x2(counts.size());
        for (std::size_t r = 0; r < counts.size(); ++r) {
            x[r] = counts[r][b];
            x2[r] = x[r] * x[r];
        }
        const double n = static_cast<double>(x.size());
        out.mean.push_back(std::accumulate(x.begin(), x.end(), 0.0) / n);
        out.second.push_back(std::accumulate(x2.begin(), x2.end(), 0.0) / n);
        out.se.push_back(x.size() >= 2 ? std::sqrt(stats::k_statistic(x, 2) / n) : 0.0);
    }
    return out;
}

std::vector<LevelMoment> level_moment_diagnostic(const FieldModel& model, const Box& q, double lo,
                                                 const std::vector<double>& widths, int replicates,
                                                 const RngStream& root, int threads) {
    std::vector<std::pair<double, double>> bands;
    for (double w : widths) {
        require(w > 0.0, ErrorKind::invalid_argument, "band width must be positive");
        bands.emplace_back(lo, lo + w);
    }
    const CriticalCounts c = critical_counts(model, q, bands, replicates, root, threads);
    std::vector<LevelMoment> out;
    for (std::size_t b = 0; b < widths.size(); ++b) {
        const double norm = std::pow(widths[b], 31.0 / 32.0);
        out.push_back({widths[b], c.mean[b] / norm, c.second[b] / norm, c.mean[b]});
    }
    return out;
}

namespace {

std::ofstream open_csv(const std::string& path, const std::string& hash) {
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorKind::invalid_argument, "cannot write " + path);
    os.precision(17);
    os << "# config_hash=" << hash << "\n";
    return os;
}

}  // namespace

void write_levels_csv(const EnsembleSummary& s, const std::string& path) {
    auto os = open_csv(path, s.config_hash);
    os << "n,u,mean,variance,k3,k4,skewness,excess_kurtosis,jarque_bera,p_value\n";
    for (const auto& w : s.windows)
        for (std::size_t l = 0; l < w.levels.size(); ++l) {
            const auto& ls = w.levels[l];
            const auto& ne = w.normality[l];
            os << w.side << ',' << ls.level << ',' << ls.mean << ',' << ls.variance << ',' << ls.k3 << ',' << ls.k4;
            if (ne.defined)
                os << ',' << ne.result.skewness << ',' << ne.result.excess_kurtosis << ',' << ne.result.jarque_bera
                   << ',' << ne.result.p_value << "\n";
            else
                os << ",nan,nan,nan,nan\n";
        }
}

void write_variance_csv(const std::vector<VarianceScaling>& rows, const std::string& hash, const std::string& path) {
    auto os = open_csv(path, hash);
    os << "u,n,ratio,jackknife_se,ci_lo,ci_hi,stabilized\n";
    for (const auto& v : rows)
        for (const auto& r : v.rows)
            os << v.level << ',' << r.side << ',' << r.ratio << ',' << r.jackknife.se << ',' << r.jackknife.ci.lo << ','
               << r.jackknife.ci.hi << ',' << (v.stabilized ? 1 : 0) << "\n";
}

void write_chentsov_csv(const std::vector<ChentsovResult>& rows, const std::string& hash, const std::string& path) {
    auto os = open_csv(path, hash);
    os << "volume,u_lo,u_hi,n_big,mean_increment,moment,moment_identity,ratio\n";
    for (const auto& c : rows)
        os << c.volume << ',' << c.lo << ',' << c.hi << ',' << (c.n_big ? 1 : 0) << ',' << c.mean_increment << ','
           << c.moment << ',' << c.moment_identity << ',' << c.ratio << "\n";
}

}  // namespace topofield
