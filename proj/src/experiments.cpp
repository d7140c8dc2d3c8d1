#include "topofield/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "topofield/clt.hpp"
#include "topofield/error.hpp"
#include "topofield/percolation.hpp"
#include "topofield/perturbation.hpp"
#include "topofield/rng.hpp"
#include "topofield/toml.hpp"

namespace topofield {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Non-finite values become null in the document and "nan" in the CSV.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

Coord to_coord(const std::vector<double>& v) {
    Coord c{};
    for (std::size_t a = 0; a < v.size() && a < c.size(); ++a) c[a] = v[a];
    return c;
}

std::string coord_str(int dim, const Coord& x) {
    std::string s;
    for (int a = 0; a < dim; ++a) {
        if (a) s += ':';
        std::ostringstream os;
        os << x[a];
        s += os.str();
    }
    return s;
}

json table_json(const std::string& name, std::vector<std::string> header, std::vector<std::vector<json>> rows) {
    json t;
    t["name"] = name;
    t["header"] = std::move(header);
    t["rows"] = std::move(rows);
    return t;
}

EnsembleConfig ensemble_config(const RunConfig& c, const std::vector<double>& windows, int replicates,
                               std::vector<double> levels) {
    EnsembleConfig e;
    e.model = c.model;
    e.windows = windows;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    e.levels = levels;
    e.replicates = replicates;
    e.seed = c.seed;
    e.threads = c.threads;
    e.memory_limit_bytes = c.memory_limit_mb << 20;
    return e;
}

json levels_table(const EnsembleSummary& s) {
    std::vector<std::vector<json>> rows;
    for (const auto& w : s.windows)
        for (std::size_t l = 0; l < w.levels.size(); ++l) {
            const LevelStats& ls = w.levels[l];
            const NormalityEntry& ne = w.normality[l];
            const double nan = std::numeric_limits<double>::quiet_NaN();
            rows.push_back({w.side, ls.level, num(ls.mean), num(ls.variance), num(ls.k3), num(ls.k4),
                            num(ne.defined ? ne.result.skewness : nan),
                            num(ne.defined ? ne.result.excess_kurtosis : nan),
                            num(ne.defined ? ne.result.jarque_bera : nan), num(ne.defined ? ne.result.p_value : nan)});
        }
    return table_json("clt_levels.csv",
                      {"n", "u", "mean", "variance", "k3", "k4", "skewness", "excess_kurtosis", "jarque_bera", "p_value"},
                      std::move(rows));
}

json chentsov_row(const ChentsovResult& r) {
    return json::array({r.volume, r.lo, r.hi, r.n_big, num(r.mean_increment), num(r.moment), num(r.moment_identity),
                        num(r.ratio)});
}

const std::vector<std::string> chentsov_header{"volume", "u_lo", "u_hi", "n_big", "mean_increment",
                                               "moment", "moment_identity", "ratio"};

json run_clt(const RunConfig& c) {
    const CltParams& p = c.clt;
    std::vector<double> levels = c.levels.resolve();
    levels.insert(levels.end(), p.probe_levels.begin(), p.probe_levels.end());
    levels.insert(levels.end(), p.covariance_levels.begin(), p.covariance_levels.end());
    EnsembleConfig e = ensemble_config(c, p.windows, p.replicates, levels);
    e.homology_dim = p.homology_dim;
    e.interior_only = p.interior_only;
    e.levelwise = p.levelwise;
    const EnsembleSummary s = ensemble_run(e, config_hash(c));

    json tables = json::array();
    tables.push_back(levels_table(s));

    std::vector<std::vector<json>> den, var;
    json probes = json::array();
    for (double u : p.probe_levels) {
        for (const auto& d : mean_density(s, u))
            den.push_back({d.side, u, num(d.mu), num(d.se), num(d.ci.lo), num(d.ci.hi)});
        if (!s.variance_undefined && s.windows.size() >= 2) {
            const VarianceScaling v = variance_scaling(s, u);
            for (const auto& r : v.rows)
                var.push_back({u, r.side, num(r.ratio), num(r.jackknife.se), num(r.jackknife.ci.lo),
                               num(r.jackknife.ci.hi), v.stabilized});
            probes.push_back({{"u", u}, {"stabilized", v.stabilized}});
        }
    }
    tables.push_back(table_json("density.csv", {"n", "u", "mu", "se", "ci_lo", "ci_hi"}, std::move(den)));
    if (!var.empty())
        tables.push_back(table_json("variance_scaling.csv",
                                    {"u", "n", "ratio", "jackknife_se", "ci_lo", "ci_hi", "stabilized"},
                                    std::move(var)));

    std::vector<std::vector<json>> cov, che;
    if (!s.variance_undefined) {
        std::vector<double> cl = p.covariance_levels;
        std::sort(cl.begin(), cl.end());
        for (std::size_t w = 0; w < s.windows.size(); ++w) {
            const Eigen::MatrixXd m = multilevel_covariance(s, w, cl);
            for (std::size_t a = 0; a < cl.size(); ++a)
                for (std::size_t b = 0; b < cl.size(); ++b)
                    cov.push_back({s.windows[w].side, cl[a], cl[b],
                                   num(m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)))});
            if (!p.levelwise)
                for (std::size_t a = 0; a + 1 < cl.size(); ++a)
                    che.push_back(chentsov_row(chentsov_moment(s, w, cl[a], cl[a + 1])));
        }
        tables.push_back(table_json("covariance.csv", {"n", "u_a", "u_b", "covariance"}, std::move(cov)));
        if (!p.levelwise) tables.push_back(table_json("chentsov.csv", chentsov_header, std::move(che)));
    }
    json summary = {{"replicates", s.replicates}, {"variance_undefined", s.variance_undefined}, {"probes", probes}};
    return {{"summary", summary}, {"tables", tables}};
}

json run_fclt(const RunConfig& c) {
    const TightnessParams& p = c.fclt;
    std::vector<double> levels = c.levels.resolve();
    for (const auto& [a, b] : p.intervals) {
        levels.push_back(a);
        levels.push_back(b);
    }
    EnsembleConfig e = ensemble_config(c, p.windows, p.replicates, levels);
    const EnsembleSummary s = ensemble_run(e, config_hash(c));

    std::vector<std::vector<json>> che, ident;
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    std::uint64_t bad_identity = 0, bad_monotone = 0;
    for (std::size_t w = 0; w < s.windows.size(); ++w) {
        for (const auto& [lo, hi] : p.intervals) {
            const ChentsovResult r = chentsov_moment(s, w, lo, hi);
            che.push_back(chentsov_row(r));
            if (r.n_big && std::isfinite(r.ratio) && r.ratio > 0.0) {
                rmin = std::min(rmin, r.ratio);
                rmax = std::max(rmax, r.ratio);
            }
        }
        std::uint64_t id = 0, mono = 0;
        for (const auto& [rep, r] : s.data.samples[w]) {
            for (std::size_t l = 0; l < r.beta.size(); ++l)
                if (r.beta[l] != r.plus[l] - r.minus[l]) ++id;
            for (std::size_t l = 1; l < r.beta.size(); ++l)
                if (r.plus[l] > r.plus[l - 1] || r.minus[l] > r.minus[l - 1]) ++mono;
        }
        bad_identity += id;
        bad_monotone += mono;
        ident.push_back({s.windows[w].side, s.windows[w].replicates, id, mono});
    }
    json tables = json::array();
    tables.push_back(levels_table(s));
    tables.push_back(table_json("chentsov.csv", chentsov_header, std::move(che)));
    tables.push_back(table_json("identity.csv", {"n", "replicates", "identity_violations", "monotone_violations"},
                                std::move(ident)));
    json summary = {{"ratio_min", num(rmin)},
                    {"ratio_max", num(rmax)},
                    {"ratio_spread", num(rmax > 0.0 ? rmax / rmin : std::numeric_limits<double>::quiet_NaN())},
                    {"identity_violations", bad_identity},
                    {"monotone_violations", bad_monotone}};
    return {{"summary", summary}, {"tables", tables}};
}

json run_resample(const RunConfig& c, const FieldModel& m, const RngStream& root) {
    const ResampleParams& p = c.resample;
    const int d = m.dim();
    ChangeSetup s;
    s.window = Box::cube(d, -0.5 * p.window, 0.5 * p.window);
    s.i = to_coord(p.i);
    for (const auto& t : p.targets) s.targets.push_back(to_coord(t));
    s.u_minus = p.u_minus;
    s.u_plus = p.u_plus;
    s.replicates = p.replicates;
    s.interior_only = p.interior_only;
    s.threads = c.threads;
    const ChangeResult r = topology_change_probability(m, s, root);

    std::vector<std::vector<json>> rec, est;
    for (const auto& x : r.records)
        rec.push_back({x.rep, coord_str(d, x.i), coord_str(d, x.j), x.dist, x.u_minus, x.u_plus, x.before, x.after,
                       x.changed ? 1 : 0});
    std::uint64_t guaranteed_violations = 0;
    for (const auto& e : r.estimates) {
        est.push_back({coord_str(d, e.j), e.separation, e.changes, e.n, e.estimate, e.ci.lo, e.ci.hi, e.guaranteed,
                       e.guaranteed_changes});
        guaranteed_violations += e.guaranteed_changes;
    }
    json tables = json::array();
    tables.push_back(table_json("resample_records.csv",
                                {"rep", "i", "j", "dist", "u_minus", "u_plus", "before", "after", "changed"},
                                std::move(rec)));
    tables.push_back(table_json("change_probability.csv",
                                {"j", "separation", "changes", "n", "estimate", "ci_lo", "ci_hi", "guaranteed",
                                 "guaranteed_changes"},
                                std::move(est)));
    json summary = {{"kernel_reach", kernel_reach(m.kernel(), m.spacing())},
                    {"guaranteed_zero_violations", guaranteed_violations}};
    return {{"summary", summary}, {"tables", tables}};
}

json run_stabilize(const RunConfig& c, const FieldModel& m, const RngStream& root) {
    const StabilizeParams& p = c.stabilize;
    StabilizationSetup s;
    s.window = Box::cube(m.dim(), -0.5 * p.window, 0.5 * p.window);
    s.radii = p.radii;
    s.u_minus = p.u_minus;
    s.u_plus = p.u_plus;
    s.replicates = p.replicates;
    s.interior_only = p.interior_only;
    s.threads = c.threads;
    const StabilizationResult r = stabilization_radius(m, s, root);
    std::vector<std::vector<json>> samp, tail;
    for (const auto& x : r.samples) samp.push_back({x.rep, x.radius, x.censored ? 1 : 0});
    for (std::size_t k = 0; k < p.radii.size(); ++k) tail.push_back({p.radii[k], r.tail[k]});
    json tables = json::array();
    tables.push_back(table_json("stabilization.csv", {"rep", "radius", "censored"}, std::move(samp)));
    tables.push_back(table_json("stabilization_tail.csv", {"r", "tail"}, std::move(tail)));
    json summary = {{"censored_fraction", r.censored_fraction}, {"slope", num(r.slope)}, {"fitted", r.fitted}};
    return {{"summary", summary}, {"tables", tables}};
}

json run_kacrice(const RunConfig& c, const FieldModel& m, const RngStream& root) {
    const KacRiceParams& p = c.kacrice;
    const Box q = Box::cube(m.dim(), 0.0, p.window);
    std::vector<std::pair<double, double>> bands;
    for (double w : p.widths) bands.emplace_back(p.lo, p.lo + w);
    const CriticalCounts cc = critical_counts(m, q, bands, p.replicates, root, c.threads);
    std::vector<std::vector<json>> rows;
    for (std::size_t k = 0; k < bands.size(); ++k)
        rows.push_back({bands[k].first, bands[k].second, num(cc.mean[k]), num(cc.second[k]), num(cc.se[k])});
    std::vector<std::vector<json>> ratios;
    for (std::size_t a = 0; a < bands.size(); ++a)
        for (std::size_t b = 0; b < bands.size(); ++b) {
            const double wa = p.widths[a], wb = p.widths[b];
            if (std::abs(wb - 2.0 * wa) <= 1e-9 * wb && cc.mean[a] > 0.0)
                ratios.push_back({wa, wb, num(cc.mean[b] / cc.mean[a])});
        }
    json tables = json::array();
    tables.push_back(table_json("critical_counts.csv", {"u_lo", "u_hi", "mean", "second_moment", "se"}, std::move(rows)));
    tables.push_back(table_json("critical_ratio.csv", {"width", "double_width", "ratio"}, std::move(ratios)));
    json summary = {{"replicates", cc.replicates}, {"volume", q.volume()}};
    return {{"summary", summary}, {"tables", tables}};
}

json run_perco(const RunConfig& c, const FieldModel& m, const RngStream& root) {
    const PercoParams& p = c.perco;
    TailOptions o;
    o.fit_min_radius = p.fit_min_radius;
    o.min_exceed = static_cast<std::uint64_t>(p.min_exceed);
    o.threads = c.threads;
    const Box w = Box::cube(m.dim(), -0.5 * p.window, 0.5 * p.window);
    const TailCurve t = diameter_tail(m, w, p.level, p.radii, p.replicates, root, o);
    std::vector<std::vector<json>> rows;
    bool monotone = true;
    for (std::size_t k = 0; k < t.radii.size(); ++k) {
        if (k > 0 && t.prob[k] > t.prob[k - 1]) monotone = false;
        rows.push_back({t.radii[k], t.exceed[k], t.prob[k], t.ci[k].lo, t.ci[k].hi});
    }
    json tables = json::array();
    tables.push_back(table_json("diameter_tail.csv", {"r", "exceed", "tail", "ci_lo", "ci_hi"}, std::move(rows)));
    json summary = {{"level", t.level},           {"replicates", t.replicates},   {"boundary_hits", t.boundary_hits},
                    {"max_diameter", t.max_diameter}, {"slope", num(t.slope)},    {"slope_se", num(t.slope_se)},
                    {"intercept", num(t.intercept)},  {"fitted", t.fitted},       {"fit_lo", t.fit_lo},
                    {"fit_hi", t.fit_hi},         {"monotone", monotone}};
    return {{"summary", summary}, {"tables", tables}};
}

json run_sigma(const RunConfig& c, const FieldModel& m, const RngStream& root) {
    const SigmaParams& p = c.sigma;
    SigmaSetup s;
    s.window = Box::cube(m.dim(), -0.5 * p.window, 0.5 * p.window);
    s.box_side = p.box_side;
    s.u = p.level;
    s.outer = p.outer;
    s.inner = p.inner;
    s.shifts = p.shifts;
    s.interior_only = p.interior_only;
    s.threads = c.threads;
    const SigmaResult r = sigma_conditional(m, s, root);
    std::vector<std::vector<json>> rows;
    for (std::size_t k = 0; k < r.shifts.size(); ++k) rows.push_back({r.shifts[k], num(r.curve[k]), num(r.curve_se[k])});
    json tables = json::array();
    tables.push_back(table_json("sigma_curve.csv", {"s", "mean_g", "se"}, std::move(rows)));
    json summary = {{"sigma2", num(r.sigma2)},
                    {"sigma2_raw", num(r.sigma2_raw)},
                    {"jackknife_se", num(r.jackknife.se)},
                    {"ci_lo", num(r.jackknife.ci.lo)},
                    {"ci_hi", num(r.jackknife.ci.hi)},
                    {"mean_g", num(r.mean_g)},
                    {"mean_g_se", num(r.mean_g_se)},
                    {"box_cells", r.box_cells}};
    return {{"summary", summary}, {"tables", tables}};
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string cell(const json& v) {
    if (v.is_null()) return "nan";
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) {
        char buf[64];
        const auto r = std::to_chars(buf, buf + sizeof buf, v.get<double>());
        return std::string(buf, r.ptr);
    }
    return v.dump();
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    require(static_cast<bool>(os), ErrorKind::invalid_argument, "cannot write " + p.string());
    os << text;
    require(static_cast<bool>(os), ErrorKind::resource, "write failed for " + p.string());
}

void check_memory(const RunConfig& c) {
    const std::uint64_t need = estimate_bytes(c);
    const std::uint64_t limit = c.memory_limit_mb << 20;
    if (need > limit) throw ResourceError(need, limit, "estimated peak memory exceeds memory_limit_mb");
}

}  // namespace

json run_experiment(const RunConfig& c) {
    check_memory(c);
    const FieldModel m(c.model);
    const RngStream root(c.seed, {static_cast<std::uint64_t>(c.experiment) + 1});
    json r;
    switch (c.experiment) {
        case Experiment::clt: r = run_clt(c); break;
        case Experiment::fclt_tightness: r = run_fclt(c); break;
        case Experiment::resample: r = run_resample(c, m, root); break;
        case Experiment::stabilize: r = run_stabilize(c, m, root); break;
        case Experiment::kacrice: r = run_kacrice(c, m, root); break;
        case Experiment::perco_tail: r = run_perco(c, m, root); break;
        case Experiment::sigma: r = run_sigma(c, m, root); break;
    }
    r["experiment"] = to_string(c.experiment);
    r["config_hash"] = config_hash(c);
    r["seed"] = c.seed;
    r["version"] = artifact_version;
    r["truncation_bias"] = m.kernel().truncation_bias();
    return r;
}

std::vector<Table> tables_from_results(const json& results) {
    std::vector<Table> out;
    for (const auto& t : results.at("tables")) {
        Table x;
        x.name = t.at("name").get<std::string>();
        x.header = t.at("header").get<std::vector<std::string>>();
        for (const auto& row : t.at("rows")) x.rows.push_back(row.get<std::vector<json>>());
        out.push_back(std::move(x));
    }
    return out;
}

void write_table_csv(const Table& t, const std::string& hash, const std::string& path) {
    std::ostringstream os;
    os << "# config_hash=" << hash << '\n';
    for (std::size_t k = 0; k < t.header.size(); ++k) os << (k ? "," : "") << t.header[k];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << cell(row[k]);
        os << '\n';
    }
    write_text(path, os.str());
}

json manifest_json(const RunManifest& m) {
    json outs = json::array();
    for (const auto& o : m.outputs) outs.push_back({{"file", o.file}, {"sha256", o.sha256}});
    return {{"config_hash", m.config_hash},
            {"version", m.version},
            {"seed", m.seed},
            {"rng", {{"master_seed", m.seed}, {"algorithm_id", m.algorithm_id}}},
            {"started", m.started},
            {"finished", m.finished},
            {"config", m.config},
            {"outputs", outs}};
}

RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    m.config_hash = j.at("config_hash").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.seed = j.at("rng").at("master_seed").get<std::uint64_t>();
    m.algorithm_id = j.at("rng").at("algorithm_id").get<std::string>();
    m.started = j.value("started", "");
    m.finished = j.value("finished", "");
    m.config = j.at("config").get<std::string>();
    for (const auto& o : j.at("outputs"))
        m.outputs.push_back({o.at("file").get<std::string>(), o.at("sha256").get<std::string>()});
    return m;
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream is(path);
    require(static_cast<bool>(is), ErrorKind::invalid_argument, "cannot read manifest " + path);
    json j;
    try {
        j = json::parse(is);
        return manifest_from_json(j);
    } catch (const json::exception& e) {
        fail(ErrorKind::config, "malformed manifest " + path + ": " + e.what());
    }
}

RunConfig manifest_config(const RunManifest& m) {
    RunConfig c = parse_config(m.config);
    c.seed = m.seed;
    require(config_hash(c) == m.config_hash, ErrorKind::config, "manifest config does not match its hash");
    return c;
}

RunManifest run(const RunConfig& c) {
    RunManifest m;
    m.config_hash = config_hash(c);
    m.seed = c.seed;
    m.algorithm_id = rng_algorithm_id;
    // Threads and output location do not affect outputs, so they stay out
    // of the stored config and a re-run elsewhere reproduces it byte for byte.
    json portable = to_json(c);
    portable.erase("threads");
    portable.erase("output");
    m.config = toml::dump(portable);
    m.started = utc_now();

    const fs::path out = c.output.empty() ? fs::path("out") : fs::path(c.output);
    if (fs::exists(out)) {
        const bool replaceable =
            fs::is_directory(out) && (fs::is_empty(out) || fs::exists(out / "manifest.json"));
        require(replaceable, ErrorKind::invalid_argument,
                "output " + out.string() + " exists and is not a previous run directory");
    }
    // Compute everything before touching the file system.
    const json results = run_experiment(c);

    fs::path stage = out;
    stage += ".partial";
    fs::remove_all(stage);
    fs::create_directories(stage);
    try {
        const std::string rj = results.dump(1) + "\n";
        write_text(stage / "results.json", rj);
        m.outputs.push_back({"results.json", sha256_hex(rj)});
        write_text(stage / "config.toml", m.config);
        m.outputs.push_back({"config.toml", sha256_hex(m.config)});
        for (const Table& t : tables_from_results(results)) {
            write_table_csv(t, m.config_hash, (stage / t.name).string());
            m.outputs.push_back({t.name, sha256_file((stage / t.name).string())});
        }
        m.finished = utc_now();
        write_text(stage / "manifest.json", manifest_json(m).dump(2) + "\n");
        if (fs::exists(out)) fs::remove_all(out);
        fs::rename(stage, out);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(stage, ec);
        throw;
    }
    return m;
}

std::vector<std::string> report(const std::string& manifest_path, const std::string& out_dir) {
    const RunManifest m = read_manifest(manifest_path);
    const fs::path dir = fs::path(manifest_path).parent_path();
    const std::string rpath = (dir / "results.json").string();
    const std::string digest = sha256_file(rpath);
    bool listed = false;
    for (const auto& o : m.outputs)
        if (o.file == "results.json") {
            listed = true;
            require(o.sha256 == digest, ErrorKind::config, "results.json does not match the manifest checksum");
        }
    require(listed, ErrorKind::config, "manifest lists no results.json");
    std::ifstream is(rpath);
    const json results = json::parse(is);
    const fs::path out = out_dir.empty() ? dir : fs::path(out_dir);
    fs::create_directories(out);
    std::vector<std::string> files;
    for (const Table& t : tables_from_results(results)) {
        const fs::path p = out / t.name;
        write_table_csv(t, m.config_hash, p.string());
        files.push_back(p.string());
    }
    return files;
}

double estimate_seconds(const RunConfig& c) {
    // Measured single-core cost of the realize/filtration/persistence
    // pipeline per vertex, with a factor per extra field or label pass.
    constexpr double per_vertex = 3e-7;
    const int d = c.model.kernel.dim;
    const double h = c.model.spacing;
    auto vertices = [&](double n) { return std::pow(n / h + 1.0, d); };
    const double t = static_cast<double>(std::max(1, c.threads));
    double work = 0.0;
    switch (c.experiment) {
        case Experiment::clt:
            for (double n : c.clt.windows) work += vertices(n) * c.clt.replicates;
            break;
        case Experiment::fclt_tightness:
            for (double n : c.fclt.windows) work += vertices(n) * c.fclt.replicates;
            break;
        case Experiment::resample:
            work = vertices(c.resample.window) * c.resample.replicates * (1.0 + c.resample.targets.size());
            break;
        case Experiment::stabilize:
            work = vertices(c.stabilize.window) * c.stabilize.replicates * (1.0 + 2.0 * d * c.stabilize.radii.size());
            break;
        case Experiment::kacrice: work = vertices(c.kacrice.window + 2.0) * c.kacrice.replicates * (1.0 + d); break;
        case Experiment::perco_tail: work = vertices(c.perco.window) * c.perco.replicates * 0.5; break;
        case Experiment::sigma:
            work = vertices(c.sigma.window) * c.sigma.outer * (1.0 + c.sigma.inner + c.sigma.shifts.size());
            break;
    }
    return work * per_vertex / t;
}

std::string dry_run_text(const RunConfig& c) {
    std::ostringstream os;
    os << "# resolved config (hash " << config_hash(c) << ")\n" << serialize(c);
    os << "# estimated peak memory: " << estimate_bytes(c) << " bytes (limit " << (c.memory_limit_mb << 20)
       << ")\n";
    os << "# estimated time: " << std::fixed << std::setprecision(1) << estimate_seconds(c) << " s on "
       << c.threads << " thread(s)\n";
    return os.str();
}

}  // namespace topofield
