#include "topofield/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "topofield/toml.hpp"

namespace topofield {

using nlohmann::json;

const char* to_string(Experiment e) {
    switch (e) {
        case Experiment::clt: return "clt";
        case Experiment::fclt_tightness: return "fclt-tightness";
        case Experiment::resample: return "resample";
        case Experiment::stabilize: return "stabilize";
        case Experiment::kacrice: return "kacrice";
        case Experiment::perco_tail: return "perco-tail";
        case Experiment::sigma: return "sigma";
    }
    return "clt";
}

Experiment parse_experiment(const std::string& name) {
    for (auto e : {Experiment::clt, Experiment::fclt_tightness, Experiment::resample, Experiment::stabilize,
                   Experiment::kacrice, Experiment::perco_tail, Experiment::sigma})
        if (name == to_string(e)) return e;
    fail(ErrorKind::config, "unknown experiment '" + name + "'");
}

std::vector<double> LevelGrid::resolve() const {
    std::vector<double> out;
    if (!values.empty()) {
        out = values;
    } else {
        for (int k = 0; k < count; ++k)
            out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (count - 1));
    }
    out.insert(out.end(), extra.begin(), extra.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

std::string msg_list(const std::vector<ConfigIssue>& issues) {
    std::string m = "invalid config:";
    for (const auto& i : issues) m += "\n  " + i.path + ": " + i.message;
    return m;
}

const char* section_of(Experiment e) {
    switch (e) {
        case Experiment::clt: return "clt";
        case Experiment::fclt_tightness: return "fclt";
        case Experiment::resample: return "resample";
        case Experiment::stabilize: return "stabilize";
        case Experiment::kacrice: return "kacrice";
        case Experiment::perco_tail: return "perco";
        case Experiment::sigma: return "sigma";
    }
    return "clt";
}

// Reads typed fields from one table, recording issues and which keys were seen.
class Reader {
public:
    Reader(const json& table, std::string path, std::vector<ConfigIssue>& issues)
        : t_(table), path_(std::move(path)), issues_(issues) {}

    ~Reader() {
        if (!t_.is_object()) return;
        for (const auto& [k, v] : t_.items())
            if (!used_.count(k)) issue(k, "unknown key");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    void issue(const std::string& key, const std::string& m) { issues_.push_back({at(key), m}); }
    bool has(const std::string& key) const { return t_.is_object() && t_.contains(key); }
    const json* get(const std::string& key) {
        used_.insert(key);
        return has(key) ? &t_.at(key) : nullptr;
    }
    void mark(const std::string& key) { used_.insert(key); }

    void number(const std::string& key, double& out) {
        if (const json* v = get(key)) {
            if (v->is_number()) out = v->get<double>();
            else issue(key, "type mismatch: expected a number");
        }
    }
    template <class Int>
    void integer(const std::string& key, Int& out) {
        if (const json* v = get(key)) {
            if (v->is_number_integer()) {
                const auto x = v->get<std::int64_t>();
                if (std::is_unsigned_v<Int> && x < 0) issue(key, "constraint violation: must be >= 0");
                else out = static_cast<Int>(x);
            } else {
                issue(key, "type mismatch: expected an integer");
            }
        }
    }
    void boolean(const std::string& key, bool& out) {
        if (const json* v = get(key)) {
            if (v->is_boolean()) out = v->get<bool>();
            else issue(key, "type mismatch: expected true or false");
        }
    }
    void string(const std::string& key, std::string& out) {
        if (const json* v = get(key)) {
            if (v->is_string()) out = v->get<std::string>();
            else issue(key, "type mismatch: expected a string");
        }
    }
    void numbers(const std::string& key, std::vector<double>& out) {
        if (const json* v = get(key)) {
            std::vector<double> tmp;
            if (!v->is_array()) {
                issue(key, "type mismatch: expected an array of numbers");
                return;
            }
            for (const auto& x : *v) {
                if (!x.is_number()) {
                    issue(key, "type mismatch: expected an array of numbers");
                    return;
                }
                tmp.push_back(x.get<double>());
            }
            out = tmp;
        }
    }
    void points(const std::string& key, std::vector<std::vector<double>>& out) {
        if (const json* v = get(key)) {
            std::vector<std::vector<double>> tmp;
            bool ok = v->is_array();
            if (ok)
                for (const auto& row : *v) {
                    if (!row.is_array()) {
                        ok = false;
                        break;
                    }
                    std::vector<double> r;
                    for (const auto& x : row) {
                        if (!x.is_number()) ok = false;
                        else r.push_back(x.get<double>());
                    }
                    tmp.push_back(r);
                }
            if (!ok) issue(key, "type mismatch: expected an array of number arrays");
            else out = tmp;
        }
    }
    void intervals(const std::string& key, std::vector<std::pair<double, double>>& out) {
        std::vector<std::vector<double>> rows;
        const bool present = has(key);
        points(key, rows);
        if (!present) return;
        std::vector<std::pair<double, double>> tmp;
        for (const auto& r : rows) {
            if (r.size() != 2) {
                issue(key, "each interval needs two numbers [lo, hi]");
                return;
            }
            tmp.emplace_back(r[0], r[1]);
        }
        out = tmp;
    }
    const json* table(const std::string& key) {
        const json* v = get(key);
        if (v && !v->is_object()) {
            issue(key, "type mismatch: expected a table");
            return nullptr;
        }
        return v;
    }

private:
    const json& t_;
    std::string path_;
    std::vector<ConfigIssue>& issues_;
    std::set<std::string> used_;
};

const json& empty_table() {
    static const json e = json::object();
    return e;
}

void check(bool ok, std::vector<ConfigIssue>& issues, const std::string& path, const std::string& m) {
    if (!ok) issues.push_back({path, "constraint violation: " + m});
}

bool increasing(const std::vector<double>& v) {
    for (std::size_t k = 1; k < v.size(); ++k)
        if (!(v[k] > v[k - 1])) return false;
    return true;
}

bool on_lattice(double x, double h) {
    const double r = x / h;
    return std::abs(r - std::round(r)) <= 1e-7 * std::max(1.0, std::abs(r));
}

void read_marks(const json& v, MarkDistribution& m, std::vector<ConfigIssue>& issues, const std::string& path) {
    Reader r(v, path, issues);
    std::string kind = "point";
    r.string("kind", kind);
    if (kind == "point") {
        double value = 1.0;
        r.number("value", value);
        m = MarkDistribution::point(value);
    } else if (kind == "uniform") {
        double lo = 0.0, hi = 1.0;
        r.number("lo", lo);
        r.number("hi", hi);
        m = MarkDistribution::uniform_on(lo, hi);
    } else if (kind == "discrete") {
        std::vector<double> atoms{1.0}, weights{1.0};
        r.numbers("atoms", atoms);
        r.numbers("weights", weights);
        m = MarkDistribution::finite(atoms, weights);
    } else {
        r.issue("kind", "must be one of point, uniform, discrete");
        return;
    }
    try {
        m.validate();
    } catch (const Error& e) {
        issues.push_back({path, std::string("constraint violation: ") + e.what()});
    }
}

json marks_json(const MarkDistribution& m) {
    switch (m.kind) {
        case MarkDistribution::Kind::point_mass: return {{"kind", "point"}, {"value", m.a}};
        case MarkDistribution::Kind::uniform: return {{"kind", "uniform"}, {"lo", m.a}, {"hi", m.b}};
        case MarkDistribution::Kind::discrete:
            return {{"kind", "discrete"}, {"atoms", m.atoms}, {"weights", m.weights}};
    }
    return json::object();
}

json points_json(const std::vector<std::vector<double>>& p) {
    json a = json::array();
    for (const auto& r : p) a.push_back(r);
    return a;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(ErrorKind::config, msg_list(issues)), issues_(std::move(issues)) {}

ConfigError::ConfigError(const std::string& path, const std::string& message)
    : ConfigError(std::vector<ConfigIssue>{{path, message}}) {}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = toml::parse(text);
    } catch (const toml::ParseError& e) {
        throw ConfigError("<document>", e.what());
    }
    std::vector<ConfigIssue> issues;
    RunConfig c;
    {
        Reader top(doc, "", issues);
        std::string exp = "clt";
        if (!top.has("experiment")) top.issue("experiment", "missing required key");
        top.string("experiment", exp);
        try {
            c.experiment = parse_experiment(exp);
        } catch (const Error&) {
            top.issue("experiment",
                      "must be one of clt, fclt-tightness, resample, stabilize, kacrice, perco-tail, sigma");
        }
        top.integer("seed", c.seed);
        top.integer("threads", c.threads);
        top.string("output", c.output);
        top.integer("memory_limit_mb", c.memory_limit_mb);
        check(c.threads >= 1, issues, "threads", "must be >= 1");
        check(c.memory_limit_mb >= 1, issues, "memory_limit_mb", "must be >= 1");

        // model
        {
            const json* mt = top.table("model");
            Reader r(mt ? *mt : empty_table(), "model", issues);
            std::string kind = "gaussian";
            r.string("kind", kind);
            if (kind == "gaussian") c.model.kind = ModelKind::gaussian;
            else if (kind == "shot-noise") c.model.kind = ModelKind::shot_noise;
            else r.issue("kind", "must be gaussian or shot-noise");
            r.number("spacing", c.model.spacing);
            check(c.model.spacing > 0.0, issues, "model.spacing", "must be > 0");
            r.number("intensity", c.model.shot.intensity);
            check(c.model.shot.intensity >= 0.0, issues, "model.intensity", "must be >= 0");
            if (const json* m = r.get("marks")) {
                if (m->is_object()) read_marks(*m, c.model.shot.marks, issues, "model.marks");
                else r.issue("marks", "type mismatch: expected a table");
            }
        }
        // kernel
        {
            const json* kt = top.table("kernel");
            Reader r(kt ? *kt : empty_table(), "kernel", issues);
            KernelSpec& k = c.model.kernel;
            std::string fam = "bump";
            r.string("family", fam);
            try {
                k.family = parse_kernel_family(fam);
            } catch (const Error&) {
                r.issue("family", "must be uniform, bump or polynomial");
            }
            r.integer("dim", k.dim);
            r.number("b0", k.b0);
            r.number("eta", k.eta);
            r.number("scale", k.scale);
            r.number("taper_radius", k.taper_radius);
            k.normalization = c.model.kind == ModelKind::shot_noise ? Normalization::L1 : Normalization::L2;
            std::string norm;
            r.string("normalization", norm);
            if (!norm.empty()) {
                try {
                    k.normalization = parse_normalization(norm);
                } catch (const Error&) {
                    r.issue("normalization", "must be L1 or L2");
                }
            }
            check(k.dim >= 1 && k.dim <= 3, issues, "kernel.dim", "must be 1, 2 or 3");
        }
        // levels
        {
            const json* lt = top.table("levels");
            Reader r(lt ? *lt : empty_table(), "levels", issues);
            r.number("lo", c.levels.lo);
            r.number("hi", c.levels.hi);
            r.integer("count", c.levels.count);
            r.numbers("extra", c.levels.extra);
            r.numbers("values", c.levels.values);
            check(c.levels.count >= 1, issues, "levels.count", "must be >= 1");
            check(c.levels.hi >= c.levels.lo, issues, "levels.hi", "must be >= levels.lo");
            check(std::is_sorted(c.levels.values.begin(), c.levels.values.end()), issues, "levels.values",
                  "must be sorted ascending");
        }

        const std::string sec = section_of(c.experiment);
        for (const char* s : {"clt", "fclt", "resample", "stabilize", "kacrice", "perco", "sigma"})
            if (sec != s && top.has(s)) {
                top.mark(s);
                top.issue(s, std::string("section does not apply to experiment ") + to_string(c.experiment));
            }
        const json* st = top.table(sec);
        const json& t = st ? *st : empty_table();
        const int dim = c.model.kernel.dim;
        const double h = c.model.spacing;
        auto window_ok = [&](const std::string& path, double n) {
            check(n > 0.0, issues, path, "window must be > 0");
            if (h > 0.0) check(on_lattice(n, h), issues, path, "window must be a multiple of model.spacing");
        };
        switch (c.experiment) {
            case Experiment::clt: {
                Reader r(t, sec, issues);
                auto& p = c.clt;
                r.numbers("windows", p.windows);
                r.integer("replicates", p.replicates);
                r.integer("homology_dim", p.homology_dim);
                r.boolean("interior_only", p.interior_only);
                r.boolean("levelwise", p.levelwise);
                r.numbers("probe_levels", p.probe_levels);
                r.numbers("covariance_levels", p.covariance_levels);
                check(p.replicates >= 1, issues, "clt.replicates", "must be >= 1");
                check(!p.windows.empty() && increasing(p.windows), issues, "clt.windows",
                      "must be a non-empty increasing list");
                for (double n : p.windows) window_ok("clt.windows", n);
                check(p.homology_dim >= 0 && p.homology_dim <= dim, issues, "clt.homology_dim", "must be in 0..d");
                check(!p.levelwise || p.homology_dim == 0, issues, "clt.levelwise", "needs homology_dim = 0");
                break;
            }
            case Experiment::fclt_tightness: {
                Reader r(t, sec, issues);
                auto& p = c.fclt;
                r.numbers("windows", p.windows);
                r.integer("replicates", p.replicates);
                r.intervals("intervals", p.intervals);
                check(p.replicates >= 1, issues, "fclt.replicates", "must be >= 1");
                check(!p.windows.empty() && increasing(p.windows), issues, "fclt.windows",
                      "must be a non-empty increasing list");
                for (double n : p.windows) window_ok("fclt.windows", n);
                for (const auto& [a, b] : p.intervals) check(b >= a, issues, "fclt.intervals", "need lo <= hi");
                break;
            }
            case Experiment::resample: {
                Reader r(t, sec, issues);
                auto& p = c.resample;
                p.i.assign(static_cast<std::size_t>(std::max(dim, 1)), 0.0);
                p.targets.clear();
                for (double s : {2.0, 4.0, 8.0, 16.0}) {
                    std::vector<double> j(static_cast<std::size_t>(std::max(dim, 1)), 0.0);
                    j[0] = s;
                    p.targets.push_back(j);
                }
                r.number("window", p.window);
                r.numbers("i", p.i);
                r.points("targets", p.targets);
                r.number("u_minus", p.u_minus);
                r.number("u_plus", p.u_plus);
                r.integer("replicates", p.replicates);
                r.boolean("interior_only", p.interior_only);
                window_ok("resample.window", p.window);
                check(p.replicates >= 1, issues, "resample.replicates", "must be >= 1");
                check(p.u_plus >= p.u_minus, issues, "resample.u_plus", "must be >= u_minus");
                check(static_cast<int>(p.i.size()) == dim, issues, "resample.i", "needs d coordinates");
                check(!p.targets.empty(), issues, "resample.targets", "must not be empty");
                for (const auto& j : p.targets) {
                    check(static_cast<int>(j.size()) == dim, issues, "resample.targets", "each target needs d coordinates");
                    check(j != p.i, issues, "resample.targets", "targets must differ from i");
                }
                break;
            }
            case Experiment::stabilize: {
                Reader r(t, sec, issues);
                auto& p = c.stabilize;
                r.number("window", p.window);
                r.numbers("radii", p.radii);
                r.number("u_minus", p.u_minus);
                r.number("u_plus", p.u_plus);
                r.integer("replicates", p.replicates);
                r.boolean("interior_only", p.interior_only);
                window_ok("stabilize.window", p.window);
                check(p.replicates >= 1, issues, "stabilize.replicates", "must be >= 1");
                check(!p.radii.empty() && increasing(p.radii) && p.radii.front() > 0.0, issues, "stabilize.radii",
                      "must be positive and increasing");
                check(p.u_plus >= p.u_minus, issues, "stabilize.u_plus", "must be >= u_minus");
                break;
            }
            case Experiment::kacrice: {
                Reader r(t, sec, issues);
                auto& p = c.kacrice;
                r.number("window", p.window);
                r.number("lo", p.lo);
                r.numbers("widths", p.widths);
                r.integer("replicates", p.replicates);
                window_ok("kacrice.window", p.window);
                check(p.replicates >= 1, issues, "kacrice.replicates", "must be >= 1");
                check(!p.widths.empty(), issues, "kacrice.widths", "must not be empty");
                for (double w : p.widths) check(w > 0.0, issues, "kacrice.widths", "must be > 0");
                check(c.model.kernel.family != KernelFamily::uniform_indicator, issues, "kernel.family",
                      "critical points need a smooth kernel");
                break;
            }
            case Experiment::perco_tail: {
                Reader r(t, sec, issues);
                auto& p = c.perco;
                r.number("window", p.window);
                r.number("level", p.level);
                r.numbers("radii", p.radii);
                r.integer("replicates", p.replicates);
                r.number("fit_min_radius", p.fit_min_radius);
                r.integer("min_exceed", p.min_exceed);
                window_ok("perco.window", p.window);
                check(p.replicates >= 1, issues, "perco.replicates", "must be >= 1");
                check(!p.radii.empty() && increasing(p.radii) && p.radii.front() > 0.0, issues, "perco.radii",
                      "must be positive and increasing");
                check(p.min_exceed >= 1, issues, "perco.min_exceed", "must be >= 1");
                break;
            }
            case Experiment::sigma: {
                Reader r(t, sec, issues);
                auto& p = c.sigma;
                r.number("window", p.window);
                r.number("box_side", p.box_side);
                r.number("level", p.level);
                r.integer("outer", p.outer);
                r.integer("inner", p.inner);
                r.numbers("shifts", p.shifts);
                r.boolean("interior_only", p.interior_only);
                window_ok("sigma.window", p.window);
                check(p.box_side > 0.0 && p.box_side < p.window, issues, "sigma.box_side",
                      "must be in (0, window)");
                check(p.outer >= 2, issues, "sigma.outer", "must be >= 2");
                check(p.inner >= 2, issues, "sigma.inner", "must be >= 2");
                check(c.model.kind == ModelKind::gaussian, issues, "model.kind", "sigma needs the gaussian model");
                break;
            }
        }
    }
    if (c.model.kernel.dim >= 1 && c.model.kernel.dim <= 3 && c.model.spacing > 0.0) {
        try {
            FieldModel m(c.model);
        } catch (const Error& e) {
            issues.push_back({"kernel", std::string("constraint violation: ") + e.what()});
        }
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("<file>", "cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

json to_json(const RunConfig& c) {
    json j;
    j["experiment"] = to_string(c.experiment);
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["output"] = c.output;
    j["memory_limit_mb"] = c.memory_limit_mb;
    json m;
    m["kind"] = c.model.kind == ModelKind::gaussian ? "gaussian" : "shot-noise";
    m["spacing"] = c.model.spacing;
    if (c.model.kind == ModelKind::shot_noise) {
        m["intensity"] = c.model.shot.intensity;
        m["marks"] = marks_json(c.model.shot.marks);
    }
    j["model"] = m;
    const KernelSpec& k = c.model.kernel;
    const char* fam = k.family == KernelFamily::uniform_indicator ? "uniform"
                      : k.family == KernelFamily::smooth_bump     ? "bump"
                                                                  : "polynomial";
    j["kernel"] = {{"family", fam}, {"dim", k.dim}, {"b0", k.b0}, {"eta", k.eta}, {"scale", k.scale},
                   {"taper_radius", k.taper_radius}, {"normalization", to_string(k.normalization)}};
    json lv = {{"lo", c.levels.lo}, {"hi", c.levels.hi}, {"count", c.levels.count}};
    if (!c.levels.extra.empty()) lv["extra"] = c.levels.extra;
    if (!c.levels.values.empty()) lv["values"] = c.levels.values;
    j["levels"] = lv;
    switch (c.experiment) {
        case Experiment::clt:
            j["clt"] = {{"windows", c.clt.windows},           {"replicates", c.clt.replicates},
                        {"homology_dim", c.clt.homology_dim}, {"interior_only", c.clt.interior_only},
                        {"levelwise", c.clt.levelwise},       {"probe_levels", c.clt.probe_levels},
                        {"covariance_levels", c.clt.covariance_levels}};
            break;
        case Experiment::fclt_tightness: {
            json iv = json::array();
            for (const auto& [a, b] : c.fclt.intervals) iv.push_back({a, b});
            j["fclt"] = {{"windows", c.fclt.windows}, {"replicates", c.fclt.replicates}, {"intervals", iv}};
            break;
        }
        case Experiment::resample:
            j["resample"] = {{"window", c.resample.window},     {"i", c.resample.i},
                             {"targets", points_json(c.resample.targets)},
                             {"u_minus", c.resample.u_minus},   {"u_plus", c.resample.u_plus},
                             {"replicates", c.resample.replicates}, {"interior_only", c.resample.interior_only}};
            break;
        case Experiment::stabilize:
            j["stabilize"] = {{"window", c.stabilize.window},   {"radii", c.stabilize.radii},
                              {"u_minus", c.stabilize.u_minus}, {"u_plus", c.stabilize.u_plus},
                              {"replicates", c.stabilize.replicates}, {"interior_only", c.stabilize.interior_only}};
            break;
        case Experiment::kacrice:
            j["kacrice"] = {{"window", c.kacrice.window}, {"lo", c.kacrice.lo}, {"widths", c.kacrice.widths},
                            {"replicates", c.kacrice.replicates}};
            break;
        case Experiment::perco_tail:
            j["perco"] = {{"window", c.perco.window},         {"level", c.perco.level},
                          {"radii", c.perco.radii},           {"replicates", c.perco.replicates},
                          {"fit_min_radius", c.perco.fit_min_radius}, {"min_exceed", c.perco.min_exceed}};
            break;
        case Experiment::sigma:
            j["sigma"] = {{"window", c.sigma.window}, {"box_side", c.sigma.box_side}, {"level", c.sigma.level},
                          {"outer", c.sigma.outer},   {"inner", c.sigma.inner},       {"shifts", c.sigma.shifts},
                          {"interior_only", c.sigma.interior_only}};
            break;
    }
    return j;
}

std::string serialize(const RunConfig& c) { return toml::dump(to_json(c)); }

bool same_config(const RunConfig& a, const RunConfig& b) { return to_json(a) == to_json(b); }

std::string config_hash(const RunConfig& c) {
    json j = to_json(c);
    j.erase("seed");
    j.erase("threads");
    j.erase("output");
    j.erase("memory_limit_mb");
    return sha256_hex(j.dump());
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    require(ctx != nullptr, ErrorKind::resource, "cannot allocate a digest context");
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
    return os.str();
}

std::string sha256_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), ErrorKind::invalid_argument, "cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return sha256_hex(ss.str());
}

std::uint64_t estimate_bytes(const RunConfig& c) {
    const FieldModel m(c.model);
    const int d = c.model.kernel.dim;
    const auto threads = static_cast<std::uint64_t>(c.threads);
    auto field = [&](double n, bool centered) {
        const Box b = centered ? Box::cube(d, -0.5 * n, 0.5 * n) : Box::cube(d, 0.0, n);
        return m.estimated_bytes(b);
    };
    const auto nlev = static_cast<std::uint64_t>(c.levels.resolve().size());
    switch (c.experiment) {
        case Experiment::clt:
            return threads * field(c.clt.windows.back(), false) +
                   static_cast<std::uint64_t>(c.clt.replicates) * c.clt.windows.size() * nlev * 24;
        case Experiment::fclt_tightness:
            return threads * field(c.fclt.windows.back(), false) +
                   static_cast<std::uint64_t>(c.fclt.replicates) * c.fclt.windows.size() * nlev * 24;
        case Experiment::resample: return 3 * threads * field(c.resample.window, true);
        case Experiment::stabilize: return 3 * threads * field(c.stabilize.window, true);
        case Experiment::kacrice: return (1 + static_cast<std::uint64_t>(d)) * threads * field(c.kacrice.window + 1.0, false);
        case Experiment::perco_tail: return threads * field(c.perco.window, true);
        case Experiment::sigma: return 4 * threads * field(c.sigma.window, true);
    }
    return 0;
}

}  // namespace topofield
