#include <cmath>
#include <string>

#include "doctest.h"

#include "topofield/config.hpp"
#include "topofield/error.hpp"
#include "topofield/toml.hpp"

using namespace topofield;

namespace {

std::vector<ConfigIssue> issues_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.issues();
    }
    return {};
}

bool has_issue(const std::vector<ConfigIssue>& is, const std::string& path, const std::string& fragment) {
    for (const auto& i : is)
        if (i.path == path && i.message.find(fragment) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("toml documents") {
    const auto j = toml::parse(R"(
# comment
a = 1
b = -2.5e3
c = "x\ty"
d = 'raw\n'
e = [1, 2,
     3]
f = true
g = { kind = "uniform", lo = 0.5 }
h = inf
[s.t]
"quoted key" = 4
)");
    CHECK(j["a"].get<std::int64_t>() == 1);
    CHECK(j["a"].is_number_integer());
    CHECK(j["b"].get<double>() == -2500.0);
    CHECK(j["c"].get<std::string>() == "x\ty");
    CHECK(j["d"].get<std::string>() == "raw\\n");
    CHECK(j["e"].size() == 3);
    CHECK(j["f"].get<bool>());
    CHECK(j["g"]["lo"].get<double>() == 0.5);
    CHECK(std::isinf(j["h"].get<double>()));
    CHECK(j["s"]["t"]["quoted key"].get<int>() == 4);
    CHECK_THROWS_AS(toml::parse("a = 1\na = 2\n"), toml::ParseError);
    CHECK_THROWS_AS(toml::parse("a = \n"), toml::ParseError);
    CHECK_THROWS_AS(toml::parse("[[x]]\n"), toml::ParseError);
    CHECK_THROWS_AS(toml::parse("a = [1, 2\n"), toml::ParseError);
    CHECK(toml::parse(toml::dump(j)) == j);
}

TEST_CASE("minimal gaussian config gets the defaults") {
    const RunConfig c = parse_config("experiment = \"clt\"\n");
    CHECK(c.experiment == Experiment::clt);
    CHECK(c.model.kind == ModelKind::gaussian);
    CHECK(c.model.kernel.normalization == Normalization::L2);
    CHECK(c.model.kernel.family == KernelFamily::smooth_bump);
    CHECK(c.model.kernel.dim == 2);
    CHECK(c.model.spacing == 0.25);
    CHECK(c.seed == 1);
    CHECK(c.clt.windows == std::vector<double>{16, 32, 64, 128});
    CHECK(c.levels.resolve().size() == 64);
    const RunConfig s = parse_config("experiment = \"perco-tail\"\n[model]\nkind = \"shot-noise\"\n");
    CHECK(s.model.kernel.normalization == Normalization::L1);
}

TEST_CASE("negative replicates name the field") {
    const auto is = issues_of("experiment = \"clt\"\n[clt]\nreplicates = -5\n");
    REQUIRE(is.size() == 1);
    CHECK(is[0].path == "clt.replicates");
    CHECK(is[0].message.find("constraint violation") != std::string::npos);
}

TEST_CASE("unknown keys, type mismatches and constraints are aggregated") {
    const auto is = issues_of(R"(
experiment = "resample"
colour = 3
[kernel]
b0 = "wide"
[model]
spacing = -1
[resample]
window = 32
targets = [[1, 0], [0, 0]]
u_minus = 0.9
u_plus = 0.1
[clt]
replicates = 3
)");
    CHECK(has_issue(is, "colour", "unknown key"));
    CHECK(has_issue(is, "kernel.b0", "type mismatch"));
    CHECK(has_issue(is, "model.spacing", "constraint"));
    CHECK(has_issue(is, "resample.targets", "differ"));
    CHECK(has_issue(is, "resample.u_plus", "u_minus"));
    CHECK(has_issue(is, "clt", "does not apply"));
    CHECK(is.size() == 6);
    CHECK(has_issue(issues_of("experiment = \"clt\"\n[clt]\nwindows = [32, 16]\n"), "clt.windows", "increasing"));
    CHECK(has_issue(issues_of("experiment = \"clt\"\n[clt]\nwindows = [16.1]\n"), "clt.windows", "multiple"));
    CHECK(has_issue(issues_of("experiment = \"clt\"\nthreads = 1.5\n"), "threads", "integer"));
    CHECK(has_issue(issues_of("experiment = \"nope\"\n"), "experiment", "must be one of"));
    CHECK(has_issue(issues_of("seed = 3\n"), "experiment", "missing"));
    CHECK(has_issue(issues_of("experiment = \"clt\"\n[kernel]\nfamily = \"polynomial\"\neta = 1.5\n"), "kernel", "eta"));
    CHECK(has_issue(issues_of("experiment = \"kacrice\"\n[kernel]\nfamily = \"uniform\"\n"), "kernel.family", "smooth"));
    CHECK(has_issue(issues_of("experiment = \"sigma\"\n[model]\nkind = \"shot-noise\"\n"), "model.kind", "gaussian"));
    CHECK(has_issue(issues_of("experiment = \"clt\"\nx = [1,\n"), "<document>", ""));
}

TEST_CASE("serialize and parse round-trip") {
    const std::string text = R"(
experiment = "resample"
seed = 99
[model]
kind = "shot-noise"
intensity = 0.75
marks = { kind = "discrete", atoms = [1, 2], weights = [0.25, 0.75] }
[kernel]
dim = 2
b0 = 1.5
[levels]
values = [0.1, 0.3]
[resample]
window = 16
i = [0, 0]
targets = [[2, 0], [0, 4]]
replicates = 12
)";
    const RunConfig a = parse_config(text);
    const RunConfig b = parse_config(serialize(a));
    CHECK(same_config(a, b));
    CHECK(serialize(a) == serialize(b));
    CHECK(b.model.shot.marks.atoms == std::vector<double>{1, 2});
    CHECK(b.resample.targets.size() == 2);
    for (const char* e : {"clt", "fclt-tightness", "stabilize", "kacrice", "perco-tail", "sigma"}) {
        const RunConfig c = parse_config(std::string("experiment = \"") + e + "\"\n");
        CHECK(same_config(c, parse_config(serialize(c))));
    }
}

TEST_CASE("config hash ignores run-local settings") {
    RunConfig a = parse_config("experiment = \"clt\"\n");
    RunConfig b = a;
    b.seed = 5;
    b.threads = 4;
    b.output = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.clt.replicates = 7;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(estimate_bytes(a) > 0);
}
