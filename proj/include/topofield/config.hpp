#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "topofield/error.hpp"
#include "topofield/model.hpp"

namespace topofield {

enum class Experiment { clt, fclt_tightness, resample, stabilize, kacrice, perco_tail, sigma };

const char* to_string(Experiment e);
Experiment parse_experiment(const std::string& name);

/// Uniform grid of `count` levels over [lo, hi] plus `extra` levels, or an
/// explicit `values` list when given.
struct LevelGrid {
    double lo = 0.25;
    double hi = 2.0;
    int count = 64;
    std::vector<double> extra;
    std::vector<double> values;

    /// Sorted, duplicate-free level list.
    std::vector<double> resolve() const;
};

struct CltParams {
    std::vector<double> windows{16, 32, 64, 128};
    int replicates = 200;
    int homology_dim = 0;
    bool interior_only = true;
    bool levelwise = false;
    std::vector<double> probe_levels{0.5};
    std::vector<double> covariance_levels{0.5, 1.0};
};

struct TightnessParams {
    std::vector<double> windows{16, 32, 64};
    int replicates = 500;
    std::vector<std::pair<double, double>> intervals{{0.5, 0.6}, {0.5, 0.7}, {0.5, 0.9}};
};

struct ResampleParams {
    double window = 32.0;  // side of the centered window [-n/2, n/2]^d
    std::vector<double> i{0.0};
    std::vector<std::vector<double>> targets{{2.0}, {4.0}, {8.0}, {16.0}};
    double u_minus = 0.5;
    double u_plus = 0.6;
    int replicates = 1000;
    bool interior_only = true;
};

struct StabilizeParams {
    double window = 32.0;
    std::vector<double> radii{1, 2, 3, 4, 6, 8, 12};
    double u_minus = 0.5;
    double u_plus = 0.6;
    int replicates = 500;
    bool interior_only = true;
};

struct KacRiceParams {
    double window = 8.0;  // Q = [0, n]^d
    double lo = 0.5;
    std::vector<double> widths{0.05, 0.1, 0.2};
    int replicates = 1000;
};

struct PercoParams {
    double window = 32.0;
    double level = 0.5;
    std::vector<double> radii{1, 2, 3, 4, 6, 8, 12, 16};
    int replicates = 1000;
    double fit_min_radius = 2.0;
    int min_exceed = 10;
};

struct SigmaParams {
    double window = 16.0;
    double box_side = 2.0;
    double level = 0.5;
    int outer = 200;
    int inner = 8;
    std::vector<double> shifts{-2, -1, 0, 1, 2};
    bool interior_only = true;
};

struct RunConfig {
    Experiment experiment = Experiment::clt;
    ModelConfig model;
    LevelGrid levels;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string output = "out";
    std::uint64_t memory_limit_mb = 4096;
    CltParams clt;
    TightnessParams fclt;
    ResampleParams resample;
    StabilizeParams stabilize;
    KacRiceParams kacrice;
    PercoParams perco;
    SigmaParams sigma;
};

struct ConfigIssue {
    std::string path;  // e.g. "clt.replicates"
    std::string message;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    ConfigError(const std::string& path, const std::string& message);
    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

/// Parses and validates a config document. All problems are collected and
/// reported together.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Resolved config as a document (defaults filled in).
nlohmann::json to_json(const RunConfig& c);
std::string serialize(const RunConfig& c);
bool same_config(const RunConfig& a, const RunConfig& b);

/// Content hash of everything that determines the numbers: the resolved
/// config minus seed, thread count and output directory.
std::string config_hash(const RunConfig& c);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

/// Peak memory of the run, bytes.
std::uint64_t estimate_bytes(const RunConfig& c);

}  // namespace topofield
