#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "topofield/cubical.hpp"
#include "topofield/model.hpp"
#include "topofield/stats.hpp"

namespace topofield {

struct EnsembleConfig {
    ModelConfig model;
    std::vector<double> windows;  // side lengths of W_n = [0, n]^d
    std::vector<double> levels;   // ascending level grid
    int replicates = 100;
    std::uint64_t seed = 1;
    int homology_dim = 0;
    bool interior_only = true;
    /// β0 by labeling each grid level directly instead of through the
    /// persistence diagram; β⁺ and β⁻ are then not recorded.
    bool levelwise = false;
    int threads = 1;
    std::uint64_t memory_limit_bytes = 4ull << 30;
};

/// β, β⁺ and β⁻ of one replicate at every grid level.
struct ReplicateSample {
    std::vector<std::int64_t> beta, plus, minus;
};

/// Raw per-replicate samples keyed by replicate id, per window.
struct EnsembleData {
    std::vector<double> windows;
    std::vector<double> levels;
    int dim = 2;
    std::vector<std::map<std::uint64_t, ReplicateSample>> samples;  // [window][rep]
};

/// Replicate stream of window `w`, replicate `rep`.
RngStream replicate_stream(std::uint64_t seed, std::size_t window, std::uint64_t rep);

/// Full pipeline (realize, filtration, Betti path) for one replicate.
ReplicateSample run_replicate(const FieldModel& model, const EnsembleConfig& config, std::size_t window,
                              std::uint64_t rep);

/// Samples for replicate ids [first, last).
EnsembleData ensemble_samples(const EnsembleConfig& config, std::uint64_t first, std::uint64_t last);
/// Union of two sample sets over the same windows and levels; replicate ids
/// must be disjoint.
EnsembleData merge(const EnsembleData& a, const EnsembleData& b);

struct LevelStats {
    double level = 0.0;
    double mean = 0.0;
    double variance = 0.0;  // k2
    double k3 = 0.0, k4 = 0.0;
};

struct NormalityEntry {
    double level = 0.0;
    bool defined = false;
    stats::Normality result;
};

struct WindowSummary {
    double side = 0.0;
    double volume = 0.0;
    std::uint64_t replicates = 0;
    std::vector<LevelStats> levels;
    Eigen::MatrixXd sigma;  // covariance of β̃ over the level grid
    std::vector<NormalityEntry> normality;
};

struct EnsembleSummary {
    std::string config_hash;
    std::uint64_t seed = 0;
    int dim = 2;
    std::vector<double> levels;
    std::uint64_t replicates = 0;
    bool variance_undefined = false;  // a single replicate
    std::vector<WindowSummary> windows;
    EnsembleData data;
};

EnsembleSummary summarize(const EnsembleData& data, const std::string& config_hash, std::uint64_t seed);
EnsembleSummary ensemble_run(const EnsembleConfig& config, const std::string& config_hash = {});

/// Unbiased k-statistic of order k (1..4).
double cumulant(const std::vector<double>& samples, int k);

/// β̃ samples (β - mean) / sqrt|W| for window w at grid level index l.
std::vector<double> standardized(const EnsembleSummary& s, std::size_t window, std::size_t level);
std::size_t level_index(const EnsembleSummary& s, double u);

struct DensityEstimate {
    double side = 0.0;
    double mu = 0.0;
    double se = 0.0;
    stats::Interval ci;  // mu ± 1.96 se
};

std::vector<DensityEstimate> mean_density(const EnsembleSummary& s, double u);

struct VarianceRow {
    double side = 0.0;
    double ratio = 0.0;  // Var β_n(u) / |W_n|
    stats::JackknifeResult jackknife;
};

struct VarianceScaling {
    double level = 0.0;
    std::vector<VarianceRow> rows;
    bool stabilized = false;  // last two ratios within 25%
};

VarianceScaling variance_scaling(const EnsembleSummary& s, double u);

/// Sample covariance of (β̃(u_1), ..., β̃(u_K)) for window w.
Eigen::MatrixXd multilevel_covariance(const EnsembleSummary& s, std::size_t window,
                                      const std::vector<double>& levels);
Eigen::MatrixXd level_samples(const EnsembleSummary& s, std::size_t window,
                              const std::vector<double>& levels);

struct ChentsovResult {
    double lo = 0.0, hi = 0.0;
    double volume = 0.0;
    bool n_big = false;  // |I| >= |W|^(-2/3)
    double mean_increment = 0.0;
    double moment = 0.0;           // Ê[(X - X̄)^4], X = β⁺(lo) - β⁺(hi)
    double moment_identity = 0.0;  // 3 Var² + c4 with c4 from raw moments
    double ratio = 0.0;            // moment / (|W|² |I|^(5/4))
};

/// From increments X_r = β⁺(lo) - β⁺(hi).
ChentsovResult chentsov_from_increments(const std::vector<double>& x, double lo, double hi,
                                        double volume);
ChentsovResult chentsov_moment(const std::vector<BettiPath>& paths, double lo, double hi,
                               double volume);
ChentsovResult chentsov_moment(const EnsembleSummary& s, std::size_t window, double lo, double hi);

struct CriticalCounts {
    std::vector<std::pair<double, double>> bands;
    std::vector<double> mean, second, se;
    std::uint64_t replicates = 0;
};

/// Critical points of F in Q x band per replicate, for several bands.
CriticalCounts critical_counts(const FieldModel& model, const Box& q,
                               const std::vector<std::pair<double, double>>& bands, int replicates,
                               const RngStream& root, int threads = 1);

struct LevelMoment {
    double width = 0.0;
    double m1 = 0.0, m2 = 0.0;  // Ê Y^m / |I|^(31/32)
    double mean_count = 0.0;
};

/// Bands [lo, lo + w) for each width w.
std::vector<LevelMoment> level_moment_diagnostic(const FieldModel& model, const Box& q, double lo,
                                                 const std::vector<double>& widths, int replicates,
                                                 const RngStream& root, int threads = 1);

void write_levels_csv(const EnsembleSummary& s, const std::string& path);
void write_variance_csv(const std::vector<VarianceScaling>& rows, const std::string& hash,
                        const std::string& path);
void write_chentsov_csv(const std::vector<ChentsovResult>& rows, const std::string& hash,
                        const std::string& path);

}  // namespace topofield
