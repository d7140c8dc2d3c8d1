#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "topofield/config.hpp"

namespace topofield {

inline constexpr const char* artifact_version = "0.1.0";

/// Plot-ready table, one CSV file per table.
struct Table {
    std::string name;  // file name, e.g. "diameter_tail.csv"
    std::vector<std::string> header;
    std::vector<std::vector<nlohmann::json>> rows;
};

struct OutputChecksum {
    std::string file;
    std::string sha256;
};

struct RunManifest {
    std::string config_hash;
    std::string version = artifact_version;
    std::uint64_t seed = 0;
    std::string algorithm_id;
    std::string started, finished;  // UTC, ISO 8601
    std::string config;             // resolved config document
    std::vector<OutputChecksum> outputs;
};

/// Runs the configured experiment. The result holds the summary values and
/// the tables; it is a pure function of the config minus `threads` and
/// `output`.
nlohmann::json run_experiment(const RunConfig& config);

std::vector<Table> tables_from_results(const nlohmann::json& results);
/// One CSV with a `# config_hash=` line; numbers in shortest round-trip form.
void write_table_csv(const Table& table, const std::string& hash, const std::string& path);

/// Runs and writes results.json, the CSV tables, config.toml and
/// manifest.json into config.output. Outputs are staged in a sibling
/// directory and moved into place only after the run succeeds.
RunManifest run(const RunConfig& config);

nlohmann::json manifest_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);
RunManifest read_manifest(const std::string& path);
/// Config of a manifest with its seed.
RunConfig manifest_config(const RunManifest& m);

/// Re-renders the CSV tables of a manifest's results.json into `out_dir`
/// after checking the stored checksum. Returns the files written.
std::vector<std::string> report(const std::string& manifest_path, const std::string& out_dir);

/// Resolved config with memory and time estimates; no side effects.
std::string dry_run_text(const RunConfig& config);
double estimate_seconds(const RunConfig& config);

}  // namespace topofield
