#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "topofield/config.hpp"
#include "topofield/error.hpp"
#include "topofield/experiments.hpp"

namespace {

constexpr int exit_validation = 2;
constexpr int exit_resource = 3;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out;
};

void apply(topofield::RunConfig& c, const Overrides& o) {
    if (o.seed) c.seed = *o.seed;
    if (o.threads) {
        if (*o.threads < 1) throw topofield::ConfigError("--threads", "constraint violation: must be >= 1");
        c.threads = *o.threads;
    }
    if (o.out) c.output = *o.out;
}

topofield::RunConfig resolve(const std::string& config_path, const std::string& manifest_path,
                             const std::string& experiment) {
    using namespace topofield;
    if (!manifest_path.empty()) return manifest_config(read_manifest(manifest_path));
    if (!config_path.empty()) {
        RunConfig c = load_config(config_path);
        if (!experiment.empty() && experiment != to_string(c.experiment))
            throw ConfigError("--experiment", "conflicts with experiment '" + std::string(to_string(c.experiment)) +
                                                    "' in " + config_path);
        return c;
    }
    if (experiment.empty()) throw ConfigError("--config", "one of --config, --manifest or --experiment is required");
    return parse_config("experiment = \"" + experiment + "\"\n");
}

void print_issues(const topofield::ConfigError& e) {
    std::cerr << "validation failed:\n";
    for (const auto& i : e.issues()) std::cerr << "  " << i.path << ": " << i.message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topological functionals of random fields: experiment driver"};
    app.require_subcommand(1);

    std::string config_path, manifest_path, experiment, report_out;
    Overrides ov;
    bool dry_run = false;

    auto* run = app.add_subcommand("run", "run one experiment and write its outputs");
    run->add_option("--config", config_path, "config file (TOML)");
    run->add_option("--manifest", manifest_path, "re-run the config and seed recorded in a manifest");
    run->add_option("--experiment", experiment, "experiment name; alone, runs it with default settings");
    run->add_option("--seed", ov.seed, "override the master seed");
    run->add_option("--threads", ov.threads, "worker threads");
    run->add_option("--out", ov.out, "output directory");
    run->add_flag("--dry-run", dry_run, "print the resolved config and estimates, write nothing");

    auto* validate = app.add_subcommand("validate", "check a config file");
    validate->add_option("--config", config_path, "config file (TOML)")->required();

    auto* report = app.add_subcommand("report", "re-render CSV tables from a manifest");
    report->add_option("--manifest", manifest_path, "manifest.json of a run")->required();
    report->add_option("--out", report_out, "directory for the tables (default: the run directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_validation;
    }

    using namespace topofield;
    try {
        if (*validate) {
            const RunConfig c = load_config(config_path);
            std::cout << "ok " << to_string(c.experiment) << " " << config_hash(c) << "\n";
            return 0;
        }
        if (*report) {
            for (const auto& f : topofield::report(manifest_path, report_out)) std::cout << f << "\n";
            return 0;
        }
        RunConfig c = resolve(config_path, manifest_path, experiment);
        apply(c, ov);
        if (dry_run) {
            std::cout << dry_run_text(c);
            return 0;
        }
        const RunManifest m = topofield::run(c);
        std::cout << "wrote " << m.outputs.size() << " files to " << c.output << " (config " << m.config_hash
                  << ")\n";
        return 0;
    } catch (const ConfigError& e) {
        print_issues(e);
        return exit_validation;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return exit_resource;
    } catch (const Error& e) {
        std::cerr << to_string(e.kind()) << " error: " << e.what() << "\n";
        if (e.kind() == ErrorKind::resource) return exit_resource;
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
