#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rep/errors.hpp"
#include "rep/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rep::harness;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitExpectation = 3;

std::vector<ExperimentConfig> load_configs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw rep::IoError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw rep::ConfigError(std::string("config ") + path + ": " + e.what());
    }
    std::vector<ExperimentConfig> configs;
    if (j.is_object() && j.contains("experiments")) {
        for (const auto& e : j["experiments"]) configs.push_back(config_from_json(e));
    } else {
        configs.push_back(config_from_json(j));
    }
    return configs;
}

std::string default_name(const ExperimentConfig& cfg, std::size_t index) {
    if (!cfg.name.empty()) return cfg.name;
    return "experiment" + std::to_string(index);
}

int cmd_run(const std::string& config_path, std::string out_path,
            const std::string& format, std::optional<std::uint64_t> seed,
            std::optional<int> trials, bool quiet) {
    std::vector<ExperimentConfig> configs;
    try {
        configs = load_configs(config_path);
    } catch (const rep::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const rep::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    bool expectations_failed = false;
    json all = json::array();
    try {
        for (std::size_t i = 0; i < configs.size(); ++i) {
            ExperimentConfig cfg = configs[i];
            if (seed) cfg.seed = *seed;
            if (trials) cfg.trials = *trials;
            const ExperimentResult result = run_experiment(cfg);
            const std::string name = default_name(cfg, i);

            if (!quiet) {
                std::cout << name << " (" << to_string(cfg.domain) << ", "
                          << (cfg.protocol == Protocol::rep ? "rep" : "a2a") << ", "
                          << cfg.trials << " trials)\n";
                for (const auto& [key, agg] : result.aggregate)
                    std::cout << "  " << key << ": " << agg.mean << " +/- " << agg.stddev
                              << '\n';
            }

            for (const auto& failure : check_expectations(result)) {
                std::cerr << name << ": expectation failed: " << failure << '\n';
                expectations_failed = true;
            }

            if (!out_path.empty()) {
                std::string path = out_path;
                if (configs.size() > 1) {
                    const fs::path p(out_path);
                    fs::path named = p.parent_path() / (p.stem().string() + "." + name);
                    named += p.extension();
                    path = named.string();
                }
                write_results(result, path, format);
                if (!quiet) std::cout << "  wrote " << path << '\n';
            }
            all.push_back(results_to_json(result));
        }
    } catch (const rep::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return expectations_failed ? kExitExpectation : kExitOk;
}

int cmd_scenarios_list(const std::string& dir) {
    if (!fs::is_directory(dir)) {
        std::cerr << "error: scenario directory not found: " << dir << '\n';
        return kExitConfig;
    }
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json") names.push_back(entry.path().string());
    std::sort(names.begin(), names.end());
    for (const auto& path : names) {
        std::string description;
        try {
            std::ifstream in(path);
            json j;
            in >> j;
            if (j.contains("experiments"))
                description = std::to_string(j["experiments"].size()) + " experiments";
            else
                description = j.value("domain", "?") + "/" + j.value("protocol", "rep");
        } catch (const std::exception&) {
            description = "unreadable";
        }
        std::cout << path << "  [" << description << "]\n";
    }
    return kExitOk;
}

int cmd_plot_data(const std::string& in_path, const std::string& metric,
                  const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) {
        std::cerr << "error: cannot open " << in_path << '\n';
        return kExitConfig;
    }
    json j;
    try {
        in >> j;
        // `run` writes a single results document; accept an array of them too.
        std::string csv;
        if (j.is_array()) {
            for (const auto& doc : j) csv += plot_data_csv(doc, metric);
        } else {
            csv = plot_data_csv(j, metric);
        }
        if (out_path.empty()) {
            std::cout << csv;
        } else {
            std::ofstream out(out_path);
            if (!out) throw rep::IoError("cannot open output file: " + out_path);
            out << csv;
        }
    } catch (const rep::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-agent coordination simulator"};
    app.require_subcommand(1);

    // run
    std::string config_path, out_path, format = "json";
    std::uint64_t seed_value = 0;
    int trials_value = 0;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "Run experiments from a config file");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_path, "Results output path");
    run->add_option("--format", format, "Output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    auto* seed_opt = run->add_option("--seed", seed_value, "Override the base seed");
    auto* trials_opt = run->add_option("--trials", trials_value, "Override the trial count")
                           ->check(CLI::PositiveNumber);
    run->add_flag("--quiet", quiet, "Suppress the summary printout");

    // scenarios list
    auto* scenarios = app.add_subcommand("scenarios", "Scenario catalog");
    std::string scenario_dir = "scenarios";
    auto* list = scenarios->add_subcommand("list", "List bundled scenario configs");
    list->add_option("--dir", scenario_dir, "Scenario directory");
    scenarios->require_subcommand(1);

    // plot-data
    std::string plot_in, plot_metric, plot_out;
    auto* plot = app.add_subcommand("plot-data", "Extract one metric as long-format CSV");
    plot->add_option("--in", plot_in, "Results JSON produced by 'run'")->required();
    plot->add_option("--metric", plot_metric, "Per-round metric name")->required();
    plot->add_option("--out", plot_out, "CSV output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed())
        return cmd_run(config_path, out_path, format,
                       seed_opt->count() ? std::optional(seed_value) : std::nullopt,
                       trials_opt->count() ? std::optional(trials_value) : std::nullopt,
                       quiet);
    if (scenarios->parsed() && list->parsed()) return cmd_scenarios_list(scenario_dir);
    if (plot->parsed()) return cmd_plot_data(plot_in, plot_metric, plot_out);
    return kExitConfig;
}
