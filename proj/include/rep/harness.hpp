#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rep/consensus.hpp"
#include "rep/domains/beer.hpp"
#include "rep/domains/fishbanks.hpp"
#include "rep/domains/movie.hpp"
#include "rep/topology.hpp"

namespace rep::harness {

enum class Protocol { rep, a2a };

struct ExperimentConfig {
    std::string name;
    Domain domain = Domain::beer;
    Protocol protocol = Protocol::rep;
    UpdaterKind updater = UpdaterKind::numerical_grad;
    ConsensusRule consensus = ConsensusRule::none;
    int n_agents = 4;
    double sparsity = 0.0;
    int rounds = 20;
    int trials = 5;
    std::uint64_t seed = 1;
    double eta = 0.3;
    double convergence_threshold = 0.70;
    bool capture_transcript = false;

    beer::Params beer;
    fishbanks::Params fishbanks;
    movie::Params movie;

    // Optional CI expectations on aggregate summary means:
    // key -> upper bound / lower bound.
    std::map<std::string, double> expect_max;
    std::map<std::string, double> expect_min;
};

// Parses and validates; every validation error is reported at once.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

using MetricsRecord = std::map<std::string, double>;

struct TrialResult {
    std::uint64_t seed = 0;
    std::vector<MetricsRecord> rounds;
    std::map<std::string, double> summary;
    std::size_t message_count = 0;
    std::size_t message_bytes = 0;
    std::string transcript;  // populated only when capture_transcript is set
};

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<TrialResult> trials;
    std::map<std::string, Aggregate> aggregate;  // over summary fields
};

TrialResult run_trial(const ExperimentConfig& cfg, std::uint64_t seed);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// First 1-based round whose consensus_fraction reaches the threshold and
// holds it for 2 consecutive rounds; nullopt = did not finish.
std::optional<int> rounds_to_convergence(const std::vector<MetricsRecord>& records,
                                         double threshold);

// Variance of manufacturer orders over demand variance, rounds
// [first_round, last_round] 1-based inclusive; nullopt when demand variance
// is zero.
std::optional<double> bullwhip_ratio(const std::vector<MetricsRecord>& records,
                                     int first_round, int last_round);

nlohmann::json results_to_json(const ExperimentResult& result);
std::string results_to_csv(const ExperimentResult& result);
void write_results(const ExperimentResult& result, const std::string& path,
                   const std::string& format);

// Long-format (trial,round,metric,value) CSV for a single metric, from a
// results JSON document.
std::string plot_data_csv(const nlohmann::json& results, const std::string& metric);

// Returns the failed expectation messages (empty = all met).
std::vector<std::string> check_expectations(const ExperimentResult& result);

}  // namespace rep::harness
