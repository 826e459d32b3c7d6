#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rep/errors.hpp"
#include "rep/harness.hpp"

using namespace rep;
using namespace rep::harness;
using nlohmann::json;

namespace {

json minimal_config() {
    return json{{"name", "t"},     {"domain", "beer"}, {"protocol", "rep"},
                {"n_agents", 4},   {"rounds", 2},      {"trials", 1},
                {"seed", 7},       {"eta", 1.0}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<MetricsRecord> fraction_records(const std::vector<double>& fractions) {
    std::vector<MetricsRecord> out;
    for (double f : fractions) out.push_back({{"consensus_fraction", f}});
    return out;
}

}  // namespace

TEST_CASE("a minimal config parses with defaults") {
    const ExperimentConfig cfg = config_from_json(minimal_config());
    CHECK(cfg.domain == Domain::beer);
    CHECK(cfg.protocol == Protocol::rep);
    CHECK(cfg.updater == UpdaterKind::numerical_grad);
    CHECK(cfg.eta == 1.0);
    CHECK(cfg.beer.n_stages == 4);
}

TEST_CASE("unknown keys are rejected") {
    json j = minimal_config();
    j["typo_field"] = 1;
    CHECK_THROWS_WITH_AS(config_from_json(j), doctest::Contains("typo_field"),
                         ConfigError);
}

TEST_CASE("every validation error is reported at once") {
    json j = minimal_config();
    j["domain"] = "chess";
    j["rounds"] = 0;
    j["sparsity"] = 1.5;
    try {
        config_from_json(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("chess") != std::string::npos);
        CHECK(what.find("rounds") != std::string::npos);
        CHECK(what.find("sparsity") != std::string::npos);
    }
}

TEST_CASE("config round-trips through its JSON form") {
    const ExperimentConfig cfg = config_from_json(minimal_config());
    const ExperimentConfig back = config_from_json(config_to_json(cfg));
    CHECK(config_to_json(back) == config_to_json(cfg));
}

TEST_CASE("one round, one trial gives exactly one record") {
    json j = minimal_config();
    j["rounds"] = 1;
    const ExperimentResult result = run_experiment(config_from_json(j));
    REQUIRE(result.trials.size() == 1);
    CHECK(result.trials[0].rounds.size() == 1);
}

TEST_CASE("the same config runs to identical results") {
    const ExperimentConfig cfg = config_from_json(minimal_config());
    const auto a = results_to_json(run_experiment(cfg));
    const auto b = results_to_json(run_experiment(cfg));
    CHECK(a.dump() == b.dump());
}

TEST_CASE("trial seeds are isolated: trial k equals a direct run at seed+k") {
    json j = minimal_config();
    j["trials"] = 3;
    const ExperimentConfig cfg = config_from_json(j);
    const ExperimentResult result = run_experiment(cfg);
    const TrialResult direct = run_trial(cfg, cfg.seed + 2);
    CHECK(result.trials[2].summary == direct.summary);
    CHECK(result.trials[2].rounds == direct.rounds);
}

TEST_CASE("summaries recompute from their per-round records") {
    json j = minimal_config();
    j["rounds"] = 10;
    const ExperimentResult result = run_experiment(config_from_json(j));
    const TrialResult& t = result.trials[0];
    double cost = 0.0;
    for (const auto& rec : t.rounds) cost += rec.at("cost_total");
    CHECK(t.summary.at("total_cost") == doctest::Approx(cost));
}

TEST_CASE("convergence requires two consecutive rounds at threshold") {
    CHECK(rounds_to_convergence(
              fraction_records({0.2, 0.5, 0.75, 0.8, 0.85}), 0.7) == 3);
    CHECK(rounds_to_convergence(fraction_records({0.2, 0.5, 0.6}), 0.7) ==
          std::nullopt);
    // A lone spike does not count.
    CHECK(rounds_to_convergence(
              fraction_records({0.2, 0.9, 0.5, 0.75, 0.8}), 0.7) == 4);
}

TEST_CASE("bullwhip ratio guards the zero-variance case") {
    std::vector<MetricsRecord> records;
    for (int r = 0; r < 10; ++r)
        records.push_back({{"demand", 4.0}, {"order_manufacturer", 4.0}});
    CHECK(bullwhip_ratio(records, 1, 10) == std::nullopt);

    for (int r = 0; r < 10; ++r) {
        const double d = r % 2 == 0 ? 4.0 : 8.0;
        records[r] = {{"demand", d}, {"order_manufacturer", d}};
    }
    const auto unity = bullwhip_ratio(records, 1, 10);
    REQUIRE(unity.has_value());
    CHECK(*unity == doctest::Approx(1.0));
    CHECK_THROWS_AS(bullwhip_ratio(records, 0, 10), ConfigError);
    CHECK_THROWS_AS(bullwhip_ratio(records, 1, 11), ConfigError);
}

TEST_CASE("the shock scenario amplifies upstream variance in the baseline") {
    json j = minimal_config();
    j["protocol"] = "a2a";
    j["rounds"] = 20;
    const ExperimentResult result = run_experiment(config_from_json(j));
    const auto bw = bullwhip_ratio(result.trials[0].rounds, 8, 20);
    REQUIRE(bw.has_value());
    CHECK(*bw > 1.0);
}

TEST_CASE("sensitivity exchange undercuts the baseline's cost") {
    json j = minimal_config();
    j["rounds"] = 20;
    j["trials"] = 5;
    const ExperimentResult rep_result = run_experiment(config_from_json(j));
    j["protocol"] = "a2a";
    const ExperimentResult a2a_result = run_experiment(config_from_json(j));
    CHECK(rep_result.aggregate.at("total_cost").mean <
          a2a_result.aggregate.at("total_cost").mean);
}

TEST_CASE("written JSON reads back to the in-memory results") {
    const ExperimentResult result = run_experiment(config_from_json(minimal_config()));
    const std::string path = "harness_roundtrip_tmp.json";
    write_results(result, path, "json");
    const json loaded = json::parse(read_file(path));
    CHECK(loaded == results_to_json(result));
    std::remove(path.c_str());
}

TEST_CASE("CSV row count is trials x rounds x metrics, plus the header") {
    json j = minimal_config();
    j["trials"] = 2;
    j["rounds"] = 3;
    const ExperimentResult result = run_experiment(config_from_json(j));
    const std::string csv = results_to_csv(result);
    const std::size_t rows = std::count(csv.begin(), csv.end(), '\n');
    const std::size_t metrics = result.trials[0].rounds[0].size();
    CHECK(rows == 1 + 2 * 3 * metrics);
}

TEST_CASE("plot-data extracts one metric in long format") {
    json j = minimal_config();
    j["trials"] = 2;
    j["rounds"] = 3;
    const json results = results_to_json(run_experiment(config_from_json(j)));
    const std::string csv = plot_data_csv(results, "cost_total");
    CHECK(csv.rfind("trial,round,cost_total\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3);
    CHECK_THROWS_AS(plot_data_csv(json::object(), "cost_total"), ConfigError);
}

TEST_CASE("results schema matches the frozen golden fixture") {
    json j = minimal_config();
    j["name"] = "golden";
    const ExperimentResult result = run_experiment(config_from_json(j));
    const std::string golden = read_file(std::string(FIXTURE_DIR) + "/golden_results.json");
    CHECK(results_to_json(result).dump(2) + "\n" == golden);
}

TEST_CASE("expectations compare aggregate means against bounds") {
    json j = minimal_config();
    j["expect"] = {{"max", {{"total_cost", 1e9}}}, {"min", {{"total_cost", 0.0}}}};
    ExperimentResult ok = run_experiment(config_from_json(j));
    CHECK(check_expectations(ok).empty());

    j["expect"] = {{"max", {{"total_cost", 0.0}}}};
    ExperimentResult bad = run_experiment(config_from_json(j));
    const auto failures = check_expectations(bad);
    REQUIRE(failures.size() == 1);
    CHECK(failures[0].find("total_cost") != std::string::npos);
}
