#include "rep/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>

#include "rep/bus.hpp"
#include "rep/client.hpp"
#include "rep/errors.hpp"
#include "rep/rng.hpp"
#include "rep/wire.hpp"

namespace rep::harness {

using nlohmann::json;

namespace {

std::string protocol_name(Protocol p) { return p == Protocol::rep ? "rep" : "a2a"; }
std::string updater_name(UpdaterKind k) {
    switch (k) {
        case UpdaterKind::numerical_grad: return "numerical_grad";
        case UpdaterKind::textual_grad: return "textual_grad";
        case UpdaterKind::none: return "none";
    }
    return "?";
}
std::string consensus_name(ConsensusRule r) {
    return r == ConsensusRule::median_coordinate ? "median_coordinate" : "none";
}

double variance(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double sq = 0.0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    return sq / static_cast<double>(xs.size());
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    std::vector<std::string> errors;
    auto fail = [&](const std::string& msg) { errors.push_back(msg); };

    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    if (j.contains("name")) cfg.name = j.value("name", "");

    if (!j.contains("domain")) fail("missing 'domain'");
    else {
        try {
            cfg.domain = domain_from_string(j["domain"].get<std::string>());
        } catch (const std::exception& e) {
            fail(e.what());
        }
    }

    const std::string protocol = j.value("protocol", "rep");
    if (protocol == "rep") cfg.protocol = Protocol::rep;
    else if (protocol == "a2a") cfg.protocol = Protocol::a2a;
    else fail("'protocol' must be rep|a2a, got '" + protocol + "'");

    const std::string updater = j.value("updater", "numerical_grad");
    if (updater == "numerical_grad") cfg.updater = UpdaterKind::numerical_grad;
    else if (updater == "textual_grad") cfg.updater = UpdaterKind::textual_grad;
    else fail("'updater' must be numerical_grad|textual_grad, got '" + updater + "'");

    const std::string consensus = j.value("consensus", "none");
    if (consensus == "median_coordinate") cfg.consensus = ConsensusRule::median_coordinate;
    else if (consensus == "none") cfg.consensus = ConsensusRule::none;
    else fail("'consensus' must be median_coordinate|none, got '" + consensus + "'");

    cfg.n_agents = j.value("n_agents", cfg.n_agents);
    if (cfg.n_agents < 2) fail("'n_agents' must be >= 2");
    cfg.sparsity = j.value("sparsity", cfg.sparsity);
    if (cfg.sparsity < 0.0 || cfg.sparsity >= 1.0) fail("'sparsity' must be in [0, 1)");
    cfg.rounds = j.value("rounds", cfg.rounds);
    if (cfg.rounds < 1) fail("'rounds' must be >= 1");
    cfg.trials = j.value("trials", cfg.trials);
    if (cfg.trials < 1) fail("'trials' must be >= 1");
    cfg.seed = j.value("seed", cfg.seed);
    cfg.eta = j.value("eta", cfg.eta);
    if (cfg.eta <= 0.0) fail("'eta' must be > 0");
    cfg.convergence_threshold = j.value("convergence_threshold", cfg.convergence_threshold);
    if (cfg.convergence_threshold <= 0.0 || cfg.convergence_threshold > 1.0)
        fail("'convergence_threshold' must be in (0, 1]");
    cfg.capture_transcript = j.value("capture_transcript", false);

    if (j.contains("domain_params")) {
        const json& d = j["domain_params"];
        if (!d.is_object()) fail("'domain_params' must be an object");
        else {
            auto num = [&](const char* key, auto& field) {
                if (d.contains(key)) field = d[key].get<std::decay_t<decltype(field)>>();
            };
            // Beer.
            num("shipping_delay", cfg.beer.shipping_delay);
            num("order_delay", cfg.beer.order_delay);
            num("initial_inventory", cfg.beer.initial_inventory);
            num("base_demand", cfg.beer.base_demand);
            num("shock_round", cfg.beer.shock_round);
            num("shock_demand", cfg.beer.shock_demand);
            num("demand_noise", cfg.beer.demand_noise);
            num("holding_cost", cfg.beer.holding_cost);
            num("backlog_cost", cfg.beer.backlog_cost);
            num("alpha", cfg.beer.alpha);
            num("initial_target_inventory", cfg.beer.initial_target_inventory);
            num("initial_adjustment_factor", cfg.beer.initial_adjustment_factor);
            num("order_clause_scale", cfg.beer.order_clause_scale);
            num("target_min", cfg.beer.target_min);
            num("target_max", cfg.beer.target_max);
            num("factor_min", cfg.beer.factor_min);
            num("factor_max", cfg.beer.factor_max);
            // Fishbanks.
            num("n_zones", cfg.fishbanks.n_zones);
            num("growth_rate", cfg.fishbanks.growth_rate);
            num("carrying_capacity", cfg.fishbanks.carrying_capacity);
            num("catchability", cfg.fishbanks.catchability);
            num("max_harvest_fraction", cfg.fishbanks.max_harvest_fraction);
            num("price", cfg.fishbanks.price);
            num("cost_per_boat", cfg.fishbanks.cost_per_boat);
            num("fleet_max", cfg.fishbanks.fleet_max);
            num("base_desired_boats", cfg.fishbanks.base_desired_boats);
            num("escalation_boats", cfg.fishbanks.escalation_boats);
            num("sustainability_threshold", cfg.fishbanks.sustainability_threshold);
            num("initial_quota", cfg.fishbanks.initial_quota);
            num("quota_elasticity", cfg.fishbanks.quota_elasticity);
            // Movie.
            num("initial_price", cfg.movie.initial_price);
            num("initial_time", cfg.movie.initial_time);
            num("tolerance_min", cfg.movie.tolerance_min);
            num("tolerance_max", cfg.movie.tolerance_max);
        }
    }

    if (j.contains("expect")) {
        const json& e = j["expect"];
        if (!e.is_object()) fail("'expect' must be an object");
        else {
            if (e.contains("max"))
                for (auto it = e["max"].begin(); it != e["max"].end(); ++it)
                    cfg.expect_max[it.key()] = it.value().get<double>();
            if (e.contains("min"))
                for (auto it = e["min"].begin(); it != e["min"].end(); ++it)
                    cfg.expect_min[it.key()] = it.value().get<double>();
        }
    }

    static const std::set<std::string> kKnown = {
        "name", "domain", "protocol", "updater", "consensus", "n_agents", "sparsity",
        "rounds", "trials", "seed", "eta", "convergence_threshold",
        "capture_transcript", "domain_params", "expect"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!kKnown.count(it.key())) fail("unknown config key '" + it.key() + "'");

    if (!errors.empty()) {
        std::string joined = "invalid config:";
        for (const auto& e : errors) joined += "\n  - " + e;
        throw ConfigError(joined);
    }
    cfg.beer.n_stages = cfg.n_agents;
    cfg.fishbanks.n_companies = cfg.n_agents;
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["domain"] = to_string(cfg.domain);
    j["protocol"] = protocol_name(cfg.protocol);
    j["updater"] = updater_name(cfg.updater);
    j["consensus"] = consensus_name(cfg.consensus);
    j["n_agents"] = cfg.n_agents;
    j["sparsity"] = cfg.sparsity;
    j["rounds"] = cfg.rounds;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["eta"] = cfg.eta;
    j["convergence_threshold"] = cfg.convergence_threshold;
    json d;
    switch (cfg.domain) {
        case Domain::beer:
            d["shipping_delay"] = cfg.beer.shipping_delay;
            d["order_delay"] = cfg.beer.order_delay;
            d["initial_inventory"] = cfg.beer.initial_inventory;
            d["base_demand"] = cfg.beer.base_demand;
            d["shock_round"] = cfg.beer.shock_round;
            d["shock_demand"] = cfg.beer.shock_demand;
            d["demand_noise"] = cfg.beer.demand_noise;
            d["holding_cost"] = cfg.beer.holding_cost;
            d["backlog_cost"] = cfg.beer.backlog_cost;
            d["alpha"] = cfg.beer.alpha;
            d["order_clause_scale"] = cfg.beer.order_clause_scale;
            break;
        case Domain::fishbanks:
            d["n_zones"] = cfg.fishbanks.n_zones;
            d["growth_rate"] = cfg.fishbanks.growth_rate;
            d["carrying_capacity"] = cfg.fishbanks.carrying_capacity;
            d["catchability"] = cfg.fishbanks.catchability;
            d["max_harvest_fraction"] = cfg.fishbanks.max_harvest_fraction;
            d["price"] = cfg.fishbanks.price;
            d["cost_per_boat"] = cfg.fishbanks.cost_per_boat;
            d["fleet_max"] = cfg.fishbanks.fleet_max;
            d["base_desired_boats"] = cfg.fishbanks.base_desired_boats;
            d["escalation_boats"] = cfg.fishbanks.escalation_boats;
            d["sustainability_threshold"] = cfg.fishbanks.sustainability_threshold;
            d["initial_quota"] = cfg.fishbanks.initial_quota;
            d["quota_elasticity"] = cfg.fishbanks.quota_elasticity;
            break;
        case Domain::movie:
            d["initial_price"] = cfg.movie.initial_price;
            d["initial_time"] = cfg.movie.initial_time;
            d["tolerance_min"] = cfg.movie.tolerance_min;
            d["tolerance_max"] = cfg.movie.tolerance_max;
            break;
    }
    j["domain_params"] = d;
    return j;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return config_from_json(j);
}

std::optional<int> rounds_to_convergence(const std::vector<MetricsRecord>& records,
                                         double threshold) {
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        const auto a = records[i].find("consensus_fraction");
        const auto b = records[i + 1].find("consensus_fraction");
        if (a == records[i].end() || b == records[i + 1].end()) continue;
        if (a->second >= threshold && b->second >= threshold)
            return static_cast<int>(i) + 1;
    }
    return std::nullopt;
}

std::optional<double> bullwhip_ratio(const std::vector<MetricsRecord>& records,
                                     int first_round, int last_round) {
    std::vector<double> orders, demand;
    for (int r = first_round; r <= last_round; ++r) {
        if (r < 1 || r > static_cast<int>(records.size()))
            throw ConfigError("bullwhip_ratio: window outside the run");
        orders.push_back(records[r - 1].at("order_manufacturer"));
        demand.push_back(records[r - 1].at("demand"));
    }
    const double dv = variance(demand);
    if (dv == 0.0) return std::nullopt;
    return variance(orders) / dv;
}

namespace {

// ---------------------------------------------------------------- beer ----

TrialResult run_beer_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
    beer::Params params = cfg.beer;
    params.n_stages = cfg.n_agents;
    beer::BeerGame env(params, seed);
    Bus bus(cfg.capture_transcript);

    const auto ids = domain_agent_ids(Domain::beer, params.n_stages);
    const NetworkTopology topology = path_topology(ids);

    const bool is_rep = cfg.protocol == Protocol::rep;
    const SensitivityKind style = cfg.updater == UpdaterKind::textual_grad
                                      ? SensitivityKind::textual
                                      : SensitivityKind::numeric;

    std::vector<RepClient> clients;
    clients.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        ClientConfig cc;
        cc.id = ids[i];
        cc.policy = std::make_shared<beer::BeerPolicy>(
            static_cast<int>(i), params, is_rep ? beer::Mode::rep : beer::Mode::a2a,
            style);
        cc.bus = &bus;
        cc.updater = beer::updater_config(params, cfg.updater, cfg.eta);
        if (!is_rep) cc.updater.kind = UpdaterKind::none;
        cc.consensus = ConsensusRule::none;
        cc.initial_state = beer::initial_state(params);
        cc.neighbors = topology.neighbors(ids[i]);
        cc.include_own_sensitivity = true;
        clients.push_back(configure(std::move(cc)));
    }

    TrialResult trial;
    trial.seed = seed;
    Signals prev_signals;
    double total_cost = 0.0;
    for (int t = 0; t < cfg.rounds; ++t) {
        env.begin_round();
        const Signals sig = env.signals();
        std::vector<int> orders(ids.size(), 0);
        MetricsRecord rec;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const RoundOutput out = clients[i].run_round(env.observe(i), prev_signals);
            orders[i] = static_cast<int>(out.decision.payload.at("order_quantity"));
            rec["order_stage" + std::to_string(i)] = orders[i];
            if (i == 0) {
                rec["theta_target_inventory"] = out.state.at(beer::kTargetInventory);
                rec["theta_adjustment_factor"] = out.state.at(beer::kAdjustmentFactor);
            }
        }
        rec["demand"] = env.current_demand();
        const auto step = env.step(orders);
        double round_cost = 0.0;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            rec["cost_stage" + std::to_string(i)] = step.stage_costs[i];
            round_cost += step.stage_costs[i];
        }
        rec["cost_total"] = round_cost;
        rec["order_manufacturer"] = orders.back();
        rec["backlog_total"] = env.total_backlog();
        rec["inventory_total"] = env.total_inventory();
        total_cost += round_cost;
        trial.rounds.push_back(std::move(rec));
        prev_signals = sig;
    }

    trial.summary["total_cost"] = total_cost;
    if (cfg.rounds >= 8) {
        if (auto bw = bullwhip_ratio(trial.rounds, 8, cfg.rounds))
            trial.summary["bullwhip_8_end"] = *bw;
        std::vector<double> early, late;
        for (int r = 4; r <= std::min(7, cfg.rounds); ++r)
            early.push_back(trial.rounds[r - 1].at("order_manufacturer"));
        for (int r = 8; r <= cfg.rounds; ++r)
            late.push_back(trial.rounds[r - 1].at("order_manufacturer"));
        trial.summary["manufacturer_var_4_7"] = variance(early);
        trial.summary["manufacturer_var_8_end"] = variance(late);
    }
    trial.summary["customer_demand_total"] = env.total_customer_demand();
    trial.summary["customer_served_total"] = env.total_customer_served();
    trial.message_count = bus.delivered_count();
    trial.message_bytes = bus.delivered_bytes();
    trial.transcript = bus.transcript();
    return trial;
}

// ----------------------------------------------------------- fishbanks ----

TrialResult run_fishbanks_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
    fishbanks::Params params = cfg.fishbanks;
    params.n_companies = cfg.n_agents;
    fishbanks::Fishbanks env(params, seed);
    Bus bus(cfg.capture_transcript);

    const auto ids = domain_agent_ids(Domain::fishbanks, params.n_companies);
    const NetworkTopology topology = complete_topology(ids);

    const bool is_rep = cfg.protocol == Protocol::rep;
    const SensitivityKind style = cfg.updater == UpdaterKind::textual_grad
                                      ? SensitivityKind::textual
                                      : SensitivityKind::numeric;

    Rng jitter_rng(seed * 7919 + 17);
    std::vector<RepClient> clients;
    clients.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const int jitter = static_cast<int>(jitter_rng.uniform_int(-1, 1));
        ClientConfig cc;
        cc.id = ids[i];
        cc.policy = std::make_shared<fishbanks::FishbanksPolicy>(
            static_cast<int>(i), params,
            is_rep ? fishbanks::Mode::rep : fishbanks::Mode::a2a, style, jitter);
        cc.bus = &bus;
        cc.updater = fishbanks::updater_config(params, cfg.updater, cfg.eta);
        if (!is_rep) cc.updater.kind = UpdaterKind::none;
        cc.consensus = ConsensusRule::none;
        fishbanks::Params init_params = params;
        // The baseline's private quota never binds: decisions-only agents
        // have no shared restraint variable in practice.
        if (!is_rep) init_params.initial_quota = params.quota_max;
        cc.initial_state = fishbanks::initial_state(init_params);
        cc.neighbors = topology.neighbors(ids[i]);
        clients.push_back(configure(std::move(cc)));
    }

    TrialResult trial;
    trial.seed = seed;
    Signals prev_signals;
    int seasons_above = 0;
    for (int t = 0; t < cfg.rounds; ++t) {
        env.begin_season();
        const Signals sig = env.signals();
        std::vector<std::vector<int>> deployments(ids.size());
        MetricsRecord rec;
        double quota_sum = 0.0;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const RoundOutput out = clients[i].run_round(env.observe(i), prev_signals);
            std::vector<int> alloc(params.n_zones, 0);
            for (int z = 0; z < params.n_zones; ++z)
                alloc[z] = static_cast<int>(
                    out.decision.payload.at("boats_zone" + std::to_string(z)));
            deployments[i] = std::move(alloc);
            quota_sum += out.state.at(fishbanks::kSustainableQuota);
        }
        const auto season = env.step(deployments);
        double fleet = 0.0, profit_season = 0.0, catch_total = 0.0;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (int z = 0; z < params.n_zones; ++z) fleet += deployments[i][z];
            profit_season += season.company_profit[i];
            catch_total += season.company_catch[i];
        }
        double pop_total = 0.0;
        for (int z = 0; z < params.n_zones; ++z) pop_total += env.population(z);
        const double index = env.sustainability_index();
        if (index >= params.sustainability_threshold) ++seasons_above;

        rec["sustainability_index"] = index;
        rec["population_total"] = pop_total;
        rec["fleet_total"] = fleet;
        rec["catch_total"] = catch_total;
        rec["profit_season_total"] = profit_season;
        rec["theta_quota_mean"] = quota_sum / static_cast<double>(ids.size());
        // Fleet-size dispersion, logged as a coordination stand-in.
        {
            std::vector<double> per_company(ids.size(), 0.0);
            for (std::size_t i = 0; i < ids.size(); ++i)
                for (int z = 0; z < params.n_zones; ++z)
                    per_company[i] += deployments[i][z];
            rec["fleet_dispersion"] = std::sqrt(variance(per_company));
        }
        trial.rounds.push_back(std::move(rec));
        prev_signals = sig;
    }

    double final_profit = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i) final_profit += env.cumulative_profit(i);
    trial.summary["seasons_above_threshold"] = seasons_above;
    trial.summary["final_profit_total"] = final_profit;
    trial.summary["final_profit_mean"] = final_profit / static_cast<double>(ids.size());
    trial.summary["final_sustainability"] = env.sustainability_index();
    trial.message_count = bus.delivered_count();
    trial.message_bytes = bus.delivered_bytes();
    trial.transcript = bus.transcript();
    return trial;
}

// --------------------------------------------------------------- movie ----

SensitivityMessage state_message(int round, const AgentId& sender,
                                 const CoordinationState& state) {
    SensitivityMessage msg;
    msg.round = round;
    msg.sender = sender;
    for (const auto& [name, value] : state.variables()) msg.decision.payload[name] = value;
    msg.sensitivity = Sensitivity::make_numeric({});
    return msg;
}

TrialResult run_movie_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
    const movie::Params params = cfg.movie;
    Bus bus(cfg.capture_transcript);
    const NetworkTopology topology = make_topology(Domain::movie, cfg.n_agents,
                                                   cfg.sparsity, seed);
    const auto ids = domain_agent_ids(Domain::movie, cfg.n_agents);

    const bool is_rep = cfg.protocol == Protocol::rep;
    const bool with_consensus = is_rep && cfg.consensus == ConsensusRule::median_coordinate;
    const SensitivityKind style = cfg.updater == UpdaterKind::textual_grad
                                      ? SensitivityKind::textual
                                      : SensitivityKind::numeric;

    Rng pref_rng(seed * 1000003 + 5);
    std::vector<movie::MoviePreference> prefs;
    std::vector<RepClient> clients;
    clients.reserve(ids.size());
    for (const auto& id : ids) {
        prefs.push_back(movie::sample_preference(params, pref_rng));
        ClientConfig cc;
        cc.id = id;
        cc.policy = std::make_shared<movie::MoviePolicy>(
            prefs.back(), is_rep ? movie::Mode::rep : movie::Mode::a2a, style);
        cc.bus = &bus;
        cc.updater = movie::updater_config(cfg.updater, cfg.eta);
        if (!is_rep) cc.updater.kind = UpdaterKind::none;
        cc.consensus = is_rep ? cfg.consensus : ConsensusRule::none;
        cc.initial_state = movie::initial_state(params);
        cc.neighbors = topology.neighbors(id);
        clients.push_back(configure(std::move(cc)));
    }
    if (with_consensus) {
        bus.register_agent("consensus");
        for (const auto& id : ids) bus.register_agent("shared/" + id);
    }

    const Signals round_signals = {{"round", Direction::increase}};

    TrialResult trial;
    trial.seed = seed;
    for (int t = 0; t < cfg.rounds; ++t) {
        // Stage 1: the standard REP round.
        Observation obs;
        obs.signals = round_signals;
        std::vector<CoordinationState> states;
        std::vector<Decision> decisions;
        for (auto& client : clients) {
            RoundOutput out = client.run_round(obs, round_signals);
            states.push_back(std::move(out.state));
            decisions.push_back(std::move(out.decision));
        }

        MetricsRecord rec;
        double fraction = 0.0;
        if (with_consensus) {
            // Stage 2: global reduction over the bus, then a re-vote on the
            // shared proposal.
            for (std::size_t i = 0; i < ids.size(); ++i)
                bus.multicast(ids[i], {"consensus"}, state_message(t, ids[i], states[i]));
            const auto collected = bus.drain_inbox("consensus", t);
            if (collected.size() != ids.size())
                throw ProtocolError("consensus phase: missing state uploads");
            std::vector<CoordinationState> uploaded;
            for (const auto& msg : collected) {
                CoordinationState s = movie::initial_state(params);
                for (const auto& [name, value] : msg.decision.payload) s.set(name, value);
                uploaded.push_back(std::move(s));
            }
            const CoordinationState shared = median_coordinatewise(uploaded);
            for (std::size_t i = 0; i < ids.size(); ++i) {
                bus.multicast("consensus", {"shared/" + ids[i]},
                              state_message(t, "consensus", shared));
                bus.drain_inbox("shared/" + ids[i], t);
                clients[i].overwrite_state(shared);
            }
            int participating = 0;
            for (std::size_t i = 0; i < ids.size(); ++i) {
                const auto [u, in, s] = movie::movie_utility(prefs[i], shared);
                (void)u;
                (void)s;
                if (in) ++participating;
            }
            fraction = static_cast<double>(participating) / static_cast<double>(ids.size());
            rec["theta_price"] = shared.at(movie::kPrice);
            rec["theta_time"] = shared.at(movie::kTime);
        } else {
            const ConsensusResult res = run_consensus(
                states, decisions, ConsensusRule::none,
                [](const Decision& d, const std::optional<CoordinationState>&) {
                    return d.payload.at("participate") > 0.5;
                });
            fraction = res.agreement_fraction;
            rec["theta_price"] = states.front().at(movie::kPrice);
            rec["theta_time"] = states.front().at(movie::kTime);
        }

        double stage1_participation = 0.0;
        for (const auto& d : decisions) stage1_participation += d.payload.at("participate");
        rec["consensus_fraction"] = fraction;
        rec["participation_stage1"] =
            stage1_participation / static_cast<double>(ids.size());
        trial.rounds.push_back(std::move(rec));
    }

    const auto convergence = rounds_to_convergence(trial.rounds, cfg.convergence_threshold);
    trial.summary["converged"] = convergence ? 1.0 : 0.0;
    trial.summary["rounds_to_convergence"] = convergence ? *convergence : -1.0;
    double mean_consensus = 0.0, max_consensus = 0.0;
    for (const auto& rec : trial.rounds) {
        mean_consensus += rec.at("consensus_fraction");
        max_consensus = std::max(max_consensus, rec.at("consensus_fraction"));
    }
    trial.summary["mean_consensus"] = mean_consensus / trial.rounds.size();
    trial.summary["max_consensus"] = max_consensus;
    trial.summary["final_consensus"] = trial.rounds.back().at("consensus_fraction");
    trial.summary["edge_count"] = static_cast<double>(topology.edges().size());
    trial.message_count = bus.delivered_count();
    trial.message_bytes = bus.delivered_bytes();
    trial.transcript = bus.transcript();
    return trial;
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
    switch (cfg.domain) {
        case Domain::beer: return run_beer_trial(cfg, seed);
        case Domain::fishbanks: return run_fishbanks_trial(cfg, seed);
        case Domain::movie: return run_movie_trial(cfg, seed);
    }
    throw ConfigError("run_trial: bad domain");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult result;
    result.config = cfg;
    for (int k = 0; k < cfg.trials; ++k)
        result.trials.push_back(run_trial(cfg, cfg.seed + static_cast<std::uint64_t>(k)));

    for (const auto& [key, _] : result.trials.front().summary) {
        std::vector<double> values;
        for (const auto& t : result.trials) {
            auto it = t.summary.find(key);
            if (it != t.summary.end()) values.push_back(it->second);
        }
        Aggregate agg;
        agg.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
        agg.stddev = std::sqrt(variance(values));
        result.aggregate[key] = agg;
    }
    return result;
}

json results_to_json(const ExperimentResult& result) {
    json j;
    j["config"] = config_to_json(result.config);
    json trials = json::array();
    for (const auto& t : result.trials) {
        json jt;
        jt["seed"] = t.seed;
        jt["message_count"] = t.message_count;
        jt["message_bytes"] = t.message_bytes;
        if (!t.transcript.empty()) jt["transcript"] = t.transcript;
        json rounds = json::array();
        for (const auto& rec : t.rounds) {
            json jr = json::object();
            for (const auto& [k, v] : rec) jr[k] = v;
            rounds.push_back(jr);
        }
        jt["rounds"] = rounds;
        json summary = json::object();
        for (const auto& [k, v] : t.summary) summary[k] = v;
        jt["summary"] = summary;
        trials.push_back(jt);
    }
    j["trials"] = trials;
    json agg = json::object();
    for (const auto& [k, a] : result.aggregate)
        agg[k] = {{"mean", a.mean}, {"stddev", a.stddev}};
    j["aggregate"] = agg;
    return j;
}

std::string results_to_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "trial,seed,round,metric,value\n";
    for (std::size_t k = 0; k < result.trials.size(); ++k) {
        const auto& t = result.trials[k];
        for (std::size_t r = 0; r < t.rounds.size(); ++r)
            for (const auto& [metric, value] : t.rounds[r])
                out << k << ',' << t.seed << ',' << (r + 1) << ',' << metric << ','
                    << value << '\n';
    }
    return out.str();
}

void write_results(const ExperimentResult& result, const std::string& path,
                   const std::string& format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    if (format == "json") out << results_to_json(result).dump(2) << '\n';
    else if (format == "csv") out << results_to_csv(result);
    else throw ConfigError("unknown output format '" + format + "' (csv|json)");
    if (!out) throw IoError("write failed: " + path);
}

std::string plot_data_csv(const json& results, const std::string& metric) {
    std::ostringstream out;
    out << "trial,round," << metric << '\n';
    if (!results.contains("trials"))
        throw ConfigError("plot-data: results document has no 'trials'");
    int k = 0;
    for (const auto& trial : results["trials"]) {
        int r = 1;
        for (const auto& rec : trial["rounds"]) {
            if (rec.contains(metric)) out << k << ',' << r << ',' << rec[metric].get<double>() << '\n';
            ++r;
        }
        ++k;
    }
    return out.str();
}

std::vector<std::string> check_expectations(const ExperimentResult& result) {
    std::vector<std::string> failures;
    auto value_of = [&](const std::string& key, double& out) {
        auto it = result.aggregate.find(key);
        if (it == result.aggregate.end()) return false;
        out = it->second.mean;
        return true;
    };
    for (const auto& [key, bound] : result.config.expect_max) {
        double v;
        if (!value_of(key, v))
            failures.push_back("expectation on unknown summary field '" + key + "'");
        else if (v > bound)
            failures.push_back(key + " mean " + std::to_string(v) + " exceeds max " +
                               std::to_string(bound));
    }
    for (const auto& [key, bound] : result.config.expect_min) {
        double v;
        if (!value_of(key, v))
            failures.push_back("expectation on unknown summary field '" + key + "'");
        else if (v < bound)
            failures.push_back(key + " mean " + std::to_string(v) + " below min " +
                               std::to_string(bound));
    }
    return failures;
}

}  // namespace rep::harness
