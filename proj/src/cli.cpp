#include "gossip/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gossip/config_io.hpp"
#include "gossip/errors.hpp"
#include "gossip/experiments.hpp"
#include "gossip/metrics.hpp"
#include "gossip/parallel.hpp"

namespace gossip::cli {

using nlohmann::json;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
    std::vector<std::string> overrides;
    bool mc_check = false;
    std::size_t trials = 200;
};

std::vector<std::uint32_t> parse_n_list(const std::string& text) {
    std::vector<std::uint32_t> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(item, &used);
            if (used != item.size() || v == 0) throw std::invalid_argument(item);
            out.push_back(static_cast<std::uint32_t>(v));
        } catch (const std::logic_error&) {
            throw ConfigError("--n-list entry '" + item + "' is not a positive integer");
        }
    }
    if (out.empty()) throw ConfigError("--n-list is empty");
    return out;
}

// "expr" or "label=expr", comma separated.
std::vector<RateVariant> parse_rates(const std::string& text) {
    std::vector<RateVariant> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        const std::string label = eq == std::string::npos ? item : item.substr(0, eq);
        const std::string expr = eq == std::string::npos ? item : item.substr(eq + 1);
        out.push_back({label, RateExpr::parse(expr)});
    }
    if (out.empty()) throw ConfigError("--rates is empty");
    return out;
}

LoadedConfig load(const GlobalOptions& g) {
    if (g.config_path.empty()) throw ConfigError("--config is required");
    json doc = read_config_document(g.config_path);
    for (const auto& o : g.overrides) apply_override(doc, o);
    auto cfg = config_from_json(doc, std::filesystem::path(g.config_path).parent_path());
    if (g.seed) cfg.sim.seed = *g.seed;
    return cfg;
}

std::string format_or(const GlobalOptions& g, const char* fallback) {
    const std::string f = g.format.empty() ? fallback : g.format;
    if (f != "csv" && f != "json") throw ConfigError("--format must be csv or json");
    return f;
}

json sweep_json(const SweepTable& table) {
    json j;
    j["groups"] = table.groups;
    json fits = json::object();
    for (const auto& rc : table.rate_classes()) {
        if (table.curve(rc).size() < 3) continue;
        fits[rc] = compare_models(table, rc);
    }
    j["fits"] = fits;
    return j;
}

std::string emit_table(const SweepTable& table, const std::string& format) {
    std::ostringstream buf;
    if (format == "csv") {
        write_sweep_csv(buf, table);
    } else {
        buf << sweep_json(table).dump(2) << '\n';
    }
    return buf.str();
}

std::string cmd_simulate(const GlobalOptions& g, const std::string& event_log) {
    LoadedConfig cfg = load(g);
    cfg.sim.mode = SimMode::FullGossip;
    const Network net = prepare_network(cfg.sim);
    RunResult result;
    if (!event_log.empty()) {
        std::ofstream log(event_log);
        if (!log) throw ConfigError("cannot open event log '" + event_log + "'");
        log.precision(17);
        result = run(cfg.sim, net, csv_event_log(log));
    } else {
        result = run(cfg.sim, net);
    }
    const std::string format = format_or(g, "json");
    std::ostringstream buf;
    if (format == "json") {
        buf << run_result_json(cfg.sim, result).dump(2) << '\n';
    } else {
        buf.precision(17);
        buf << kCsvVersionLine << "\nnode,age\n";
        for (std::size_t i = 0; i < result.per_node_age.size(); ++i) buf << i << ',' << result.per_node_age[i] << '\n';
    }
    return buf.str();
}

std::string cmd_sweep(const GlobalOptions& g, const std::string& n_list, const std::string& rates,
                      std::optional<std::uint32_t> replicates) {
    LoadedConfig cfg = load(g);
    SweepPlan plan;
    plan.scenario = cfg.name;
    plan.base = cfg.sim;
    plan.n_list = n_list.empty() ? std::vector<std::uint32_t>{cfg.sim.n} : parse_n_list(n_list);
    if (!rates.empty()) plan.variants = parse_rates(rates);
    plan.replicates = replicates.value_or(cfg.replicates);
    const SweepTable table = run_sweep(plan, cfg.sim.seed, g.jobs);
    return emit_table(table, format_or(g, "csv"));
}

bool every_state_disconnected(const SimConfig& sim, const Network& net) {
    if (sim.n <= 1) return false;
    return std::none_of(net.graphs.begin(), net.graphs.end(), [](const Graph& gr) { return gr.is_connected(); });
}

std::string cmd_spread(const GlobalOptions& g, std::ostream& err) {
    LoadedConfig cfg = load(g);
    cfg.sim.mode = SimMode::SpreadExperiment;
    const Network net = prepare_network(cfg.sim);
    if (every_state_disconnected(cfg.sim, net)) {
        err << "warning: no CTMC state has a connected graph; full spread may never happen\n";
    }
    if (g.trials == 0) throw ConfigError("--trials must be positive");

    std::vector<SpreadOutcome> outcomes(g.trials);
    parallel_for(g.trials, g.jobs, [&](std::size_t trial) {
        SimConfig c = cfg.sim;
        c.seed = derive_seed(cfg.sim.seed, cfg.sim.n, cfg.name + "/spread", trial);
        outcomes[trial] = spread_experiment(c, net);
    });

    std::vector<double> times, counts;
    for (const auto& o : outcomes) {
        times.push_back(o.spread_time);
        counts.push_back(static_cast<double>(o.source_updates));
    }
    const SampleStats t_stats = summarize(times);
    const SampleStats c_stats = summarize(counts);
    const double log_n = std::log(static_cast<double>(std::max<std::uint32_t>(cfg.sim.n, 2)));

    std::ostringstream buf;
    buf.precision(17);
    if (format_or(g, "csv") == "csv") {
        buf << kCsvVersionLine << "\ntrial,T,N0_count\n";
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            buf << i << ',' << outcomes[i].spread_time << ',' << outcomes[i].source_updates << '\n';
        }
        buf << "mean," << t_stats.mean << ',' << c_stats.mean << '\n';
        buf << "ci_low," << t_stats.ci_low << ',' << c_stats.ci_low << '\n';
        buf << "ci_high," << t_stats.ci_high << ',' << c_stats.ci_high << '\n';
        buf << "alpha_log_n," << t_stats.mean / log_n << ',' << c_stats.mean / log_n << '\n';
    } else {
        json j;
        j["n"] = cfg.sim.n;
        j["T"] = times;
        j["N0_count"] = outcomes.empty() ? json::array() : json(counts);
        j["summary"] = {{"T", t_stats},
                        {"N0_count", c_stats},
                        {"alpha_T", t_stats.mean / log_n},
                        {"alpha_N0", c_stats.mean / log_n}};
        if (cfg.sim.ctmc.state_count() == 1 && cfg.sim.ctmc.states[0].kind == TopologyKind::Complete &&
            cfg.sim.n >= 2 && cfg.sim.lambda > 0) {
            j["summary"]["complete_graph_expected_T"] = expected_complete_spread_time(cfg.sim.n, cfg.sim.lambda);
        }
        buf << j.dump(2) << '\n';
    }
    return buf.str();
}

std::string cmd_ctmc(const GlobalOptions& g, double mc_horizon) {
    LoadedConfig cfg = load(g);
    const double n = static_cast<double>(cfg.sim.n);
    const CtmcAnalysis analysis = analyze(cfg.sim.ctmc, n);
    json j = analysis_json(cfg.sim.ctmc, n, analysis);
    if (g.mc_check) {
        const auto rates = evaluate_rates(cfg.sim.ctmc, n);
        Rng rng(cfg.sim.seed);
        const auto path = sample_trajectory(rates, analysis.stationary, rng, mc_horizon);
        const std::size_t k = cfg.sim.ctmc.state_count();
        std::vector<double> occupancy(k, 0.0);
        std::vector<std::vector<double>> intervals(k);
        std::vector<double> last_entry(k, -1.0);
        for (std::size_t s = 0; s < path.size(); ++s) {
            const double end = s + 1 < path.size() ? path[s + 1].entry_time : mc_horizon;
            occupancy[path[s].state] += end - path[s].entry_time;
            // the first segment starts at 0 rather than at an entry
            if (s > 0) {
                if (last_entry[path[s].state] >= 0) intervals[path[s].state].push_back(path[s].entry_time - last_entry[path[s].state]);
                last_entry[path[s].state] = path[s].entry_time;
            }
        }
        json mc;
        mc["horizon"] = mc_horizon;
        for (double& o : occupancy) o /= mc_horizon;
        mc["occupancy"] = occupancy;
        json ret = json::array();
        for (std::size_t s = 0; s < k; ++s) {
            const SampleStats st = summarize(intervals[s]);
            ret.push_back({{"state", s}, {"returns", st.count}, {"mean", st.mean}, {"variance", st.sd * st.sd}});
        }
        mc["return_moments"] = ret;
        j["mc_check"] = mc;
    }
    return j.dump(2) + "\n";
}

std::string cmd_presets_list(const GlobalOptions& g) {
    std::ostringstream buf;
    if (format_or(g, "csv") == "json") {
        json arr = json::array();
        for (const auto& id : preset_ids()) {
            const auto p = preset(id);
            std::vector<std::string> labels;
            for (const auto& v : p.variants) labels.push_back(v.label + "=" + v.rate.text());
            arr.push_back({{"id", id}, {"description", p.description}, {"n_list", p.n_list}, {"variants", labels}});
        }
        buf << arr.dump(2) << '\n';
    } else {
        for (const auto& id : preset_ids()) buf << id << '\t' << preset(id).description << '\n';
    }
    return buf.str();
}

std::string cmd_presets_run(const GlobalOptions& g, const std::string& id, const std::string& n_list,
                            std::optional<std::uint32_t> replicates, std::optional<double> horizon,
                            const std::string& variants) {
    ScenarioPreset p = preset(id);
    if (!n_list.empty()) p.n_list = parse_n_list(n_list);
    if (replicates) p.replicates = *replicates;
    if (horizon) {
        p.burn_in = p.burn_in / p.horizon * *horizon;
        p.horizon = *horizon;
    }
    if (!variants.empty()) {
        std::vector<RateVariant> keep;
        std::stringstream in(variants);
        std::string label;
        while (std::getline(in, label, ',')) {
            auto it = std::find_if(p.variants.begin(), p.variants.end(), [&](const auto& v) { return v.label == label; });
            if (it == p.variants.end()) throw ConfigError("preset '" + id + "' has no variant '" + label + "'");
            keep.push_back(*it);
        }
        p.variants = keep;
    }
    const SweepTable table = run_preset(p, g.seed.value_or(0), g.jobs);
    return emit_table(table, format_or(g, "csv"));
}

void write_output(const GlobalOptions& g, const std::string& text, std::ostream& out) {
    if (g.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(g.out_path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output '" + g.out_path + "'");
    file << text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Version-age simulator for gossip networks on CTMC-switched topologies", "gossip-age"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON config file");
    app.add_option("--out", g.out_path, "write output here instead of stdout");
    app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", g.seed, "base seed (overrides run.seed)");
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--set", g.overrides, "override a config key, e.g. network.n=400")->take_all();
    app.add_flag("--mc-check", g.mc_check, "ctmc: add Monte-Carlo cross-check");
    app.add_option("--trials", g.trials, "spread: number of trials");

    auto* simulate = app.add_subcommand("simulate", "single full-gossip run, JSON result");
    std::string event_log;
    simulate->add_option("--event-log", event_log, "CSV event log (n <= 64)");

    auto* sweep = app.add_subcommand("sweep", "replicated runs over n and rate variants, CSV rows");
    std::string n_list, rates;
    std::optional<std::uint32_t> replicates;
    sweep->add_option("--n-list", n_list, "comma-separated node counts");
    sweep->add_option("--rates", rates, "comma-separated leave-rate expressions ([label=]expr)");
    sweep->add_option("--replicates", replicates, "replicates per point");

    app.add_subcommand("spread", "spread-time experiment, CSV of (trial, T, N0_count)");

    auto* ctmc = app.add_subcommand("ctmc", "generator, stationary distribution and return-time moments");
    double mc_horizon = 1e5;
    ctmc->add_option("--mc-horizon", mc_horizon, "trajectory length for --mc-check");
    ctmc->add_subcommand("analyze", "same as bare 'ctmc'");

    auto* presets = app.add_subcommand("presets", "built-in scenarios");
    presets->require_subcommand(1);
    auto* presets_list = presets->add_subcommand("list", "list preset ids");
    auto* presets_run = presets->add_subcommand("run", "run a preset sweep");
    std::string preset_id, preset_variants, preset_n_list;
    std::optional<std::uint32_t> preset_replicates;
    std::optional<double> preset_horizon;
    presets_run->add_option("id", preset_id, "preset id")->required();
    presets_run->add_option("--replicates", preset_replicates, "replicates per point");
    presets_run->add_option("--horizon", preset_horizon, "simulated time per run (burn-in scales along)");
    presets_run->add_option("--n-list", preset_n_list, "override the preset's node counts");
    presets_run->add_option("--variants", preset_variants, "comma-separated variant labels to run");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        std::string text;
        if (simulate->parsed()) {
            text = cmd_simulate(g, event_log);
        } else if (sweep->parsed()) {
            text = cmd_sweep(g, n_list, rates, replicates);
        } else if (app.got_subcommand("spread")) {
            text = cmd_spread(g, err);
        } else if (ctmc->parsed()) {
            text = cmd_ctmc(g, mc_horizon);
        } else if (presets_list->parsed()) {
            text = cmd_presets_list(g);
        } else if (presets_run->parsed()) {
            text = cmd_presets_run(g, preset_id, preset_n_list, preset_replicates, preset_horizon, preset_variants);
        }
        write_output(g, text, out);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const AnalysisError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const RuntimeGuardError& e) {
        err << "error: " << e.what() << '\n';
        return kExitGuard;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace gossip::cli
