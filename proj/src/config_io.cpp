#include "gossip/config_io.hpp"

#include <fstream>
#include <limits>
#include <set>

#include "gossip/errors.hpp"

namespace gossip {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& node, std::string_view section, std::initializer_list<std::string_view> allowed) {
    if (!node.is_object()) throw ConfigError("'" + std::string(section) + "' must be an object");
    for (const auto& [key, value] : node.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError("unknown key '" + key + "' in '" + std::string(section) + "'");
    }
}

double number_at(const json& node, std::string_view section, const char* key, double fallback) {
    if (!node.contains(key)) return fallback;
    const auto& v = node.at(key);
    if (!v.is_number()) throw ConfigError("'" + std::string(section) + "." + key + "' must be a number");
    return v.get<double>();
}

std::uint64_t unsigned_at(const json& node, std::string_view section, const char* key, std::uint64_t fallback) {
    if (!node.contains(key)) return fallback;
    const auto& v = node.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError("'" + std::string(section) + "." + key + "' must be a non-negative integer");
}

RateExpr rate_from_json(const json& v) {
    if (v.is_string()) return RateExpr::parse(v.get<std::string>());
    if (v.is_number()) return RateExpr::constant(v.get<double>());
    throw ConfigError("leave rates must be strings or numbers");
}

}  // namespace

json read_config_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void apply_override(json& document, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("override '" + std::string(assignment) + "' must look like key.path=value");
    }
    const std::string path(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &document;
    std::size_t begin = 0;
    for (;;) {
        const auto dot = path.find('.', begin);
        const std::string key = path.substr(begin, dot == std::string::npos ? std::string::npos : dot - begin);
        if (key.empty()) throw ConfigError("override path '" + path + "' has an empty component");
        if (!node->is_object()) {
            if (!node->is_null()) throw ConfigError("override path '" + path + "' descends into a non-object");
            *node = json::object();
        }
        if (dot == std::string::npos) {
            (*node)[key] = std::move(value);
            return;
        }
        node = &(*node)[key];
        begin = dot + 1;
    }
}

TopologySpec topology_from_json(const json& node, const std::filesystem::path& base_dir) {
    if (node.is_string()) return topology_from_json(json{{"kind", node}}, base_dir);
    reject_unknown_keys(node, "ctmc.states[]", {"kind", "wraparound", "edges", "edges_file", "weighted"});
    if (!node.contains("kind") || !node.at("kind").is_string()) throw ConfigError("topology needs a string 'kind'");
    const TopologyKind kind = parse_topology_kind(node.at("kind").get<std::string>());
    switch (kind) {
        case TopologyKind::Complete: return TopologySpec::complete();
        case TopologyKind::Ring: return TopologySpec::ring();
        case TopologyKind::Disconnected: return TopologySpec::disconnected();
        case TopologyKind::Grid: {
            bool wrap = true;
            if (node.contains("wraparound")) {
                if (!node.at("wraparound").is_boolean()) throw ConfigError("'wraparound' must be a boolean");
                wrap = node.at("wraparound").get<bool>();
            }
            return TopologySpec::grid(wrap);
        }
        case TopologyKind::CustomEdgeList: break;
    }
    TopologySpec spec;
    if (node.contains("edges_file")) {
        std::filesystem::path file = node.at("edges_file").get<std::string>();
        if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
        spec = load_edge_list(file);
    } else if (node.contains("edges")) {
        std::vector<WeightedEdge> edges;
        bool any_weight = false;
        for (const auto& e : node.at("edges")) {
            if (!e.is_array() || e.size() < 2 || e.size() > 3) throw ConfigError("custom edges must be [i, j] or [i, j, w]");
            if (!e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
                throw ConfigError("custom edge endpoints must be non-negative integers");
            }
            WeightedEdge edge{e[0].get<NodeId>(), e[1].get<NodeId>(), 1.0};
            if (e.size() == 3) {
                edge.weight = e[2].get<double>();
                if (!(edge.weight > 0)) throw ConfigError("custom edge weights must be positive");
                any_weight = true;
            }
            edges.push_back(edge);
        }
        spec = TopologySpec::custom(std::move(edges), any_weight);
    } else {
        throw ConfigError("custom topology needs 'edges' or 'edges_file'");
    }
    if (node.contains("weighted")) spec.weighted = node.at("weighted").get<bool>();
    return spec;
}

CtmcSpec ctmc_from_json(const json& node, const std::filesystem::path& base_dir) {
    reject_unknown_keys(node, "ctmc", {"states", "q", "p"});
    if (!node.contains("states") || !node.at("states").is_array() || node.at("states").empty()) {
        throw ConfigError("'ctmc.states' must be a non-empty array");
    }
    CtmcSpec spec;
    for (const auto& s : node.at("states")) spec.states.push_back(topology_from_json(s, base_dir));
    const std::size_t k = spec.states.size();

    if (node.contains("q")) {
        if (!node.at("q").is_array()) throw ConfigError("'ctmc.q' must be an array");
        for (const auto& q : node.at("q")) spec.leave_rates.push_back(rate_from_json(q));
    } else if (k == 1) {
        spec.leave_rates.push_back(RateExpr::constant(1.0));
    } else {
        throw ConfigError("'ctmc.q' is required with more than one state");
    }

    if (node.contains("p")) {
        try {
            spec.transition_probs = node.at("p").get<std::vector<std::vector<double>>>();
        } catch (const json::exception&) {
            throw ConfigError("'ctmc.p' must be a numeric matrix");
        }
    } else if (k == 1) {
        spec.transition_probs = {{0.0}};
    } else if (k == 2) {
        spec.transition_probs = {{0.0, 1.0}, {1.0, 0.0}};
    } else {
        throw ConfigError("'ctmc.p' is required with more than two states");
    }
    spec.validate();
    return spec;
}

LoadedConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
    reject_unknown_keys(doc, "<root>", {"name", "network", "ctmc", "run"});
    LoadedConfig out;
    if (doc.contains("name")) {
        if (!doc.at("name").is_string()) throw ConfigError("'name' must be a string");
        out.name = doc.at("name").get<std::string>();
        if (out.name.find_first_of(",\n\"") != std::string::npos) throw ConfigError("'name' may not contain commas or quotes");
    }
    SimConfig& sim = out.sim;

    const json network = doc.value("network", json::object());
    reject_unknown_keys(network, "network", {"n", "lambda_e", "lambda_s", "lambda"});
    const auto n = unsigned_at(network, "network", "n", 1);
    if (n < 1 || n > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("'network.n' must be >= 1");
    sim.n = static_cast<std::uint32_t>(n);
    sim.lambda_e = number_at(network, "network", "lambda_e", 1.0);
    sim.lambda_s = number_at(network, "network", "lambda_s", 1.0);
    sim.lambda = number_at(network, "network", "lambda", 1.0);

    if (doc.contains("ctmc")) sim.ctmc = ctmc_from_json(doc.at("ctmc"), base_dir);

    const json run = doc.value("run", json::object());
    reject_unknown_keys(run, "run", {"horizon", "burn_in", "seed", "replicates", "mode", "spread_cap"});
    sim.horizon = number_at(run, "run", "horizon", sim.horizon);
    if (run.contains("burn_in")) sim.burn_in = number_at(run, "run", "burn_in", 0.0);
    sim.seed = unsigned_at(run, "run", "seed", 0);
    out.replicates = static_cast<std::uint32_t>(unsigned_at(run, "run", "replicates", 20));
    if (run.contains("mode")) {
        if (!run.at("mode").is_string()) throw ConfigError("'run.mode' must be a string");
        sim.mode = parse_sim_mode(run.at("mode").get<std::string>());
    }
    sim.spread_cap = number_at(run, "run", "spread_cap", sim.spread_cap);
    sim.validate();
    return out;
}

json run_result_json(const SimConfig& config, const RunResult& result) {
    json j;
    j["n"] = config.n;
    j["seed"] = config.seed;
    j["horizon"] = config.horizon;
    j["burn_in"] = config.effective_burn_in();
    j["network_avg_age"] = result.network_avg_age;
    j["per_node_age"] = result.per_node_age;
    j["event_counts"] = {{"source_updates", result.counts.source_updates},
                         {"deliveries", result.counts.deliveries},
                         {"gossip", result.counts.gossip},
                         {"gossip_accepted", result.counts.gossip_accepted},
                         {"switches", result.counts.switches}};
    if (result.spread) {
        j["spread_time"] = result.spread->spread_time;
        j["n0_count"] = result.spread->source_updates;
    }
    return j;
}

json analysis_json(const CtmcSpec& spec, double n, const CtmcAnalysis& analysis) {
    json j;
    j["n"] = n;
    std::vector<std::string> kinds;
    for (const auto& s : spec.states) kinds.push_back(to_string(s.kind));
    j["states"] = kinds;
    const auto k = analysis.generator.rows();
    json q = json::array();
    for (Eigen::Index r = 0; r < k; ++r) {
        std::vector<double> row(static_cast<std::size_t>(k));
        for (Eigen::Index c = 0; c < k; ++c) row[static_cast<std::size_t>(c)] = analysis.generator(r, c);
        q.push_back(row);
    }
    j["Q"] = q;
    j["pi"] = std::vector<double>(analysis.stationary.data(), analysis.stationary.data() + k);
    json moments = json::array();
    for (std::size_t s = 0; s < analysis.return_moments.size(); ++s) {
        const auto si = static_cast<Eigen::Index>(s);
        const double kac = 1.0 / (analysis.stationary(si) * -analysis.generator(si, si));
        moments.push_back({{"state", s},
                           {"mean", analysis.return_moments[s].mean},
                           {"variance", analysis.return_moments[s].variance},
                           {"kac_mean", kac}});
    }
    j["return_moments"] = moments;
    return j;
}

}  // namespace gossip
