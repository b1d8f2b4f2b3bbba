#include "ctxvuln/pipeline.hpp"

#include <filesystem>
#include <ostream>

#include "ctxvuln/errors.hpp"
#include "ctxvuln/logmine.hpp"
#include "ctxvuln/netdep.hpp"
#include "ctxvuln/report.hpp"
#include "json_util.hpp"

namespace fs = std::filesystem;

namespace ctxvuln {

using detail::json;

namespace {

std::string resolve(const std::string& path, const std::string& base_dir) {
    if (path.empty() || base_dir.empty()) return path;
    fs::path p(path);
    if (p.is_absolute()) return path;
    return (fs::path(base_dir) / p).lexically_normal().string();
}

template <typename T>
void take(const json& doc, const char* key, T& out) {
    if (!doc.contains(key)) return;
    try {
        out = doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("config key \"") + key + "\": " + e.what());
    }
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& text, const std::string& base_dir) {
    json doc = detail::parse_json(text, "config");
    if (!doc.is_object()) throw ParseError("config: expected a JSON object");
    PipelineConfig c;
    take(doc, "topology", c.topology);
    take(doc, "topology_format", c.topology_format);
    take(doc, "events", c.events);
    take(doc, "flows", c.flows);
    take(doc, "hosts", c.hosts);
    take(doc, "endpoints", c.endpoints);
    take(doc, "vulndb", c.vulndb);
    take(doc, "window_ms", c.window_ms);
    take(doc, "min_support", c.min_support);
    take(doc, "min_confidence", c.min_confidence);
    take(doc, "threshold", c.threshold);
    take(doc, "damping", c.rank.damping);
    take(doc, "max_iterations", c.rank.max_iterations);
    take(doc, "tolerance", c.rank.tolerance);
    if (doc.contains("weights")) {
        const json& w = doc.at("weights");
        take(w, "ti", c.weights.ti);
        take(w, "ni", c.weights.ni);
        take(w, "si", c.weights.si);
    }
    if (doc.contains("aggregator"))
        c.aggregator = aggregator_from_string(doc.at("aggregator").get<std::string>());
    take(doc, "simulate", c.simulate);
    take(doc, "gateway", c.gateway);

    for (std::string* p : {&c.topology, &c.events, &c.flows, &c.hosts, &c.endpoints, &c.vulndb})
        *p = resolve(*p, base_dir);
    return c;
}

PipelineConfig load_pipeline_config(const std::string& path) {
    return parse_pipeline_config(detail::read_file(path),
                                 fs::path(path).parent_path().string());
}

PipelineResult run_pipeline(const PipelineConfig& config, const std::string& out_dir,
                            std::ostream* log) {
    // fail on config holes before any stage runs
    struct Input {
        const char* what;
        const std::string* path;
    };
    for (const Input& in : {Input{"topology", &config.topology}, Input{"events", &config.events},
                            Input{"flows", &config.flows}, Input{"hosts", &config.hosts},
                            Input{"endpoints", &config.endpoints},
                            Input{"vulndb", &config.vulndb}}) {
        if (in.path->empty())
            throw ValidationError(std::string("config is missing the ") + in.what + " path");
        if (!fs::exists(*in.path))
            throw ValidationError(std::string(in.what) + " file not found: " + *in.path);
    }

    fs::create_directories(out_dir);
    PipelineResult result;
    auto emit = [&](const std::string& name, const std::string& content) {
        std::string path = (fs::path(out_dir) / name).string();
        detail::write_file(path, content);
        result.written.push_back(path);
        if (log) *log << "wrote " << path << '\n';
    };

    auto topo_format = [&]() {
        if (config.topology_format == "json") return TopoFormat::json;
        if (config.topology_format == "csv") return TopoFormat::csv;
        if (!config.topology_format.empty())
            throw ValidationError("unknown topology format \"" + config.topology_format + "\"");
        std::string ext = fs::path(config.topology).extension().string();
        if (ext == ".csv") return TopoFormat::csv;
        return TopoFormat::json;
    }();

    if (log) *log << "parsing topology " << config.topology << '\n';
    TopologyGraph topo = parse_topology(detail::read_file(config.topology), topo_format);
    emit("topology.json", serialize_topology(topo, TopoFormat::json));

    if (log) *log << "mining software dependencies from " << config.events << '\n';
    auto events = parse_events(detail::read_file(config.events));
    auto sw_deps = mine_software_dependencies(events, config.window_ms, config.min_support,
                                              config.min_confidence);
    emit("sw_deps.json", serialize_software_dependencies(sw_deps));
    emit("sw_deps.txt", render_software_dependencies(sw_deps));

    if (log) *log << "mining network dependencies from " << config.flows << '\n';
    auto flows = parse_flows(detail::read_file(config.flows));
    auto hosts = parse_host_map(detail::read_file(config.hosts));
    auto net_deps = mine_network_dependencies(flows, hosts, config.threshold);
    emit("net_deps.json", serialize_network_dependencies(net_deps));
    emit("net_deps.txt", render_dependency_listing(net_deps));

    if (log) *log << "building dependency graph\n";
    auto endpoints = parse_endpoint_map(detail::read_file(config.endpoints));
    Cdg cdg = build_cdg(topo, sw_deps, net_deps, endpoints, &result.dropped);
    emit("cdg.json", serialize_cdg(cdg));
    {
        json jd = json::array();
        for (const auto& d : result.dropped)
            jd.push_back({{"from", d.from},
                          {"to", d.to},
                          {"kind", to_string(d.kind)},
                          {"weight", d.weight}});
        emit("dropped_edges.json", jd.dump(2) + "\n");
        if (log && !result.dropped.empty())
            *log << "dropped " << result.dropped.size() << " cycle-closing edge(s)\n";
    }

    if (log) *log << "matching vulnerabilities from " << config.vulndb << '\n';
    auto db = load_vulndb(detail::read_file(config.vulndb));
    result.match_report = match_vulnerabilities(db, cdg);
    emit("matches.json", serialize_match_report(result.match_report));

    if (log) *log << "scoring\n";
    auto importances = compute_importances(cdg, config.rank);
    {
        json ji = json::array();
        for (const auto& t : importances)
            ji.push_back({{"node", t.node}, {"ti", t.ti}, {"ni", t.ni}, {"si", t.si}});
        emit("importances.json", ji.dump(2) + "\n");
    }
    result.scores = score_vulnerabilities(result.match_report.matches, importances,
                                          config.weights, config.aggregator, db);
    emit("report.json", render_report(result.scores, ReportFormat::json));
    emit("report.txt", render_report(result.scores, ReportFormat::text));

    if (config.simulate) {
        std::string gateway = config.gateway;
        if (gateway.empty()) {
            for (const auto& n : topo.nodes)
                if (n.kind == NodeKind::gateway) {
                    if (!gateway.empty())
                        throw ValidationError(
                            "multiple gateway nodes; set the gateway explicitly");
                    gateway = n.id;
                }
            if (gateway.empty())
                throw ValidationError("no gateway node in topology; set one to simulate");
        }
        if (log) *log << "simulating fix plans from gateway " << gateway << '\n';
        FixPlan ncvs = contextual_plan(result.scores);
        FixPlan cvss = base_score_plan(result.match_report.matches, db);
        result.comparison =
            compare_plans(cdg, result.match_report.matches, ncvs, cvss, gateway);
        result.simulated = true;
        emit("steps.csv", render_steps_csv(result.comparison));
    }
    return result;
}

}  // namespace ctxvuln
