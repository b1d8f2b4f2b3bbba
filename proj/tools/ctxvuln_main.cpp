// ctxvuln: contextual vulnerability scoring toolchain.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ctxvuln/cdg.hpp"
#include "ctxvuln/errors.hpp"
#include "ctxvuln/fixsim.hpp"
#include "ctxvuln/logmine.hpp"
#include "ctxvuln/netdep.hpp"
#include "ctxvuln/pipeline.hpp"
#include "ctxvuln/report.hpp"
#include "ctxvuln/scoring.hpp"
#include "ctxvuln/topology.hpp"
#include "ctxvuln/vulnmatch.hpp"

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir;
    bool verbose = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ctxvuln::ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --out targets land under --out-dir when they are relative
void write_output(const GlobalOpts& g, const std::string& out, const std::string& content) {
    if (out.empty()) {
        std::cout << content;
        return;
    }
    fs::path target(out);
    if (!g.out_dir.empty() && target.is_relative()) target = fs::path(g.out_dir) / target;
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    std::ofstream f(target, std::ios::binary | std::ios::trunc);
    if (!f) throw ctxvuln::Error("cannot write file: " + target.string());
    f << content;
    if (g.verbose) std::cerr << "wrote " << target.string() << '\n';
}

ctxvuln::TopoFormat topo_format_for(const std::string& format, const std::string& path) {
    if (format == "json") return ctxvuln::TopoFormat::json;
    if (format == "csv") return ctxvuln::TopoFormat::csv;
    if (!format.empty()) throw ctxvuln::ArgumentError("unknown format \"" + format + "\"");
    return fs::path(path).extension() == ".csv" ? ctxvuln::TopoFormat::csv
                                                : ctxvuln::TopoFormat::json;
}

std::vector<double> parse_weight_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ctxvuln::ArgumentError("bad weight value \"" + item + "\"");
        }
    }
    if (out.empty()) throw ctxvuln::ArgumentError("empty weight list");
    return out;
}

ctxvuln::FixPlan plan_from_spec(const std::string& spec,
                                const std::vector<ctxvuln::VulnerabilityScore>& scores,
                                const std::vector<ctxvuln::VulnMatch>& matches,
                                const std::vector<ctxvuln::VulnerabilityRecord>& db) {
    if (spec == "ncvs") return ctxvuln::contextual_plan(scores);
    if (spec == "cvss") return ctxvuln::base_score_plan(matches, db);
    // otherwise a file listing one vulnerability id per line
    ctxvuln::FixPlan plan;
    std::istringstream in(read_file(spec));
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        plan.ordering.push_back(line);
    }
    return plan;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contextual vulnerability scoring toolchain"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags remain usable after the subcommand name

    GlobalOpts g;
    app.add_option("--config", g.config_path, "pipeline configuration file")
        ->configurable(false);
    app.add_option("--out-dir", g.out_dir, "directory for output artifacts");
    app.add_flag("--verbose", g.verbose, "log progress to stderr");

    // ---- topo ----
    auto* topo = app.add_subcommand("topo", "parse, generate, or validate topologies");
    topo->require_subcommand(1);

    std::string topo_in, topo_informat, topo_out, topo_outformat;
    auto* topo_parse = topo->add_subcommand("parse", "parse and normalize a topology file");
    topo_parse->add_option("file", topo_in, "topology file")->required();
    topo_parse->add_option("--in-format", topo_informat, "input format (json|csv)");
    topo_parse->add_option("--out", topo_out, "output file (default stdout)");
    topo_parse->add_option("--format", topo_outformat, "output format (json|csv)");

    std::string gen_model = "fat-tree", gen_out, gen_format;
    int gen_k = 0, gen_n = 0, gen_levels = -1, gen_hosts = 0;
    bool gen_gateway = false;
    auto* topo_gen = topo->add_subcommand("gen", "generate a canonical topology");
    topo_gen->add_option("--model", gen_model, "fat-tree or bcube")->required();
    topo_gen->add_option("--k", gen_k, "fat-tree arity");
    topo_gen->add_option("--n", gen_n, "bcube ports per switch");
    topo_gen->add_option("--levels", gen_levels, "bcube level count");
    topo_gen->add_option("--hosts-per-edge", gen_hosts, "servers per edge switch");
    topo_gen->add_flag("--gateway", gen_gateway, "attach a gateway node");
    topo_gen->add_option("--out", gen_out, "output file (default stdout)");
    topo_gen->add_option("--format", gen_format, "output format (json|csv)");

    std::string val_in, val_informat;
    auto* topo_validate = topo->add_subcommand("validate", "report topology violations");
    topo_validate->add_option("file", val_in, "topology file")->required();
    topo_validate->add_option("--in-format", val_informat, "input format (json|csv)");

    // ---- mine-sw ----
    std::string msw_events, msw_out, msw_pattern;
    int64_t msw_window = 1000;
    double msw_support = 0.1, msw_confidence = 0.7;
    bool msw_listing = false;
    auto* mine_sw = app.add_subcommand("mine-sw", "mine software dependencies from logs");
    mine_sw->add_option("events", msw_events, "event file (csv or json)")->required();
    mine_sw->add_option("--window-ms", msw_window, "transaction window length");
    mine_sw->add_option("--min-support", msw_support, "minimum rule support");
    mine_sw->add_option("--min-confidence", msw_confidence, "minimum rule confidence");
    mine_sw->add_option("--pattern", msw_pattern,
                        "regex with (timestamp, node, component) groups for raw logs");
    mine_sw->add_flag("--listing", msw_listing, "emit the line-oriented dependency form");
    mine_sw->add_option("--out", msw_out, "output file (default stdout)");

    // ---- mine-net ----
    std::string mnet_flows, mnet_hosts, mnet_out;
    double mnet_threshold = 0.5;
    bool mnet_listing = false;
    auto* mine_net = app.add_subcommand("mine-net", "mine network dependencies from flows");
    mine_net->add_option("flows", mnet_flows, "flow record file (csv or json)")->required();
    mine_net->add_option("--hosts", mnet_hosts, "ip-to-host map (json)")->required();
    mine_net->add_option("--threshold", mnet_threshold, "minimum nesting ratio");
    mine_net->add_flag("--listing", mnet_listing, "emit the indented listing form");
    mine_net->add_option("--out", mnet_out, "output file (default stdout)");

    // ---- build ----
    std::string b_topo, b_sw, b_net, b_endpoints, b_out, b_topo_format;
    auto* build = app.add_subcommand("build", "assemble the dependency graph");
    build->add_option("--topo", b_topo, "topology file")->required();
    build->add_option("--topo-format", b_topo_format, "topology format (json|csv)");
    build->add_option("--sw-deps", b_sw, "software dependencies (json)")->required();
    build->add_option("--net-deps", b_net, "network dependencies (json)")->required();
    build->add_option("--endpoints", b_endpoints, "endpoint map (json)")->required();
    build->add_option("--out", b_out, "output file (default stdout)");

    // ---- match ----
    std::string m_cdg, m_db, m_out;
    auto* match = app.add_subcommand("match", "map vulnerabilities onto graph nodes");
    match->add_option("--cdg", m_cdg, "dependency graph (json)")->required();
    match->add_option("--vulndb", m_db, "vulnerability database (json)")->required();
    match->add_option("--out", m_out, "output file (default stdout)");

    // ---- score ----
    std::string s_cdg, s_matches, s_db, s_out, s_aggregator = "weighted-sum";
    ctxvuln::Weights s_weights;
    ctxvuln::RankConfig s_rank;
    auto* score = app.add_subcommand("score", "compute contextual severities");
    score->add_option("--cdg", s_cdg, "dependency graph (json)")->required();
    score->add_option("--matches", s_matches, "match report (json)")->required();
    score->add_option("--vulndb", s_db, "vulnerability database (json)")->required();
    score->add_option("--aggregator", s_aggregator, "weighted-sum or cvss-product");
    score->add_option("--w-ti", s_weights.ti, "topology importance weight");
    score->add_option("--w-ni", s_weights.ni, "network importance weight");
    score->add_option("--w-si", s_weights.si, "software importance weight");
    score->add_option("--damping", s_rank.damping, "ranking damping factor");
    score->add_option("--max-iterations", s_rank.max_iterations, "ranking iteration cap");
    score->add_option("--tolerance", s_rank.tolerance, "ranking convergence tolerance");
    score->add_option("--out", s_out, "output file (default stdout)");

    // ---- sweep-weights ----
    std::string sw_cdg, sw_matches, sw_db, sw_out;
    std::string sw_ti = "0.5,1,2", sw_ni = "0.5,1,2", sw_si = "0.5,1,2";
    ctxvuln::RankConfig sw_rank;
    auto* sweep = app.add_subcommand("sweep-weights", "rank under a grid of weight settings");
    sweep->add_option("--cdg", sw_cdg, "dependency graph (json)")->required();
    sweep->add_option("--matches", sw_matches, "match report (json)")->required();
    sweep->add_option("--vulndb", sw_db, "vulnerability database (json)")->required();
    sweep->add_option("--w-ti", sw_ti, "comma-separated ti weights");
    sweep->add_option("--w-ni", sw_ni, "comma-separated ni weights");
    sweep->add_option("--w-si", sw_si, "comma-separated si weights");
    sweep->add_option("--damping", sw_rank.damping, "ranking damping factor");
    sweep->add_option("--max-iterations", sw_rank.max_iterations, "ranking iteration cap");
    sweep->add_option("--tolerance", sw_rank.tolerance, "ranking convergence tolerance");
    sweep->add_option("--out", sw_out, "output file (default stdout)");

    // ---- simulate ----
    std::string f_cdg, f_matches, f_db, f_out, f_gateway;
    std::string f_plan_a = "ncvs", f_plan_b = "cvss", f_aggregator = "weighted-sum";
    ctxvuln::Weights f_weights;
    ctxvuln::RankConfig f_rank;
    auto* simulate = app.add_subcommand("simulate", "compare fix plans step by step");
    simulate->add_option("--cdg", f_cdg, "dependency graph (json)")->required();
    simulate->add_option("--matches", f_matches, "match report (json)")->required();
    simulate->add_option("--vulndb", f_db, "vulnerability database (json)")->required();
    simulate->add_option("--plan-a", f_plan_a, "ncvs, cvss, or an id-list file");
    simulate->add_option("--plan-b", f_plan_b, "ncvs, cvss, or an id-list file");
    simulate->add_option("--gateway", f_gateway, "reachability root node")->required();
    simulate->add_option("--aggregator", f_aggregator, "aggregator for the ncvs plan");
    simulate->add_option("--w-ti", f_weights.ti, "topology importance weight");
    simulate->add_option("--w-ni", f_weights.ni, "network importance weight");
    simulate->add_option("--w-si", f_weights.si, "software importance weight");
    simulate->add_option("--out", f_out, "step table file (default stdout)");

    // ---- run ----
    std::string r_topology, r_topology_format, r_events, r_flows, r_hosts, r_endpoints, r_db;
    std::string r_aggregator, r_gateway;
    double r_support = -1, r_confidence = -1, r_threshold = -1;
    double r_damping = -1, r_tolerance = -1;
    double r_wti = -1, r_wni = -1, r_wsi = -1;
    int64_t r_window = -1;
    int r_maxiter = -1;
    bool r_simulate = false, r_no_simulate = false;
    auto* run = app.add_subcommand("run", "run the whole pipeline");
    run->add_option("--topology", r_topology, "topology file");
    run->add_option("--topology-format", r_topology_format, "topology format (json|csv)");
    run->add_option("--events", r_events, "event file");
    run->add_option("--flows", r_flows, "flow record file");
    run->add_option("--hosts", r_hosts, "ip-to-host map");
    run->add_option("--endpoints", r_endpoints, "endpoint map");
    run->add_option("--vulndb", r_db, "vulnerability database");
    run->add_option("--window-ms", r_window, "transaction window length");
    run->add_option("--min-support", r_support, "minimum rule support");
    run->add_option("--min-confidence", r_confidence, "minimum rule confidence");
    run->add_option("--threshold", r_threshold, "minimum nesting ratio");
    run->add_option("--damping", r_damping, "ranking damping factor");
    run->add_option("--max-iterations", r_maxiter, "ranking iteration cap");
    run->add_option("--tolerance", r_tolerance, "ranking convergence tolerance");
    run->add_option("--w-ti", r_wti, "topology importance weight");
    run->add_option("--w-ni", r_wni, "network importance weight");
    run->add_option("--w-si", r_wsi, "software importance weight");
    run->add_option("--aggregator", r_aggregator, "weighted-sum or cvss-product");
    run->add_flag("--simulate", r_simulate, "also compare fix plans");
    run->add_flag("--no-simulate", r_no_simulate, "skip the fix plan comparison");
    run->add_option("--gateway", r_gateway, "reachability root for the simulation");

    // ---- report ----
    std::string rp_in, rp_out, rp_format = "text";
    auto* report = app.add_subcommand("report", "render a score report");
    report->add_option("--in", rp_in, "report file (json)")->required();
    report->add_option("--format", rp_format, "text or json");
    report->add_option("--out", rp_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (topo_parse->parsed()) {
            auto graph = ctxvuln::parse_topology(read_file(topo_in),
                                                 topo_format_for(topo_informat, topo_in));
            write_output(g, topo_out,
                         ctxvuln::serialize_topology(
                             graph, topo_format_for(topo_outformat, topo_out)));
        } else if (topo_gen->parsed()) {
            std::map<std::string, std::string> params;
            if (gen_k > 0) params["k"] = std::to_string(gen_k);
            if (gen_n > 0) params["n"] = std::to_string(gen_n);
            if (gen_levels >= 0) params["levels"] = std::to_string(gen_levels);
            if (gen_hosts > 0) params["hosts_per_edge"] = std::to_string(gen_hosts);
            if (gen_gateway) params["gateway"] = "true";
            auto graph = ctxvuln::generate_topology(gen_model, params);
            write_output(g, gen_out,
                         ctxvuln::serialize_topology(
                             graph, topo_format_for(gen_format, gen_out)));
        } else if (topo_validate->parsed()) {
            auto graph = ctxvuln::parse_topology(read_file(val_in),
                                                 topo_format_for(val_informat, val_in));
            auto violations = ctxvuln::validate_topology(graph);
            for (const auto& v : violations) std::cout << v << '\n';
            if (!violations.empty()) return 1;
            if (g.verbose) std::cerr << "topology is valid\n";
        } else if (mine_sw->parsed()) {
            auto events = msw_pattern.empty()
                              ? ctxvuln::parse_events(read_file(msw_events))
                              : ctxvuln::extract_events(read_file(msw_events), msw_pattern);
            auto deps = ctxvuln::mine_software_dependencies(events, msw_window, msw_support,
                                                            msw_confidence);
            write_output(g, msw_out,
                         msw_listing ? ctxvuln::render_software_dependencies(deps)
                                     : ctxvuln::serialize_software_dependencies(deps));
        } else if (mine_net->parsed()) {
            auto flows = ctxvuln::parse_flows(read_file(mnet_flows));
            auto hosts = ctxvuln::parse_host_map(read_file(mnet_hosts));
            auto deps = ctxvuln::mine_network_dependencies(flows, hosts, mnet_threshold);
            write_output(g, mnet_out,
                         mnet_listing ? ctxvuln::render_dependency_listing(deps)
                                      : ctxvuln::serialize_network_dependencies(deps));
        } else if (build->parsed()) {
            auto graph = ctxvuln::parse_topology(read_file(b_topo),
                                                 topo_format_for(b_topo_format, b_topo));
            auto sw_deps = ctxvuln::parse_software_dependencies(read_file(b_sw));
            auto net_deps = ctxvuln::parse_network_dependencies(read_file(b_net));
            auto endpoints = ctxvuln::parse_endpoint_map(read_file(b_endpoints));
            std::vector<ctxvuln::DroppedEdge> dropped;
            auto cdg = ctxvuln::build_cdg(graph, sw_deps, net_deps, endpoints, &dropped);
            for (const auto& d : dropped)
                std::cerr << "dropped cycle-closing " << to_string(d.kind) << " edge "
                          << d.from << " -> " << d.to << " (weight " << d.weight << ")\n";
            write_output(g, b_out, ctxvuln::serialize_cdg(cdg));
        } else if (match->parsed()) {
            auto cdg = ctxvuln::parse_cdg(read_file(m_cdg));
            auto db = ctxvuln::load_vulndb(read_file(m_db));
            auto rep = ctxvuln::match_vulnerabilities(db, cdg);
            write_output(g, m_out, ctxvuln::serialize_match_report(rep));
        } else if (score->parsed()) {
            auto cdg = ctxvuln::parse_cdg(read_file(s_cdg));
            auto rep = ctxvuln::parse_match_report(read_file(s_matches));
            auto db = ctxvuln::load_vulndb(read_file(s_db));
            auto importances = ctxvuln::compute_importances(cdg, s_rank);
            auto scores = ctxvuln::score_vulnerabilities(
                rep.matches, importances, s_weights,
                ctxvuln::aggregator_from_string(s_aggregator), db);
            write_output(g, s_out, ctxvuln::render_report(scores, ctxvuln::ReportFormat::json));
        } else if (sweep->parsed()) {
            auto cdg = ctxvuln::parse_cdg(read_file(sw_cdg));
            auto rep = ctxvuln::parse_match_report(read_file(sw_matches));
            auto db = ctxvuln::load_vulndb(read_file(sw_db));
            auto importances = ctxvuln::compute_importances(cdg, sw_rank);
            json out = json::array();
            for (double ti : parse_weight_list(sw_ti))
                for (double ni : parse_weight_list(sw_ni))
                    for (double si : parse_weight_list(sw_si)) {
                        auto scores = ctxvuln::score_vulnerabilities(
                            rep.matches, importances, {ti, ni, si},
                            ctxvuln::Aggregator::weighted_sum, db);
                        json entry;
                        entry["weights"] = {{"ti", ti}, {"ni", ni}, {"si", si}};
                        entry["ranking"] = json::array();
                        entry["severities"] = json::array();
                        for (const auto& s : scores) {
                            entry["ranking"].push_back(s.vuln_id);
                            entry["severities"].push_back(s.severity);
                        }
                        out.push_back(std::move(entry));
                    }
            write_output(g, sw_out, out.dump(2) + "\n");
        } else if (simulate->parsed()) {
            auto cdg = ctxvuln::parse_cdg(read_file(f_cdg));
            auto rep = ctxvuln::parse_match_report(read_file(f_matches));
            auto db = ctxvuln::load_vulndb(read_file(f_db));
            std::vector<ctxvuln::VulnerabilityScore> scores;
            if (f_plan_a == "ncvs" || f_plan_b == "ncvs") {
                auto importances = ctxvuln::compute_importances(cdg, f_rank);
                scores = ctxvuln::score_vulnerabilities(
                    rep.matches, importances, f_weights,
                    ctxvuln::aggregator_from_string(f_aggregator), db);
            }
            auto plan_a = plan_from_spec(f_plan_a, scores, rep.matches, db);
            auto plan_b = plan_from_spec(f_plan_b, scores, rep.matches, db);
            auto comparison =
                ctxvuln::compare_plans(cdg, rep.matches, plan_a, plan_b, f_gateway);
            if (g.verbose)
                std::cerr << "auc plan_a=" << comparison.plan_a.auc
                          << " plan_b=" << comparison.plan_b.auc << " winner="
                          << comparison.winner << '\n';
            write_output(g, f_out, ctxvuln::render_steps_csv(comparison));
        } else if (run->parsed()) {
            ctxvuln::PipelineConfig config;
            if (!g.config_path.empty())
                config = ctxvuln::load_pipeline_config(g.config_path);
            // flags win over the config file
            if (!r_topology.empty()) config.topology = r_topology;
            if (!r_topology_format.empty()) config.topology_format = r_topology_format;
            if (!r_events.empty()) config.events = r_events;
            if (!r_flows.empty()) config.flows = r_flows;
            if (!r_hosts.empty()) config.hosts = r_hosts;
            if (!r_endpoints.empty()) config.endpoints = r_endpoints;
            if (!r_db.empty()) config.vulndb = r_db;
            if (r_window >= 0) config.window_ms = r_window;
            if (r_support >= 0) config.min_support = r_support;
            if (r_confidence >= 0) config.min_confidence = r_confidence;
            if (r_threshold >= 0) config.threshold = r_threshold;
            if (r_damping >= 0) config.rank.damping = r_damping;
            if (r_maxiter >= 0) config.rank.max_iterations = r_maxiter;
            if (r_tolerance >= 0) config.rank.tolerance = r_tolerance;
            if (r_wti >= 0) config.weights.ti = r_wti;
            if (r_wni >= 0) config.weights.ni = r_wni;
            if (r_wsi >= 0) config.weights.si = r_wsi;
            if (!r_aggregator.empty())
                config.aggregator = ctxvuln::aggregator_from_string(r_aggregator);
            if (r_simulate) config.simulate = true;
            if (r_no_simulate) config.simulate = false;
            if (!r_gateway.empty()) config.gateway = r_gateway;
            std::string out_dir = g.out_dir.empty() ? "out" : g.out_dir;
            auto result =
                ctxvuln::run_pipeline(config, out_dir, g.verbose ? &std::cerr : nullptr);
            std::cout << "wrote " << result.written.size() << " artifact(s) to " << out_dir
                      << '\n';
            if (!result.scores.empty())
                std::cout << "top severity: " << result.scores.front().vuln_id << '\n';
        } else if (report->parsed()) {
            auto scores = ctxvuln::parse_report(read_file(rp_in));
            ctxvuln::ReportFormat fmt;
            if (rp_format == "text") fmt = ctxvuln::ReportFormat::text;
            else if (rp_format == "json") fmt = ctxvuln::ReportFormat::json;
            else throw ctxvuln::ArgumentError("unknown report format \"" + rp_format + "\"");
            write_output(g, rp_out, ctxvuln::render_report(scores, fmt));
        }
    } catch (const ctxvuln::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
