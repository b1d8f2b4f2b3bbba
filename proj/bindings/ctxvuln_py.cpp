// Python bindings for the core pipeline operations. Containers cross the
// boundary by value, so results are plain Python lists of bound structs.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

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

namespace py = pybind11;
using namespace ctxvuln;

PYBIND11_MODULE(_ctxvuln, m) {
    m.doc() = "contextual vulnerability scoring over a two-layer dependency graph";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);

    // enums
    py::enum_<NodeKind>(m, "NodeKind")
        .value("server", NodeKind::server)
        .value("edge_switch", NodeKind::edge_switch)
        .value("aggregation_switch", NodeKind::aggregation_switch)
        .value("core_switch", NodeKind::core_switch)
        .value("gateway", NodeKind::gateway);
    py::enum_<TopoFormat>(m, "TopoFormat")
        .value("json", TopoFormat::json)
        .value("csv", TopoFormat::csv);
    py::enum_<Layer>(m, "Layer")
        .value("hardware", Layer::hardware)
        .value("software", Layer::software);
    py::enum_<EdgeKind>(m, "EdgeKind")
        .value("hw_link", EdgeKind::hw_link)
        .value("software_dep", EdgeKind::software_dep)
        .value("network_dep", EdgeKind::network_dep)
        .value("hosted_on", EdgeKind::hosted_on);
    py::enum_<Proto>(m, "Proto").value("tcp", Proto::tcp).value("udp", Proto::udp);
    py::enum_<Aggregator>(m, "Aggregator")
        .value("weighted_sum", Aggregator::weighted_sum)
        .value("cvss_product", Aggregator::cvss_product);
    py::enum_<Projection>(m, "Projection")
        .value("hw_graph", Projection::hw_graph)
        .value("sw_graph", Projection::sw_graph)
        .value("net_graph", Projection::net_graph);

    // topology
    py::class_<TopologyNode>(m, "TopologyNode")
        .def(py::init<>())
        .def_readwrite("id", &TopologyNode::id)
        .def_readwrite("kind", &TopologyNode::kind)
        .def_readwrite("labels", &TopologyNode::labels);
    py::class_<TopologyLink>(m, "TopologyLink")
        .def(py::init<>())
        .def_readwrite("a", &TopologyLink::a)
        .def_readwrite("b", &TopologyLink::b);
    py::class_<TopologyGraph>(m, "TopologyGraph")
        .def(py::init<>())
        .def_readwrite("nodes", &TopologyGraph::nodes)
        .def_readwrite("links", &TopologyGraph::links);
    m.def("parse_topology", &parse_topology, py::arg("text"), py::arg("format"));
    m.def("serialize_topology", &serialize_topology, py::arg("graph"), py::arg("format"));
    m.def("validate_topology", &validate_topology, py::arg("graph"));
    m.def(
        "generate_fat_tree",
        [](int k, int hosts_per_edge, bool include_gateway) {
            return generate_fat_tree(k, {hosts_per_edge, include_gateway});
        },
        py::arg("k"), py::arg("hosts_per_edge") = 0, py::arg("include_gateway") = false);
    m.def("generate_bcube", &generate_bcube, py::arg("n"), py::arg("levels"),
          py::arg("include_gateway") = false);
    m.def("generator_models", &generator_models);
    m.def("generate_topology", &generate_topology, py::arg("model"), py::arg("params"));

    // log mining
    py::class_<LogEvent>(m, "LogEvent")
        .def(py::init<>())
        .def(py::init([](int64_t ts, std::string node, std::string component) {
                 return LogEvent{ts, std::move(node), std::move(component)};
             }),
             py::arg("timestamp_ms"), py::arg("node"), py::arg("component"))
        .def_readwrite("timestamp_ms", &LogEvent::timestamp_ms)
        .def_readwrite("node", &LogEvent::node)
        .def_readwrite("component", &LogEvent::component);
    py::class_<Transaction>(m, "Transaction")
        .def(py::init<>())
        .def_readwrite("node", &Transaction::node)
        .def_readwrite("window_start", &Transaction::window_start)
        .def_readwrite("items", &Transaction::items);
    py::class_<AssociationRule>(m, "AssociationRule")
        .def(py::init<>())
        .def_readwrite("antecedent", &AssociationRule::antecedent)
        .def_readwrite("consequent", &AssociationRule::consequent)
        .def_readwrite("support", &AssociationRule::support)
        .def_readwrite("confidence", &AssociationRule::confidence)
        .def("__repr__", [](const AssociationRule& r) {
            return "AssociationRule(" + r.antecedent + " -> " + r.consequent + ")";
        });
    py::class_<SoftwareDependency>(m, "SoftwareDependency")
        .def(py::init<>())
        .def_readwrite("node", &SoftwareDependency::node)
        .def_readwrite("sw", &SoftwareDependency::sw)
        .def_readwrite("dep", &SoftwareDependency::dep);
    m.def("group_transactions", &group_transactions, py::arg("events"), py::arg("window_ms"));
    m.def("apriori_rules", &apriori_rules, py::arg("transactions"), py::arg("min_support"),
          py::arg("min_confidence"));
    m.def("mine_software_dependencies", &mine_software_dependencies, py::arg("events"),
          py::arg("window_ms"), py::arg("min_support"), py::arg("min_confidence"));
    m.def("parse_events", &parse_events, py::arg("text"));
    m.def("extract_events", &extract_events, py::arg("raw"), py::arg("pattern"));

    // flow mining
    py::class_<FlowRecord>(m, "FlowRecord")
        .def(py::init<>())
        .def_readwrite("src_ip", &FlowRecord::src_ip)
        .def_readwrite("src_port", &FlowRecord::src_port)
        .def_readwrite("dst_ip", &FlowRecord::dst_ip)
        .def_readwrite("dst_port", &FlowRecord::dst_port)
        .def_readwrite("proto", &FlowRecord::proto)
        .def_readwrite("start_ms", &FlowRecord::start_ms)
        .def_readwrite("end_ms", &FlowRecord::end_ms);
    py::class_<ServiceEndpoint>(m, "ServiceEndpoint")
        .def(py::init<>())
        .def_readwrite("ip", &ServiceEndpoint::ip)
        .def_readwrite("port", &ServiceEndpoint::port)
        .def_readwrite("proto", &ServiceEndpoint::proto)
        .def("__repr__", [](const ServiceEndpoint& e) {
            return e.ip + ":" + std::to_string(e.port) + ":[" + to_string(e.proto) + "]";
        });
    py::class_<NetworkDependency>(m, "NetworkDependency")
        .def(py::init<>())
        .def_readwrite("upstream", &NetworkDependency::upstream)
        .def_readwrite("downstream", &NetworkDependency::downstream)
        .def_readwrite("weight", &NetworkDependency::weight);
    m.def("mine_network_dependencies", &mine_network_dependencies, py::arg("flows"),
          py::arg("host_of"), py::arg("threshold"));
    m.def("parse_flows", &parse_flows, py::arg("text"));
    m.def("parse_host_map", &parse_host_map, py::arg("text"));

    // dependency graph
    py::class_<CdgNode>(m, "CdgNode")
        .def(py::init<>())
        .def_readwrite("id", &CdgNode::id)
        .def_readwrite("layer", &CdgNode::layer)
        .def_readwrite("name", &CdgNode::name)
        .def_readwrite("host", &CdgNode::host)
        .def_readwrite("kind", &CdgNode::kind);
    py::class_<CdgEdge>(m, "CdgEdge")
        .def(py::init<>())
        .def_readwrite("from_", &CdgEdge::from)
        .def_readwrite("to", &CdgEdge::to)
        .def_readwrite("kind", &CdgEdge::kind);
    py::class_<Cdg>(m, "Cdg")
        .def(py::init<>())
        .def_readwrite("nodes", &Cdg::nodes)
        .def_readwrite("edges", &Cdg::edges);
    py::class_<DroppedEdge>(m, "DroppedEdge")
        .def(py::init<>())
        .def_readwrite("from_", &DroppedEdge::from)
        .def_readwrite("to", &DroppedEdge::to)
        .def_readwrite("kind", &DroppedEdge::kind)
        .def_readwrite("weight", &DroppedEdge::weight);
    py::class_<DirectedGraph>(m, "DirectedGraph")
        .def(py::init<>())
        .def_readwrite("nodes", &DirectedGraph::nodes)
        .def_readwrite("edges", &DirectedGraph::edges);
    m.def("software_node_id", &software_node_id, py::arg("host"), py::arg("component"));
    m.def(
        "build_cdg",
        [](const TopologyGraph& topo, const std::vector<SoftwareDependency>& sw_deps,
           const std::vector<NetworkDependency>& net_deps, const EndpointMap& endpoints) {
            std::vector<DroppedEdge> dropped;
            Cdg cdg = build_cdg(topo, sw_deps, net_deps, endpoints, &dropped);
            return py::make_tuple(std::move(cdg), std::move(dropped));
        },
        py::arg("topology"), py::arg("sw_deps"), py::arg("net_deps"), py::arg("endpoints"),
        "returns (cdg, dropped_edges)");
    m.def("parse_endpoint_map", &parse_endpoint_map, py::arg("text"));
    m.def("project", &project, py::arg("cdg"), py::arg("which"));
    m.def("serialize_cdg", &serialize_cdg, py::arg("cdg"));
    m.def("parse_cdg", &parse_cdg, py::arg("text"));

    // scoring
    py::class_<RankConfig>(m, "RankConfig")
        .def(py::init<>())
        .def_readwrite("damping", &RankConfig::damping)
        .def_readwrite("max_iterations", &RankConfig::max_iterations)
        .def_readwrite("tolerance", &RankConfig::tolerance);
    py::class_<ImportanceTriple>(m, "ImportanceTriple")
        .def(py::init<>())
        .def_readwrite("node", &ImportanceTriple::node)
        .def_readwrite("ti", &ImportanceTriple::ti)
        .def_readwrite("si", &ImportanceTriple::si)
        .def_readwrite("ni", &ImportanceTriple::ni);
    py::class_<Weights>(m, "Weights")
        .def(py::init<>())
        .def(py::init([](double ti, double ni, double si) {
                 return Weights{ti, ni, si};
             }),
             py::arg("ti"), py::arg("ni"), py::arg("si"))
        .def_readwrite("ti", &Weights::ti)
        .def_readwrite("ni", &Weights::ni)
        .def_readwrite("si", &Weights::si);
    py::class_<VulnerabilityScore>(m, "VulnerabilityScore")
        .def(py::init<>())
        .def_readwrite("vuln_id", &VulnerabilityScore::vuln_id)
        .def_readwrite("severity", &VulnerabilityScore::severity)
        .def_readwrite("sum_ti", &VulnerabilityScore::sum_ti)
        .def_readwrite("sum_ni", &VulnerabilityScore::sum_ni)
        .def_readwrite("sum_si", &VulnerabilityScore::sum_si)
        .def_readwrite("sum_product", &VulnerabilityScore::sum_product)
        .def_readwrite("aggregator", &VulnerabilityScore::aggregator)
        .def_readwrite("affected_nodes", &VulnerabilityScore::affected_nodes);
    m.def("aggregator_from_string", &aggregator_from_string, py::arg("s"));
    m.def("pagerank", &pagerank, py::arg("graph"), py::arg("config") = RankConfig{});
    m.def(
        "compute_importances",
        [](const Cdg& cdg, const RankConfig& config) {
            return compute_importances(cdg, config);
        },
        py::arg("cdg"), py::arg("config") = RankConfig{});
    m.def("score_vulnerabilities", &score_vulnerabilities, py::arg("matches"),
          py::arg("importances"), py::arg("weights"), py::arg("aggregator"),
          py::arg("vulndb"));

    // vulnerability matching
    py::class_<VulnerabilityRecord>(m, "VulnerabilityRecord")
        .def(py::init<>())
        .def_readwrite("id", &VulnerabilityRecord::id)
        .def_readwrite("summary", &VulnerabilityRecord::summary)
        .def_readwrite("products", &VulnerabilityRecord::products)
        .def_readwrite("base_score", &VulnerabilityRecord::base_score);
    py::class_<VulnMatch>(m, "VulnMatch")
        .def(py::init<>())
        .def_readwrite("vuln_id", &VulnMatch::vuln_id)
        .def_readwrite("affected_nodes", &VulnMatch::affected_nodes);
    py::class_<MatchReport>(m, "MatchReport")
        .def(py::init<>())
        .def_readwrite("matches", &MatchReport::matches)
        .def_readwrite("unmatched", &MatchReport::unmatched);
    m.def("load_vulndb", &load_vulndb, py::arg("text"));
    m.def("serialize_vulndb", &serialize_vulndb, py::arg("db"));
    m.def(
        "match_vulnerabilities",
        [](const std::vector<VulnerabilityRecord>& db, const Cdg& cdg) {
            return match_vulnerabilities(db, cdg);
        },
        py::arg("db"), py::arg("cdg"));

    // fix simulation
    py::class_<FixPlan>(m, "FixPlan")
        .def(py::init<>())
        .def(py::init([](std::vector<std::string> ordering) {
                 return FixPlan{std::move(ordering)};
             }),
             py::arg("ordering"))
        .def_readwrite("ordering", &FixPlan::ordering);
    py::class_<FixPlanResult>(m, "FixPlanResult")
        .def(py::init<>())
        .def_readwrite("plan", &FixPlanResult::plan)
        .def_readwrite("alive_counts", &FixPlanResult::alive_counts)
        .def_readwrite("auc", &FixPlanResult::auc);
    py::class_<PlanComparison>(m, "PlanComparison")
        .def(py::init<>())
        .def_readwrite("plan_a", &PlanComparison::plan_a)
        .def_readwrite("plan_b", &PlanComparison::plan_b)
        .def_readwrite("winner", &PlanComparison::winner);
    m.def("simulate_fix", &simulate_fix, py::arg("cdg"), py::arg("matches"), py::arg("plan"),
          py::arg("gateway"));
    m.def("compare_plans", &compare_plans, py::arg("cdg"), py::arg("matches"),
          py::arg("plan_a"), py::arg("plan_b"), py::arg("gateway"));
    m.def("contextual_plan", &contextual_plan, py::arg("scores"));
    m.def("base_score_plan", &base_score_plan, py::arg("matches"), py::arg("vulndb"));
    m.def("render_steps_csv", &render_steps_csv, py::arg("comparison"));

    // reporting and the end-to-end pipeline
    py::enum_<ReportFormat>(m, "ReportFormat")
        .value("json", ReportFormat::json)
        .value("text", ReportFormat::text);
    m.def("render_report", &render_report, py::arg("scores"), py::arg("format"));
    m.def("parse_report", &parse_report, py::arg("text"));
    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("topology", &PipelineConfig::topology)
        .def_readwrite("topology_format", &PipelineConfig::topology_format)
        .def_readwrite("events", &PipelineConfig::events)
        .def_readwrite("flows", &PipelineConfig::flows)
        .def_readwrite("hosts", &PipelineConfig::hosts)
        .def_readwrite("endpoints", &PipelineConfig::endpoints)
        .def_readwrite("vulndb", &PipelineConfig::vulndb)
        .def_readwrite("window_ms", &PipelineConfig::window_ms)
        .def_readwrite("min_support", &PipelineConfig::min_support)
        .def_readwrite("min_confidence", &PipelineConfig::min_confidence)
        .def_readwrite("threshold", &PipelineConfig::threshold)
        .def_readwrite("rank", &PipelineConfig::rank)
        .def_readwrite("weights", &PipelineConfig::weights)
        .def_readwrite("aggregator", &PipelineConfig::aggregator)
        .def_readwrite("simulate", &PipelineConfig::simulate)
        .def_readwrite("gateway", &PipelineConfig::gateway);
    py::class_<PipelineResult>(m, "PipelineResult")
        .def(py::init<>())
        .def_readwrite("written", &PipelineResult::written)
        .def_readwrite("scores", &PipelineResult::scores)
        .def_readwrite("match_report", &PipelineResult::match_report)
        .def_readwrite("dropped", &PipelineResult::dropped)
        .def_readwrite("simulated", &PipelineResult::simulated)
        .def_readwrite("comparison", &PipelineResult::comparison);
    m.def("load_pipeline_config", &load_pipeline_config, py::arg("path"));
    m.def("parse_pipeline_config", &parse_pipeline_config, py::arg("text"),
          py::arg("base_dir"));
    m.def(
        "run_pipeline",
        [](const PipelineConfig& config, const std::string& out_dir) {
            return run_pipeline(config, out_dir);
        },
        py::arg("config"), py::arg("out_dir"));
}
