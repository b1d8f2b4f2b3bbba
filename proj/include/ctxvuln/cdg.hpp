#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctxvuln/logmine.hpp"
#include "ctxvuln/netdep.hpp"
#include "ctxvuln/topology.hpp"

namespace ctxvuln {

enum class Layer { hardware, software };
enum class EdgeKind { hw_link, software_dep, network_dep, hosted_on };

std::string to_string(Layer layer);
Layer layer_from_string(const std::string& s);
std::string to_string(EdgeKind kind);
EdgeKind edge_kind_from_string(const std::string& s);

struct CdgNode {
    std::string id;
    Layer layer = Layer::hardware;
    std::string name;               // component name; equals id on hardware nodes
    std::string host;               // software nodes only
    std::optional<NodeKind> kind;   // hardware nodes only

    bool operator==(const CdgNode&) const = default;
};

// Direction reads "from depends on to".
struct CdgEdge {
    std::string from;
    std::string to;
    EdgeKind kind = EdgeKind::hw_link;

    auto operator<=>(const CdgEdge&) const = default;
};

struct Cdg {
    std::vector<CdgNode> nodes;  // hardware first (input order), then software sorted by id
    std::vector<CdgEdge> edges;  // sorted by (kind, from, to)
};

// Software node ids are "component@host".
std::string software_node_id(const std::string& host, const std::string& component);

// endpoint -> (host id, component name)
using EndpointMap = std::map<ServiceEndpoint, std::pair<std::string, std::string>>;

EndpointMap parse_endpoint_map(const std::string& text);
std::string serialize_endpoint_map(const EndpointMap& endpoints);

// A mined edge removed to keep a dependency edge set acyclic.
struct DroppedEdge {
    std::string from;
    std::string to;
    EdgeKind kind = EdgeKind::software_dep;
    double weight = 0.0;

    bool operator==(const DroppedEdge&) const = default;
};

// Assembles the two-layer graph. Physical links become directed edge pairs;
// every software node gets one hosted_on edge. If mined software_dep or
// network_dep edges contain a cycle, the weakest edge closing it (ties:
// lexicographically last) is dropped and reported through `dropped`.
Cdg build_cdg(const TopologyGraph& topo, const std::vector<SoftwareDependency>& sw_deps,
              const std::vector<NetworkDependency>& net_deps, const EndpointMap& endpoints,
              std::vector<DroppedEdge>* dropped = nullptr);

struct DirectedGraph {
    std::vector<std::string> nodes;
    std::vector<std::pair<int32_t, int32_t>> edges;  // index pairs into nodes
};

enum class Projection { hw_graph, sw_graph, net_graph };

// hw_graph: hardware nodes + hw_link edges. sw_graph: all software nodes +
// software_dep edges. net_graph: software nodes incident to a network_dep
// edge, plus those edges.
DirectedGraph project(const Cdg& cdg, Projection which);

std::string serialize_cdg(const Cdg& cdg);
Cdg parse_cdg(const std::string& text);

}  // namespace ctxvuln
