#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace ctxvuln {

enum class NodeKind { server, edge_switch, aggregation_switch, core_switch, gateway };

std::string to_string(NodeKind kind);
NodeKind node_kind_from_string(const std::string& s);

struct TopologyNode {
    std::string id;
    NodeKind kind = NodeKind::server;
    std::set<std::string> labels;

    bool operator==(const TopologyNode&) const = default;
};

// Physical links are undirected; a pair appears at most once.
struct TopologyLink {
    std::string a;
    std::string b;

    bool operator==(const TopologyLink&) const = default;
};

struct TopologyGraph {
    std::vector<TopologyNode> nodes;
    std::vector<TopologyLink> links;
};

enum class TopoFormat { json, csv };

TopologyGraph parse_topology(const std::string& text, TopoFormat format);
std::string serialize_topology(const TopologyGraph& graph, TopoFormat format);

// Returns one description per violation (duplicate id, dangling link,
// unreachable node, ...). Empty result means valid and connected.
std::vector<std::string> validate_topology(const TopologyGraph& graph);

struct FatTreeOptions {
    int hosts_per_edge = 0;       // 0 picks the canonical k/2
    bool include_gateway = false; // adds gw0 wired to every core switch
};

TopologyGraph generate_fat_tree(int k, const FatTreeOptions& opts = {});

// BCube(n, levels): level-0 switches are edge switches, higher levels
// aggregation. include_gateway wires gw0 to every top-level switch.
TopologyGraph generate_bcube(int n, int levels, bool include_gateway = false);

// Generation rules are pluggable; "fat-tree" and "bcube" come registered.
class TopologyGenerator {
public:
    virtual ~TopologyGenerator() = default;
    virtual std::string model() const = 0;
    virtual TopologyGraph generate(const std::map<std::string, std::string>& params) const = 0;
};

void register_generator(std::shared_ptr<TopologyGenerator> gen);
std::vector<std::string> generator_models();
TopologyGraph generate_topology(const std::string& model,
                                const std::map<std::string, std::string>& params);

}  // namespace ctxvuln
