#include <doctest.h>

#include <algorithm>
#include <set>

#include "ctxvuln/errors.hpp"
#include "ctxvuln/topology.hpp"

using namespace ctxvuln;

namespace {

const TopologyNode* find_node(const TopologyGraph& g, const std::string& id) {
    for (const auto& n : g.nodes)
        if (n.id == id) return &n;
    return nullptr;
}

bool has_link(const TopologyGraph& g, const std::string& a, const std::string& b) {
    for (const auto& l : g.links)
        if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) return true;
    return false;
}

size_t count_kind(const TopologyGraph& g, NodeKind k) {
    return std::count_if(g.nodes.begin(), g.nodes.end(),
                         [&](const TopologyNode& n) { return n.kind == k; });
}

}  // namespace

TEST_CASE("topology csv parsing") {
    std::string csv =
        "type,id_or_a,kind_or_b,labels\n"
        "node,gw0,gateway,\n"
        "node,sw1,edge_switch,rack1;tor\n"
        "# a comment line\n"
        "node,s1,server,\n"
        "link,gw0,sw1,\n"
        "link,sw1,s1\n";
    auto g = parse_topology(csv, TopoFormat::csv);
    REQUIRE(g.nodes.size() == 3);
    REQUIRE(g.links.size() == 2);
    CHECK(find_node(g, "gw0")->kind == NodeKind::gateway);
    CHECK(find_node(g, "sw1")->labels == std::set<std::string>{"rack1", "tor"});
    CHECK(has_link(g, "sw1", "s1"));
}

TEST_CASE("topology csv errors carry line numbers") {
    CHECK_THROWS_AS(parse_topology("node,a,server\nwhat,x,y\n", TopoFormat::csv), ParseError);
    CHECK_THROWS_AS(parse_topology("node,a,notakind\n", TopoFormat::csv), ParseError);
    // duplicate ids, self links, dangling endpoints, duplicate links
    CHECK_THROWS_AS(parse_topology("node,a,server\nnode,a,server\n", TopoFormat::csv),
                    ValidationError);
    CHECK_THROWS_AS(parse_topology("node,a,server\nlink,a,a\n", TopoFormat::csv),
                    ValidationError);
    CHECK_THROWS_AS(parse_topology("node,a,server\nlink,a,b\n", TopoFormat::csv),
                    ValidationError);
    CHECK_THROWS_AS(
        parse_topology("node,a,server\nnode,b,server\nlink,a,b\nlink,b,a\n", TopoFormat::csv),
        ValidationError);
}

TEST_CASE("topology json round trip") {
    auto g = generate_fat_tree(2);
    auto text = serialize_topology(g, TopoFormat::json);
    auto back = parse_topology(text, TopoFormat::json);
    CHECK(back.nodes == g.nodes);
    CHECK(back.links == g.links);
    // a second serialization is byte-identical
    CHECK(serialize_topology(back, TopoFormat::json) == text);
}

TEST_CASE("topology csv round trip") {
    auto g = generate_fat_tree(4);
    auto text = serialize_topology(g, TopoFormat::csv);
    auto back = parse_topology(text, TopoFormat::csv);
    CHECK(back.nodes == g.nodes);
    CHECK(back.links == g.links);
}

TEST_CASE("fat-tree node and link counts") {
    auto g2 = generate_fat_tree(2);
    CHECK(g2.nodes.size() == 7);  // 1 core + 2 agg + 2 edge + 2 servers

    auto g4 = generate_fat_tree(4);
    CHECK(g4.nodes.size() == 36);
    CHECK(g4.links.size() == 48);
    CHECK(count_kind(g4, NodeKind::core_switch) == 4);
    CHECK(count_kind(g4, NodeKind::aggregation_switch) == 8);
    CHECK(count_kind(g4, NodeKind::edge_switch) == 8);
    CHECK(count_kind(g4, NodeKind::server) == 16);
    CHECK(count_kind(g4, NodeKind::gateway) == 0);

    // agg j connects to the core group [j*k/2, (j+1)*k/2)
    CHECK(has_link(g4, "pod0-agg0", "core0"));
    CHECK(has_link(g4, "pod0-agg0", "core1"));
    CHECK(has_link(g4, "pod0-agg1", "core2"));
    CHECK(has_link(g4, "pod0-agg1", "core3"));
    CHECK_FALSE(has_link(g4, "pod0-agg0", "core2"));
    CHECK(has_link(g4, "pod3-edge1", "pod3-edge1-srv1"));
    CHECK(validate_topology(g4).empty());
}

TEST_CASE("fat-tree options") {
    auto g = generate_fat_tree(2, {.hosts_per_edge = 4, .include_gateway = true});
    CHECK(count_kind(g, NodeKind::server) == 8);
    CHECK(count_kind(g, NodeKind::gateway) == 1);
    CHECK(has_link(g, "gw0", "core0"));
    CHECK(validate_topology(g).empty());

    CHECK_THROWS_AS(generate_fat_tree(3), ArgumentError);  // k must be even
    CHECK_THROWS_AS(generate_fat_tree(0), ArgumentError);
}

TEST_CASE("bcube node and link counts") {
    auto g0 = generate_bcube(2, 0);
    CHECK(count_kind(g0, NodeKind::server) == 2);
    CHECK(count_kind(g0, NodeKind::edge_switch) == 1);
    CHECK(g0.links.size() == 2);

    auto g1 = generate_bcube(4, 1);
    CHECK(count_kind(g1, NodeKind::server) == 16);
    CHECK(count_kind(g1, NodeKind::edge_switch) == 4);
    CHECK(count_kind(g1, NodeKind::aggregation_switch) == 4);
    CHECK(g1.links.size() == 32);
    CHECK(validate_topology(g1).empty());

    // level-0 switch sw_0_1 serves servers srv_1_0 .. srv_1_3 (last digit
    // varies); level-1 switch sw_1_1 serves srv_0_1 .. srv_3_1
    CHECK(has_link(g1, "sw_0_1", "srv_1_2"));
    CHECK_FALSE(has_link(g1, "sw_0_1", "srv_2_2"));
    CHECK(has_link(g1, "sw_1_1", "srv_3_1"));

    CHECK_THROWS_AS(generate_bcube(1, 1), ArgumentError);
    CHECK_THROWS_AS(generate_bcube(2, -1), ArgumentError);
}

TEST_CASE("generator registry") {
    auto models = generator_models();
    CHECK(std::find(models.begin(), models.end(), "fat-tree") != models.end());
    CHECK(std::find(models.begin(), models.end(), "bcube") != models.end());

    auto g = generate_topology("fat-tree", {{"k", "2"}, {"gateway", "true"}});
    CHECK(count_kind(g, NodeKind::gateway) == 1);
    CHECK_THROWS_AS(generate_topology("hypercube", {}), ArgumentError);
    CHECK_THROWS_AS(generate_topology("fat-tree", {{"k", "nope"}}), ArgumentError);

    class Pair : public TopologyGenerator {
    public:
        std::string model() const override { return "pair"; }
        TopologyGraph generate(const std::map<std::string, std::string>&) const override {
            TopologyGraph g;
            g.nodes = {{"a", NodeKind::server, {}}, {"b", NodeKind::server, {}}};
            g.links = {{"a", "b"}};
            return g;
        }
    };
    register_generator(std::make_shared<Pair>());
    CHECK(generate_topology("pair", {}).nodes.size() == 2);
}

TEST_CASE("validate_topology flags unreachable nodes") {
    TopologyGraph g;
    g.nodes = {{"a", NodeKind::server, {}},
               {"b", NodeKind::server, {}},
               {"c", NodeKind::server, {}}};
    g.links = {{"a", "b"}};
    auto violations = validate_topology(g);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("c") != std::string::npos);
}
