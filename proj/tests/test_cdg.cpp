#include <doctest.h>

#include <algorithm>
#include <tuple>

#include "ctxvuln/cdg.hpp"
#include "ctxvuln/errors.hpp"

using namespace ctxvuln;

namespace {

TopologyGraph two_hosts() {
    TopologyGraph g;
    g.nodes = {{"m", NodeKind::server, {}}, {"n", NodeKind::server, {}}};
    g.links = {{"m", "n"}};
    return g;
}

bool has_edge(const Cdg& cdg, const std::string& from, const std::string& to, EdgeKind kind) {
    return std::find(cdg.edges.begin(), cdg.edges.end(), CdgEdge{from, to, kind}) !=
           cdg.edges.end();
}

}  // namespace

TEST_CASE("graph assembly wires all four edge kinds") {
    EndpointMap endpoints = {
        {{"10.0.0.1", 80, Proto::tcp}, {"m", "web"}},
        {{"10.0.0.2", 5432, Proto::tcp}, {"n", "db"}},
    };
    std::vector<SoftwareDependency> sw = {{"m", "web", {"runtime"}}};
    std::vector<NetworkDependency> net = {
        {{"10.0.0.1", 80, Proto::tcp}, {"10.0.0.2", 5432, Proto::tcp}, 0.8}};

    auto cdg = build_cdg(two_hosts(), sw, net, endpoints);

    // hardware first in topology order, then software sorted by id
    REQUIRE(cdg.nodes.size() == 5);
    CHECK(cdg.nodes[0].id == "m");
    CHECK(cdg.nodes[1].id == "n");
    CHECK(cdg.nodes[2].id == "db@n");
    CHECK(cdg.nodes[3].id == "runtime@m");
    CHECK(cdg.nodes[4].id == "web@m");
    CHECK(cdg.nodes[2].layer == Layer::software);
    CHECK(cdg.nodes[2].name == "db");
    CHECK(cdg.nodes[2].host == "n");
    CHECK(cdg.nodes[0].kind == NodeKind::server);

    CHECK(has_edge(cdg, "m", "n", EdgeKind::hw_link));
    CHECK(has_edge(cdg, "n", "m", EdgeKind::hw_link));
    CHECK(has_edge(cdg, "web@m", "m", EdgeKind::hosted_on));
    CHECK(has_edge(cdg, "web@m", "runtime@m", EdgeKind::software_dep));
    CHECK(has_edge(cdg, "web@m", "db@n", EdgeKind::network_dep));
    CHECK(std::is_sorted(cdg.edges.begin(), cdg.edges.end(),
                         [](const CdgEdge& a, const CdgEdge& b) {
                             return std::tie(a.kind, a.from, a.to) <
                                    std::tie(b.kind, b.from, b.to);
                         }));
}

TEST_CASE("software node ids") {
    CHECK(software_node_id("s1", "hadoop-datanode") == "hadoop-datanode@s1");
}

TEST_CASE("assembly validations") {
    EndpointMap none;
    CHECK_THROWS_WITH_AS(build_cdg(two_hosts(), {{"ghost", "web", {"runtime"}}}, {}, none),
                         doctest::Contains("not in the topology"), ValidationError);
    CHECK_THROWS_AS(build_cdg(two_hosts(), {{"m", "web", {"web"}}}, {}, none),
                    ValidationError);
    CHECK_THROWS_AS(build_cdg(two_hosts(),
                              {{"m", "web", {"runtime"}}, {"m", "web", {"other"}}}, {}, none),
                    ValidationError);

    std::vector<NetworkDependency> net = {
        {{"10.0.0.1", 80, Proto::tcp}, {"10.0.0.2", 5432, Proto::tcp}, 0.8}};
    CHECK_THROWS_WITH_AS(build_cdg(two_hosts(), {}, net, none),
                         doctest::Contains("10.0.0.1:80/TCP"), ValidationError);
}

TEST_CASE("id collisions between distinct host and component splits are caught") {
    TopologyGraph g;
    g.nodes = {{"b@c", NodeKind::server, {}}, {"c", NodeKind::server, {}}};
    g.links = {{"b@c", "c"}};
    // "a@b" on host "c" and "a" on host "b@c" both spell node id "a@b@c"
    std::vector<SoftwareDependency> sw = {
        {"c", "a@b", {"x"}},
        {"b@c", "a", {"y"}},
    };
    CHECK_THROWS_WITH_AS(build_cdg(g, sw, {}, {}), doctest::Contains("collision"),
                         ValidationError);
}

TEST_CASE("software dependency cycles drop the lexicographically last equal-weight edge") {
    std::vector<SoftwareDependency> sw = {
        {"m", "a", {"b"}},
        {"m", "b", {"c"}},
        {"m", "c", {"a"}},
    };
    std::vector<DroppedEdge> dropped;
    auto cdg = build_cdg(two_hosts(), sw, {}, {}, &dropped);
    REQUIRE(dropped.size() == 1);
    CHECK(dropped[0] == DroppedEdge{"c@m", "a@m", EdgeKind::software_dep, 1.0});
    CHECK(has_edge(cdg, "a@m", "b@m", EdgeKind::software_dep));
    CHECK(has_edge(cdg, "b@m", "c@m", EdgeKind::software_dep));
    CHECK_FALSE(has_edge(cdg, "c@m", "a@m", EdgeKind::software_dep));
}

TEST_CASE("network dependency cycles drop the weakest edge") {
    EndpointMap endpoints = {
        {{"10.0.0.1", 80, Proto::tcp}, {"m", "web"}},
        {{"10.0.0.2", 5432, Proto::tcp}, {"n", "db"}},
    };
    ServiceEndpoint web{"10.0.0.1", 80, Proto::tcp};
    ServiceEndpoint db{"10.0.0.2", 5432, Proto::tcp};
    std::vector<NetworkDependency> net = {
        {web, db, 0.3},
        {web, db, 0.9},  // duplicate observation; the stronger one survives
        {db, web, 0.6},
    };
    std::vector<DroppedEdge> dropped;
    auto cdg = build_cdg(two_hosts(), {}, net, endpoints, &dropped);
    REQUIRE(dropped.size() == 1);
    CHECK(dropped[0] == DroppedEdge{"db@n", "web@m", EdgeKind::network_dep, 0.6});
    CHECK(has_edge(cdg, "web@m", "db@n", EdgeKind::network_dep));
}

TEST_CASE("network dependencies resolving to one software node are ignored") {
    EndpointMap endpoints = {
        {{"10.0.0.1", 80, Proto::tcp}, {"m", "web"}},
        {{"10.0.0.1", 8080, Proto::tcp}, {"m", "web"}},  // second port, same service
    };
    std::vector<NetworkDependency> net = {
        {{"10.0.0.1", 80, Proto::tcp}, {"10.0.0.1", 8080, Proto::tcp}, 1.0}};
    auto cdg = build_cdg(two_hosts(), {}, net, endpoints);
    for (const auto& e : cdg.edges) CHECK(e.kind != EdgeKind::network_dep);
}

TEST_CASE("projections") {
    EndpointMap endpoints = {
        {{"10.0.0.1", 80, Proto::tcp}, {"m", "web"}},
        {{"10.0.0.2", 5432, Proto::tcp}, {"n", "db"}},
    };
    std::vector<SoftwareDependency> sw = {{"m", "web", {"runtime"}}};
    std::vector<NetworkDependency> net = {
        {{"10.0.0.1", 80, Proto::tcp}, {"10.0.0.2", 5432, Proto::tcp}, 0.8}};
    auto cdg = build_cdg(two_hosts(), sw, net, endpoints);

    auto hw = project(cdg, Projection::hw_graph);
    CHECK(hw.nodes == std::vector<std::string>{"m", "n"});
    CHECK(hw.edges.size() == 2);  // one physical link, both directions

    auto swp = project(cdg, Projection::sw_graph);
    CHECK(swp.nodes.size() == 3);  // db@n sits isolated but present
    CHECK(swp.edges.size() == 1);

    auto netp = project(cdg, Projection::net_graph);
    CHECK(netp.nodes == std::vector<std::string>{"db@n", "web@m"});
    CHECK(netp.edges == std::vector<std::pair<int32_t, int32_t>>{{1, 0}});
}

TEST_CASE("cdg serialization round trip") {
    EndpointMap endpoints = {
        {{"10.0.0.1", 80, Proto::tcp}, {"m", "web"}},
        {{"10.0.0.2", 5432, Proto::tcp}, {"n", "db"}},
    };
    std::vector<SoftwareDependency> sw = {{"m", "web", {"runtime"}}};
    std::vector<NetworkDependency> net = {
        {{"10.0.0.1", 80, Proto::tcp}, {"10.0.0.2", 5432, Proto::tcp}, 0.8}};
    auto cdg = build_cdg(two_hosts(), sw, net, endpoints);
    auto text = serialize_cdg(cdg);
    auto back = parse_cdg(text);
    CHECK(back.nodes == cdg.nodes);
    CHECK(back.edges == cdg.edges);
    CHECK(serialize_cdg(back) == text);
}

TEST_CASE("cdg parsing enforces layer and hosting rules") {
    std::string hw_only = R"({
      "nodes": [{"id": "m", "kind": "server", "layer": "hardware", "name": "m"},
                {"id": "n", "kind": "server", "layer": "hardware", "name": "n"}],
      "edges": [{"from": "m", "to": "n", "kind": "hw_link"}]
    })";
    CHECK(parse_cdg(hw_only).nodes.size() == 2);

    CHECK_THROWS_AS(parse_cdg(R"({
      "nodes": [{"id": "m", "kind": "server", "layer": "hardware", "name": "m"}],
      "edges": [{"from": "m", "to": "ghost", "kind": "hw_link"}]
    })"), ParseError);

    // software node without its hosted_on edge
    CHECK_THROWS_AS(parse_cdg(R"({
      "nodes": [{"id": "m", "kind": "server", "layer": "hardware", "name": "m"},
                {"id": "web@m", "layer": "software", "name": "web", "host": "m"}],
      "edges": []
    })"), ValidationError);

    // software_dep across hosts
    CHECK_THROWS_AS(parse_cdg(R"({
      "nodes": [{"id": "m", "kind": "server", "layer": "hardware", "name": "m"},
                {"id": "n", "kind": "server", "layer": "hardware", "name": "n"},
                {"id": "a@m", "layer": "software", "name": "a", "host": "m"},
                {"id": "b@n", "layer": "software", "name": "b", "host": "n"}],
      "edges": [{"from": "a@m", "to": "m", "kind": "hosted_on"},
                {"from": "b@n", "to": "n", "kind": "hosted_on"},
                {"from": "a@m", "to": "b@n", "kind": "software_dep"}]
    })"), ValidationError);

    // a dependency cycle must not survive a round trip through the file form
    CHECK_THROWS_AS(parse_cdg(R"({
      "nodes": [{"id": "m", "kind": "server", "layer": "hardware", "name": "m"},
                {"id": "a@m", "layer": "software", "name": "a", "host": "m"},
                {"id": "b@m", "layer": "software", "name": "b", "host": "m"}],
      "edges": [{"from": "a@m", "to": "m", "kind": "hosted_on"},
                {"from": "b@m", "to": "m", "kind": "hosted_on"},
                {"from": "a@m", "to": "b@m", "kind": "software_dep"},
                {"from": "b@m", "to": "a@m", "kind": "software_dep"}]
    })"), ValidationError);
}

TEST_CASE("endpoint map serialization round trip") {
    EndpointMap endpoints = {
        {{"10.0.0.1", 80, Proto::tcp}, {"m", "web"}},
        {{"10.0.0.2", 53, Proto::udp}, {"n", "dns"}},
    };
    CHECK(parse_endpoint_map(serialize_endpoint_map(endpoints)) == endpoints);
    CHECK_THROWS_AS(parse_endpoint_map(R"([
      {"ip": "10.0.0.1", "port": 80, "proto": "TCP", "host": "m", "component": "web"},
      {"ip": "10.0.0.1", "port": 80, "proto": "tcp", "host": "n", "component": "db"}
    ])"), ValidationError);
}
