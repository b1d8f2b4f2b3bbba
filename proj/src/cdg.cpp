#include "ctxvuln/cdg.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "ctxvuln/errors.hpp"
#include "json_util.hpp"

namespace ctxvuln {

using detail::json;

std::string to_string(Layer layer) {
    return layer == Layer::hardware ? "hardware" : "software";
}

Layer layer_from_string(const std::string& s) {
    if (s == "hardware") return Layer::hardware;
    if (s == "software") return Layer::software;
    throw ParseError("unknown layer \"" + s + "\"");
}

std::string to_string(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::hw_link: return "hw_link";
        case EdgeKind::software_dep: return "software_dep";
        case EdgeKind::network_dep: return "network_dep";
        case EdgeKind::hosted_on: return "hosted_on";
    }
    throw ArgumentError("unknown edge kind value");
}

EdgeKind edge_kind_from_string(const std::string& s) {
    if (s == "hw_link") return EdgeKind::hw_link;
    if (s == "software_dep") return EdgeKind::software_dep;
    if (s == "network_dep") return EdgeKind::network_dep;
    if (s == "hosted_on") return EdgeKind::hosted_on;
    throw ParseError("unknown edge kind \"" + s + "\"");
}

std::string software_node_id(const std::string& host, const std::string& component) {
    return component + "@" + host;
}

namespace {

std::string endpoint_str(const ServiceEndpoint& e) {
    return e.ip + ":" + std::to_string(e.port) + "/" + to_string(e.proto);
}

struct CandidateEdge {
    std::string from;
    std::string to;
    double weight = 0.0;
};

bool priority_order(const CandidateEdge& a, const CandidateEdge& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
}

// Keeps a mined edge set acyclic: candidates are considered strongest first
// and an edge that would close a cycle against already-kept edges is dropped
// (so the weakest edge of the cycle goes, lexicographically last on ties).
std::vector<CandidateEdge> break_cycles(std::vector<CandidateEdge> cands, EdgeKind kind,
                                        std::vector<DroppedEdge>* dropped) {
    // collapse duplicate (from, to) pairs onto the strongest observation
    std::sort(cands.begin(), cands.end(), [](const CandidateEdge& a, const CandidateEdge& b) {
        if (a.from != b.from) return a.from < b.from;
        if (a.to != b.to) return a.to < b.to;
        return a.weight > b.weight;
    });
    cands.erase(std::unique(cands.begin(), cands.end(),
                            [](const CandidateEdge& a, const CandidateEdge& b) {
                                return a.from == b.from && a.to == b.to;
                            }),
                cands.end());

    // cheap exit: peel the candidate graph from both ends; every cycle lives
    // entirely inside the surviving core, so only core-internal edges need
    // the incremental reachability test
    std::unordered_map<std::string, int> index;
    auto idx = [&](const std::string& v) {
        auto [it, fresh] = index.emplace(v, static_cast<int>(index.size()));
        return it->second;
    };
    std::vector<std::pair<int, int>> iedges;
    iedges.reserve(cands.size());
    for (const auto& c : cands) iedges.emplace_back(idx(c.from), idx(c.to));
    int n = static_cast<int>(index.size());

    auto peel = [&](const std::vector<char>& alive_in, bool by_indegree) {
        std::vector<char> alive = alive_in;
        std::vector<int> deg(n, 0);
        for (auto [u, v] : iedges)
            if (alive[u] && alive[v]) ++deg[by_indegree ? v : u];
        std::vector<std::vector<int>> touch(n);  // edges to re-examine per removed node
        for (int e = 0; e < static_cast<int>(iedges.size()); ++e) {
            auto [u, v] = iedges[e];
            if (alive[u] && alive[v]) touch[by_indegree ? u : v].push_back(e);
        }
        std::deque<int> q;
        for (int v = 0; v < n; ++v)
            if (alive[v] && deg[v] == 0) q.push_back(v);
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            alive[v] = 0;
            for (int e : touch[v]) {
                auto [a, b] = iedges[e];
                int other = by_indegree ? b : a;
                if (alive[other] && --deg[other] == 0) q.push_back(other);
            }
        }
        return alive;
    };
    std::vector<char> core(n, 1);
    core = peel(core, true);
    core = peel(core, false);
    bool any_core = std::any_of(core.begin(), core.end(), [](char c) { return c != 0; });

    std::sort(cands.begin(), cands.end(), priority_order);
    if (!any_core) return cands;  // already acyclic

    std::vector<std::vector<int>> adj(n);  // kept core-internal edges
    auto reaches = [&](int src, int dst) {
        std::vector<char> seen(n, 0);
        std::deque<int> stack{src};
        seen[src] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (u == dst) return true;
            for (int v : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
        return false;
    };

    std::vector<CandidateEdge> kept;
    kept.reserve(cands.size());
    for (const auto& c : cands) {
        int u = index.at(c.from), v = index.at(c.to);
        if (core[u] && core[v]) {
            if (reaches(v, u)) {
                if (dropped) dropped->push_back({c.from, c.to, kind, c.weight});
                continue;
            }
            adj[u].push_back(v);
        }
        kept.push_back(c);
    }
    return kept;
}

}  // namespace

Cdg build_cdg(const TopologyGraph& topo, const std::vector<SoftwareDependency>& sw_deps,
              const std::vector<NetworkDependency>& net_deps, const EndpointMap& endpoints,
              std::vector<DroppedEdge>* dropped) {
    Cdg cdg;
    std::unordered_set<std::string> hw_ids;
    for (const auto& tn : topo.nodes) {
        if (!hw_ids.insert(tn.id).second)
            throw ValidationError("duplicate hardware node id \"" + tn.id + "\"");
        CdgNode n;
        n.id = tn.id;
        n.layer = Layer::hardware;
        n.name = tn.id;
        n.kind = tn.kind;
        cdg.nodes.push_back(std::move(n));
    }

    // software nodes keyed by id; the pair guards against two distinct
    // (host, component) combinations colliding on the same id string
    std::map<std::string, std::pair<std::string, std::string>> sw_nodes;
    auto add_software = [&](const std::string& host, const std::string& component) {
        if (component.empty()) throw ValidationError("empty software component name");
        if (!hw_ids.count(host))
            throw ValidationError("software host \"" + host + "\" is not in the topology");
        std::string id = software_node_id(host, component);
        auto [it, fresh] = sw_nodes.emplace(id, std::make_pair(host, component));
        if (!fresh && it->second != std::make_pair(host, component))
            throw ValidationError("software node id collision on \"" + id + "\"");
        return id;
    };

    std::vector<CandidateEdge> sw_cands;
    std::set<std::pair<std::string, std::string>> seen_sw;
    for (const auto& d : sw_deps) {
        if (d.dep.empty())
            throw ValidationError("software dependency for \"" + d.sw + "\" on \"" + d.node +
                                  "\" has no dependencies");
        if (!seen_sw.insert({d.node, d.sw}).second)
            throw ValidationError("duplicate software dependency record for \"" + d.sw +
                                  "\" on \"" + d.node + "\"");
        std::string from = add_software(d.node, d.sw);
        for (const auto& dep : d.dep) {
            if (dep == d.sw)
                throw ValidationError("\"" + d.sw + "\" on \"" + d.node +
                                      "\" depends on itself");
            // mined rules carry no per-edge confidence at this point, so
            // software edges compete equally in the cycle breaker
            sw_cands.push_back({from, add_software(d.node, dep), 1.0});
        }
    }

    std::vector<CandidateEdge> net_cands;
    auto resolve = [&](const ServiceEndpoint& e) {
        auto it = endpoints.find(e);
        if (it == endpoints.end())
            throw ValidationError("no endpoint mapping for " + endpoint_str(e));
        return add_software(it->second.first, it->second.second);
    };
    for (const auto& d : net_deps) {
        std::string from = resolve(d.upstream);
        std::string to = resolve(d.downstream);
        if (from != to) net_cands.push_back({from, to, d.weight});
    }

    for (const auto& [id, hc] : sw_nodes) {
        CdgNode n;
        n.id = id;
        n.layer = Layer::software;
        n.name = hc.second;
        n.host = hc.first;
        cdg.nodes.push_back(std::move(n));
    }

    for (const auto& l : topo.links) {
        cdg.edges.push_back({l.a, l.b, EdgeKind::hw_link});
        cdg.edges.push_back({l.b, l.a, EdgeKind::hw_link});
    }
    for (const auto& [id, hc] : sw_nodes)
        cdg.edges.push_back({id, hc.first, EdgeKind::hosted_on});
    for (const auto& c : break_cycles(std::move(sw_cands), EdgeKind::software_dep, dropped))
        cdg.edges.push_back({c.from, c.to, EdgeKind::software_dep});
    for (const auto& c : break_cycles(std::move(net_cands), EdgeKind::network_dep, dropped))
        cdg.edges.push_back({c.from, c.to, EdgeKind::network_dep});

    std::sort(cdg.edges.begin(), cdg.edges.end(), [](const CdgEdge& a, const CdgEdge& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.from != b.from) return a.from < b.from;
        return a.to < b.to;
    });
    return cdg;
}

DirectedGraph project(const Cdg& cdg, Projection which) {
    DirectedGraph g;
    std::unordered_map<std::string, int32_t> index;
    auto add_node = [&](const std::string& id) {
        if (index.emplace(id, static_cast<int32_t>(g.nodes.size())).second)
            g.nodes.push_back(id);
    };

    EdgeKind want = which == Projection::hw_graph    ? EdgeKind::hw_link
                    : which == Projection::sw_graph  ? EdgeKind::software_dep
                                                     : EdgeKind::network_dep;

    if (which == Projection::net_graph) {
        // only software nodes that participate in a network dependency
        std::set<std::string> touched;
        for (const auto& e : cdg.edges)
            if (e.kind == EdgeKind::network_dep) {
                touched.insert(e.from);
                touched.insert(e.to);
            }
        for (const auto& n : cdg.nodes)
            if (n.layer == Layer::software && touched.count(n.id)) add_node(n.id);
    } else {
        Layer want_layer = which == Projection::hw_graph ? Layer::hardware : Layer::software;
        for (const auto& n : cdg.nodes)
            if (n.layer == want_layer) add_node(n.id);
    }

    std::set<std::pair<int32_t, int32_t>> seen;
    for (const auto& e : cdg.edges) {
        if (e.kind != want) continue;
        auto fi = index.find(e.from);
        auto ti = index.find(e.to);
        if (fi == index.end() || ti == index.end()) continue;
        if (seen.insert({fi->second, ti->second}).second)
            g.edges.emplace_back(fi->second, ti->second);
    }
    return g;
}

std::string serialize_cdg(const Cdg& cdg) {
    json doc;
    doc["nodes"] = json::array();
    for (const auto& n : cdg.nodes) {
        json jn;
        jn["id"] = n.id;
        jn["layer"] = to_string(n.layer);
        jn["name"] = n.name;
        if (n.layer == Layer::software) jn["host"] = n.host;
        if (n.kind) jn["kind"] = to_string(*n.kind);
        doc["nodes"].push_back(std::move(jn));
    }
    doc["edges"] = json::array();
    for (const auto& e : cdg.edges)
        doc["edges"].push_back({{"from", e.from}, {"to", e.to}, {"kind", to_string(e.kind)}});
    return doc.dump(2) + "\n";
}

namespace {

// Kahn's check used on parsed input, where the graph must already be a DAG.
bool kind_edges_acyclic(const std::vector<CdgEdge>& edges, EdgeKind kind) {
    std::unordered_map<std::string, int> index;
    std::vector<std::pair<int, int>> es;
    for (const auto& e : edges) {
        if (e.kind != kind) continue;
        auto u = index.emplace(e.from, static_cast<int>(index.size())).first->second;
        auto v = index.emplace(e.to, static_cast<int>(index.size())).first->second;
        es.emplace_back(u, v);
    }
    int n = static_cast<int>(index.size());
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : es) {
        adj[u].push_back(v);
        ++indeg[v];
    }
    std::deque<int> q;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) q.push_back(v);
    int removed = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        ++removed;
        for (int v : adj[u])
            if (--indeg[v] == 0) q.push_back(v);
    }
    return removed == n;
}

}  // namespace

Cdg parse_cdg(const std::string& text) {
    json doc = detail::parse_json(text, "cdg");
    if (!doc.is_object()) throw ParseError("cdg: expected a JSON object");
    Cdg cdg;
    std::unordered_map<std::string, const CdgNode*> by_id;
    for (const auto& jn : detail::require<json>(doc, "nodes", "cdg")) {
        CdgNode n;
        n.id = detail::require<std::string>(jn, "id", "cdg node");
        std::string where = "cdg node \"" + n.id + "\"";
        n.layer = layer_from_string(detail::require<std::string>(jn, "layer", where));
        n.name = detail::require<std::string>(jn, "name", where);
        if (n.layer == Layer::software) {
            n.host = detail::require<std::string>(jn, "host", where);
            if (n.host.empty()) throw ValidationError(where + ": empty host");
        } else {
            n.kind = node_kind_from_string(detail::require<std::string>(jn, "kind", where));
        }
        cdg.nodes.push_back(std::move(n));
    }
    for (const auto& n : cdg.nodes) {
        if (!by_id.emplace(n.id, &n).second)
            throw ValidationError("duplicate cdg node id \"" + n.id + "\"");
    }
    for (const auto& n : cdg.nodes) {
        if (n.layer != Layer::software) continue;
        auto host = by_id.find(n.host);
        if (host == by_id.end() || host->second->layer != Layer::hardware)
            throw ValidationError("software node \"" + n.id + "\" hosted on unknown hardware \"" +
                                  n.host + "\"");
    }
    std::map<std::string, int> hosted_count;
    for (const auto& je : detail::require<json>(doc, "edges", "cdg")) {
        CdgEdge e;
        e.from = detail::require<std::string>(je, "from", "cdg edge");
        e.to = detail::require<std::string>(je, "to", "cdg edge");
        e.kind = edge_kind_from_string(detail::require<std::string>(je, "kind", "cdg edge"));
        auto fi = by_id.find(e.from);
        auto ti = by_id.find(e.to);
        if (fi == by_id.end())
            throw ParseError("cdg edge references unknown node \"" + e.from + "\"");
        if (ti == by_id.end())
            throw ParseError("cdg edge references unknown node \"" + e.to + "\"");
        const CdgNode& nf = *fi->second;
        const CdgNode& nt = *ti->second;
        std::string where = "cdg edge " + e.from + " -> " + e.to;
        switch (e.kind) {
            case EdgeKind::hw_link:
                if (nf.layer != Layer::hardware || nt.layer != Layer::hardware)
                    throw ValidationError(where + ": hw_link must join hardware nodes");
                break;
            case EdgeKind::software_dep:
                if (nf.layer != Layer::software || nt.layer != Layer::software)
                    throw ValidationError(where + ": software_dep must join software nodes");
                if (nf.host != nt.host)
                    throw ValidationError(where + ": software_dep must stay on one host");
                break;
            case EdgeKind::network_dep:
                if (nf.layer != Layer::software || nt.layer != Layer::software)
                    throw ValidationError(where + ": network_dep must join software nodes");
                break;
            case EdgeKind::hosted_on:
                if (nf.layer != Layer::software || nt.layer != Layer::hardware)
                    throw ValidationError(where + ": hosted_on must go software -> hardware");
                if (nf.host != nt.id)
                    throw ValidationError(where + ": hosted_on target is not the node's host");
                ++hosted_count[e.from];
                break;
        }
        cdg.edges.push_back(std::move(e));
    }
    for (const auto& n : cdg.nodes)
        if (n.layer == Layer::software && hosted_count[n.id] != 1)
            throw ValidationError("software node \"" + n.id +
                                  "\" must have exactly one hosted_on edge");
    for (EdgeKind kind : {EdgeKind::software_dep, EdgeKind::network_dep})
        if (!kind_edges_acyclic(cdg.edges, kind))
            throw ValidationError("cdg " + to_string(kind) + " edges contain a cycle");
    return cdg;
}

EndpointMap parse_endpoint_map(const std::string& text) {
    json doc = detail::parse_json(text, "endpoint map");
    if (!doc.is_array()) throw ParseError("endpoint map: expected a JSON array");
    EndpointMap out;
    size_t i = 0;
    for (const auto& je : doc) {
        std::string where = "endpoint map[" + std::to_string(i++) + "]";
        ServiceEndpoint e;
        e.ip = detail::require<std::string>(je, "ip", where);
        e.port = static_cast<uint16_t>(detail::require<int>(je, "port", where));
        e.proto = proto_from_string(detail::require<std::string>(je, "proto", where));
        if (e.port == 0) throw ValidationError(where + ": port out of range");
        std::string host = detail::require<std::string>(je, "host", where);
        std::string component = detail::require<std::string>(je, "component", where);
        if (host.empty() || component.empty())
            throw ValidationError(where + ": empty host or component");
        if (!out.emplace(e, std::make_pair(host, component)).second)
            throw ValidationError(where + ": duplicate endpoint " + endpoint_str(e));
    }
    return out;
}

std::string serialize_endpoint_map(const EndpointMap& endpoints) {
    json doc = json::array();
    for (const auto& [e, hc] : endpoints) {
        json je;
        je["ip"] = e.ip;
        je["port"] = e.port;
        je["proto"] = to_string(e.proto);
        je["host"] = hc.first;
        je["component"] = hc.second;
        doc.push_back(std::move(je));
    }
    return doc.dump(2) + "\n";
}

}  // namespace ctxvuln
