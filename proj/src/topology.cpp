#include "ctxvuln/topology.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ctxvuln/errors.hpp"
#include "csv_util.hpp"
#include "json_util.hpp"

namespace ctxvuln {

using detail::json;

std::string to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::server: return "server";
        case NodeKind::edge_switch: return "edge_switch";
        case NodeKind::aggregation_switch: return "aggregation_switch";
        case NodeKind::core_switch: return "core_switch";
        case NodeKind::gateway: return "gateway";
    }
    throw ArgumentError("unknown node kind value");
}

NodeKind node_kind_from_string(const std::string& s) {
    if (s == "server") return NodeKind::server;
    if (s == "edge_switch") return NodeKind::edge_switch;
    if (s == "aggregation_switch") return NodeKind::aggregation_switch;
    if (s == "core_switch") return NodeKind::core_switch;
    if (s == "gateway") return NodeKind::gateway;
    throw ParseError("unknown node kind \"" + s + "\"");
}

namespace {

void check_graph(const TopologyGraph& g) {
    std::unordered_set<std::string> ids;
    for (const auto& n : g.nodes) {
        if (n.id.empty()) throw ValidationError("node with empty id");
        if (!ids.insert(n.id).second)
            throw ValidationError("duplicate node id \"" + n.id + "\"");
    }
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& l : g.links) {
        if (l.a == l.b) throw ValidationError("self-link on \"" + l.a + "\"");
        for (const auto* end : {&l.a, &l.b})
            if (!ids.count(*end))
                throw ValidationError("link references unknown node \"" + *end + "\"");
        auto key = std::minmax(l.a, l.b);
        if (!seen.insert(key).second)
            throw ValidationError("duplicate link " + l.a + " -- " + l.b);
    }
}

TopologyGraph parse_topology_json(const std::string& text) {
    json doc = detail::parse_json(text, "topology");
    TopologyGraph g;
    if (!doc.is_object()) throw ParseError("topology: expected a JSON object");
    for (const auto& jn : detail::require<json>(doc, "nodes", "topology")) {
        TopologyNode n;
        n.id = detail::require<std::string>(jn, "id", "topology node");
        n.kind = node_kind_from_string(
            detail::require<std::string>(jn, "kind", "topology node \"" + n.id + "\""));
        if (jn.contains("labels"))
            for (const auto& l : jn.at("labels")) n.labels.insert(l.get<std::string>());
        g.nodes.push_back(std::move(n));
    }
    for (const auto& jl : detail::require<json>(doc, "links", "topology")) {
        g.links.push_back({detail::require<std::string>(jl, "a", "topology link"),
                           detail::require<std::string>(jl, "b", "topology link")});
    }
    check_graph(g);
    return g;
}

TopologyGraph parse_topology_csv(const std::string& text) {
    TopologyGraph g;
    bool first = true;
    for (const auto& [line_no, line] : detail::csv_lines(text)) {
        auto fields = detail::split(line, ',');
        const std::string& tag = fields[0];
        if (tag != "node" && tag != "link") {
            // a leading header row is tolerated, anything later is a typo
            if (first) {
                first = false;
                continue;
            }
            throw ParseError("line " + std::to_string(line_no) +
                             ": unknown row tag \"" + tag + "\"");
        }
        first = false;
        if (tag == "node") {
            if (fields.size() < 3 || fields.size() > 4)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": node row needs id,kind[,labels]");
            TopologyNode n;
            n.id = fields[1];
            try {
                n.kind = node_kind_from_string(fields[2]);
            } catch (const ParseError& e) {
                throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
            }
            if (fields.size() == 4 && !fields[3].empty())
                for (const auto& lab : detail::split(fields[3], ';'))
                    if (!lab.empty()) n.labels.insert(lab);
            g.nodes.push_back(std::move(n));
        } else {
            // spreadsheet exports pad every row to the header width, so one
            // trailing empty field is fine
            bool padded = fields.size() == 4 && fields[3].empty();
            if (fields.size() != 3 && !padded)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": link row needs exactly a,b");
            g.links.push_back({fields[1], fields[2]});
        }
    }
    check_graph(g);
    return g;
}

}  // namespace

TopologyGraph parse_topology(const std::string& text, TopoFormat format) {
    return format == TopoFormat::json ? parse_topology_json(text)
                                      : parse_topology_csv(text);
}

std::string serialize_topology(const TopologyGraph& graph, TopoFormat format) {
    if (format == TopoFormat::json) {
        json doc;
        doc["nodes"] = json::array();
        for (const auto& n : graph.nodes) {
            json jn;
            jn["id"] = n.id;
            jn["kind"] = to_string(n.kind);
            jn["labels"] = json::array();
            for (const auto& l : n.labels) jn["labels"].push_back(l);
            doc["nodes"].push_back(std::move(jn));
        }
        doc["links"] = json::array();
        for (const auto& l : graph.links) doc["links"].push_back({{"a", l.a}, {"b", l.b}});
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    for (const auto& n : graph.nodes) {
        out << "node," << n.id << ',' << to_string(n.kind) << ',';
        bool sep = false;
        for (const auto& l : n.labels) {
            if (sep) out << ';';
            out << l;
            sep = true;
        }
        out << '\n';
    }
    for (const auto& l : graph.links) out << "link," << l.a << ',' << l.b << '\n';
    return out.str();
}

std::vector<std::string> validate_topology(const TopologyGraph& graph) {
    std::vector<std::string> bad;
    std::unordered_set<std::string> ids;
    for (const auto& n : graph.nodes) {
        if (n.id.empty()) bad.push_back("node with empty id");
        else if (!ids.insert(n.id).second)
            bad.push_back("duplicate node id \"" + n.id + "\"");
    }
    std::set<std::pair<std::string, std::string>> seen;
    std::unordered_map<std::string, std::vector<std::string>> adj;
    for (const auto& l : graph.links) {
        if (l.a == l.b) {
            bad.push_back("self-link on \"" + l.a + "\"");
            continue;
        }
        bool ends_ok = true;
        for (const auto* end : {&l.a, &l.b}) {
            if (!ids.count(*end)) {
                bad.push_back("link references unknown node \"" + *end + "\"");
                ends_ok = false;
            }
        }
        if (!ends_ok) continue;
        auto key = std::minmax(l.a, l.b);
        if (!seen.insert(key).second) {
            bad.push_back("duplicate link " + key.first + " -- " + key.second);
            continue;
        }
        adj[l.a].push_back(l.b);
        adj[l.b].push_back(l.a);
    }
    if (!graph.nodes.empty()) {
        std::unordered_set<std::string> reach{graph.nodes.front().id};
        std::deque<std::string> q{graph.nodes.front().id};
        while (!q.empty()) {
            auto u = q.front();
            q.pop_front();
            for (const auto& v : adj[u])
                if (reach.insert(v).second) q.push_back(v);
        }
        for (const auto& n : graph.nodes)
            if (!reach.count(n.id))
                bad.push_back("node \"" + n.id + "\" unreachable from \"" +
                              graph.nodes.front().id + "\"");
    }
    return bad;
}

TopologyGraph generate_fat_tree(int k, const FatTreeOptions& opts) {
    if (k < 2 || k % 2 != 0) throw ArgumentError("fat-tree arity k must be even and >= 2");
    int half = k / 2;
    int hosts = opts.hosts_per_edge > 0 ? opts.hosts_per_edge : half;
    TopologyGraph g;
    for (int c = 0; c < half * half; ++c)
        g.nodes.push_back({"core" + std::to_string(c), NodeKind::core_switch, {}});
    for (int p = 0; p < k; ++p) {
        std::string pod = "pod" + std::to_string(p);
        for (int j = 0; j < half; ++j)
            g.nodes.push_back({pod + "-agg" + std::to_string(j),
                               NodeKind::aggregation_switch, {pod}});
        for (int e = 0; e < half; ++e) {
            std::string edge = pod + "-edge" + std::to_string(e);
            g.nodes.push_back({edge, NodeKind::edge_switch, {pod}});
            for (int s = 0; s < hosts; ++s)
                g.nodes.push_back({edge + "-srv" + std::to_string(s),
                                   NodeKind::server, {pod}});
        }
    }
    for (int p = 0; p < k; ++p) {
        std::string pod = "pod" + std::to_string(p);
        for (int e = 0; e < half; ++e) {
            std::string edge = pod + "-edge" + std::to_string(e);
            for (int s = 0; s < hosts; ++s)
                g.links.push_back({edge + "-srv" + std::to_string(s), edge});
            for (int j = 0; j < half; ++j)
                g.links.push_back({edge, pod + "-agg" + std::to_string(j)});
        }
        // aggregation switch j serves core group j: cores [j*half, (j+1)*half)
        for (int j = 0; j < half; ++j)
            for (int c = 0; c < half; ++c)
                g.links.push_back({pod + "-agg" + std::to_string(j),
                                   "core" + std::to_string(j * half + c)});
    }
    if (opts.include_gateway) {
        g.nodes.push_back({"gw0", NodeKind::gateway, {}});
        for (int c = 0; c < half * half; ++c)
            g.links.push_back({"gw0", "core" + std::to_string(c)});
    }
    return g;
}

TopologyGraph generate_bcube(int n, int levels, bool include_gateway) {
    if (n < 2) throw ArgumentError("bcube port count n must be >= 2");
    if (levels < 0) throw ArgumentError("bcube level count must be >= 0");
    int k = levels;
    long servers = 1;
    for (int i = 0; i <= k; ++i) {
        servers *= n;
        if (servers > 1'000'000) throw ArgumentError("bcube size too large");
    }
    long per_level = servers / n;  // n^k switches per level

    // ids carry the base-n digit vector so the wiring is readable
    auto digits_of = [&](long v, int count) {
        std::vector<int> d(count);
        for (int i = count - 1; i >= 0; --i) {
            d[i] = static_cast<int>(v % n);
            v /= n;
        }
        return d;
    };
    auto join = [](const std::vector<int>& d) {
        std::string s;
        for (int x : d) s += "_" + std::to_string(x);
        return s;
    };

    TopologyGraph g;
    for (long s = 0; s < servers; ++s)
        g.nodes.push_back({"srv" + join(digits_of(s, k + 1)), NodeKind::server, {}});
    for (int l = 0; l <= k; ++l) {
        NodeKind kind = l == 0 ? NodeKind::edge_switch : NodeKind::aggregation_switch;
        for (long w = 0; w < per_level; ++w)
            g.nodes.push_back({"sw_" + std::to_string(l) + join(digits_of(w, k)), kind, {}});
    }
    for (long s = 0; s < servers; ++s) {
        auto d = digits_of(s, k + 1);
        std::string sid = "srv" + join(d);
        for (int l = 0; l <= k; ++l) {
            // the level-l switch label is the server label with digit l removed;
            // digit index 0 is the most significant, so level l strikes
            // position k - l
            std::vector<int> w;
            for (int i = 0; i <= k; ++i)
                if (i != k - l) w.push_back(d[i]);
            g.links.push_back({sid, "sw_" + std::to_string(l) + join(w)});
        }
    }
    if (include_gateway) {
        g.nodes.push_back({"gw0", NodeKind::gateway, {}});
        for (long w = 0; w < per_level; ++w)
            g.links.push_back({"gw0", "sw_" + std::to_string(k) + join(digits_of(w, k))});
    }
    return g;
}

namespace {

int param_int(const std::map<std::string, std::string>& params, const std::string& key,
              bool required, int fallback) {
    auto it = params.find(key);
    if (it == params.end()) {
        if (required) throw ArgumentError("generator requires parameter \"" + key + "\"");
        return fallback;
    }
    try {
        size_t used = 0;
        int v = std::stoi(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("parameter \"" + key + "\" is not an integer: " + it->second);
    }
}

bool param_flag(const std::map<std::string, std::string>& params, const std::string& key) {
    auto it = params.find(key);
    return it != params.end() && (it->second == "1" || it->second == "true");
}

class FatTreeGenerator : public TopologyGenerator {
public:
    std::string model() const override { return "fat-tree"; }
    TopologyGraph generate(const std::map<std::string, std::string>& params) const override {
        FatTreeOptions opts;
        opts.hosts_per_edge = param_int(params, "hosts_per_edge", false, 0);
        opts.include_gateway = param_flag(params, "gateway");
        return generate_fat_tree(param_int(params, "k", true, 0), opts);
    }
};

class BCubeGenerator : public TopologyGenerator {
public:
    std::string model() const override { return "bcube"; }
    TopologyGraph generate(const std::map<std::string, std::string>& params) const override {
        return generate_bcube(param_int(params, "n", true, 0),
                              param_int(params, "levels", true, 0),
                              param_flag(params, "gateway"));
    }
};

struct Registry {
    std::mutex mu;
    std::map<std::string, std::shared_ptr<TopologyGenerator>> by_model;
};

Registry& registry() {
    static Registry r;
    static std::once_flag seeded;
    std::call_once(seeded, [] {
        r.by_model["fat-tree"] = std::make_shared<FatTreeGenerator>();
        r.by_model["bcube"] = std::make_shared<BCubeGenerator>();
    });
    return r;
}

}  // namespace

void register_generator(std::shared_ptr<TopologyGenerator> gen) {
    if (!gen) throw ArgumentError("null generator");
    auto& r = registry();
    std::lock_guard<std::mutex> lock(r.mu);
    r.by_model[gen->model()] = std::move(gen);
}

std::vector<std::string> generator_models() {
    auto& r = registry();
    std::lock_guard<std::mutex> lock(r.mu);
    std::vector<std::string> out;
    for (const auto& [m, _] : r.by_model) out.push_back(m);
    return out;
}

TopologyGraph generate_topology(const std::string& model,
                                const std::map<std::string, std::string>& params) {
    std::shared_ptr<TopologyGenerator> gen;
    {
        auto& r = registry();
        std::lock_guard<std::mutex> lock(r.mu);
        auto it = r.by_model.find(model);
        if (it == r.by_model.end())
            throw ArgumentError("unknown topology model \"" + model + "\"");
        gen = it->second;
    }
    return gen->generate(params);
}

}  // namespace ctxvuln
