#include "ctxvuln/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ctxvuln/errors.hpp"

namespace ctxvuln {

std::vector<double> pagerank(const DirectedGraph& graph, const RankConfig& config) {
    size_t n = graph.nodes.size();
    if (n == 0) throw ArgumentError("pagerank needs a nonempty graph");
    if (!(config.damping > 0.0 && config.damping < 1.0))
        throw ArgumentError("damping must be in (0, 1)");
    if (config.max_iterations < 1) throw ArgumentError("max_iterations must be >= 1");
    if (!(config.tolerance > 0.0)) throw ArgumentError("tolerance must be positive");

    std::vector<int32_t> outdeg(n, 0);
    for (auto [u, v] : graph.edges) {
        if (u < 0 || v < 0 || static_cast<size_t>(u) >= n || static_cast<size_t>(v) >= n)
            throw ArgumentError("edge index out of range");
        ++outdeg[u];
    }

    double d = config.damping;
    std::vector<double> x(n, 1.0 / n), next(n);
    for (int it = 0; it < config.max_iterations; ++it) {
        double dangling = 0.0;
        for (size_t v = 0; v < n; ++v)
            if (outdeg[v] == 0) dangling += x[v];
        std::fill(next.begin(), next.end(), (1.0 - d) / n + d * dangling / n);
        for (auto [u, v] : graph.edges) next[v] += d * x[u] / outdeg[u];
        double l1 = 0.0;
        for (size_t v = 0; v < n; ++v) l1 += std::fabs(next[v] - x[v]);
        x.swap(next);
        if (l1 < config.tolerance) break;
    }
    return x;
}

std::vector<double> PageRankRanker::rank(const DirectedGraph& graph) const {
    return pagerank(graph, config_);
}

std::vector<ImportanceTriple> compute_importances(const Cdg& cdg, const RankConfig& config) {
    return compute_importances(cdg, PageRankRanker(config));
}

std::vector<ImportanceTriple> compute_importances(const Cdg& cdg, const Ranker& ranker) {
    // one ranking per projection; per-node scores are read off afterwards
    auto rank_scores = [&](Projection which) {
        DirectedGraph g = project(cdg, which);
        std::unordered_map<std::string, double> scores;
        if (!g.nodes.empty()) {
            auto r = ranker.rank(g);
            for (size_t i = 0; i < g.nodes.size(); ++i) scores.emplace(g.nodes[i], r[i]);
        }
        return scores;
    };
    auto hw = rank_scores(Projection::hw_graph);
    auto sw = rank_scores(Projection::sw_graph);
    auto net = rank_scores(Projection::net_graph);

    auto score_or_zero = [](const std::unordered_map<std::string, double>& m,
                            const std::string& id) {
        auto it = m.find(id);
        return it == m.end() ? 0.0 : it->second;
    };

    std::vector<ImportanceTriple> out;
    for (const auto& n : cdg.nodes) {
        if (n.layer != Layer::software) continue;
        ImportanceTriple t;
        t.node = n.id;
        t.ti = score_or_zero(hw, n.host);  // the host's hardware-layer score
        t.si = score_or_zero(sw, n.id);
        t.ni = score_or_zero(net, n.id);
        out.push_back(std::move(t));
    }
    return out;
}

std::string to_string(Aggregator aggregator) {
    return aggregator == Aggregator::weighted_sum ? "weighted_sum" : "cvss_product";
}

Aggregator aggregator_from_string(const std::string& s) {
    if (s == "weighted_sum" || s == "weighted-sum") return Aggregator::weighted_sum;
    if (s == "cvss_product" || s == "cvss-product") return Aggregator::cvss_product;
    throw ParseError("unknown aggregator \"" + s + "\"");
}

std::vector<VulnerabilityScore> score_vulnerabilities(
    const std::vector<VulnMatch>& matches, const std::vector<ImportanceTriple>& importances,
    const Weights& weights, Aggregator aggregator,
    const std::vector<VulnerabilityRecord>& vulndb) {
    if (weights.ti < 0.0 || weights.ni < 0.0 || weights.si < 0.0)
        throw ArgumentError("weights must be non-negative");
    if (weights.ti == 0.0 && weights.ni == 0.0 && weights.si == 0.0)
        throw ArgumentError("at least one weight must be positive");

    std::unordered_map<std::string, const ImportanceTriple*> triple_of;
    for (const auto& t : importances) triple_of.emplace(t.node, &t);
    std::unordered_map<std::string, double> base_of;
    for (const auto& r : vulndb) base_of.emplace(r.id, r.base_score);

    auto base_for = [&](const std::string& id) {
        auto it = base_of.find(id);
        if (it != base_of.end()) return it->second;
        if (aggregator == Aggregator::cvss_product)
            throw ValidationError("no base score for \"" + id + "\"");
        return 0.0;  // weighted_sum only needs the base for tie-breaking
    };

    std::vector<VulnerabilityScore> out;
    for (const auto& m : matches) {
        VulnerabilityScore s;
        s.vuln_id = m.vuln_id;
        s.aggregator = aggregator;
        s.affected_nodes = m.affected_nodes;
        for (const auto& node : m.affected_nodes) {
            auto it = triple_of.find(node);
            if (it == triple_of.end())
                throw ArgumentError("no importance triple for node \"" + node + "\"");
            const ImportanceTriple& t = *it->second;
            s.sum_ti += t.ti;
            s.sum_ni += t.ni;
            s.sum_si += t.si;
            s.sum_product += t.ti * t.ni * t.si;
        }
        if (aggregator == Aggregator::weighted_sum)
            s.severity = weights.ti * s.sum_ti + weights.ni * s.sum_ni + weights.si * s.sum_si;
        else
            s.severity = s.sum_product * base_for(m.vuln_id);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(),
              [&](const VulnerabilityScore& a, const VulnerabilityScore& b) {
                  if (a.severity != b.severity) return a.severity > b.severity;
                  double ba = base_for(a.vuln_id), bb = base_for(b.vuln_id);
                  if (ba != bb) return ba > bb;
                  return a.vuln_id < b.vuln_id;
              });
    return out;
}

}  // namespace ctxvuln
