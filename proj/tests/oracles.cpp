#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

namespace oracles {

std::vector<double> pagerank_dense(size_t n,
                                   const std::vector<std::pair<int32_t, int32_t>>& edges,
                                   const ctxvuln::RankConfig& cfg) {
    // Explicit Google matrix: column u of M holds 1/outdeg(u) at each target
    // row, or 1/n everywhere when u dangles. One iteration is a full dense
    // multiply x' = d*M*x + (1-d)/n.
    std::vector<int> outdeg(n, 0);
    for (auto [u, v] : edges) ++outdeg[u];
    std::vector<std::vector<double>> M(n, std::vector<double>(n, 0.0));
    for (size_t u = 0; u < n; ++u)
        if (outdeg[u] == 0)
            for (size_t v = 0; v < n; ++v) M[v][u] = 1.0 / n;
    for (auto [u, v] : edges) M[v][u] += 1.0 / outdeg[u];

    std::vector<double> x(n, 1.0 / n), next(n);
    for (int it = 0; it < cfg.max_iterations; ++it) {
        for (size_t v = 0; v < n; ++v) {
            double acc = 0.0;
            for (size_t u = 0; u < n; ++u) acc += M[v][u] * x[u];
            next[v] = cfg.damping * acc + (1.0 - cfg.damping) / n;
        }
        double l1 = 0.0;
        for (size_t v = 0; v < n; ++v) l1 += std::fabs(next[v] - x[v]);
        x.swap(next);
        if (l1 < cfg.tolerance) break;
    }
    return x;
}

std::vector<ctxvuln::AssociationRule> apriori_brute(
    const std::vector<ctxvuln::Transaction>& transactions, double min_support,
    double min_confidence) {
    size_t n = transactions.size();
    if (n == 0) return {};
    std::set<std::string> items;
    for (const auto& t : transactions) items.insert(t.items.begin(), t.items.end());

    auto index_in = [](const ctxvuln::Transaction& t, const std::string& item) {
        auto it = std::find(t.items.begin(), t.items.end(), item);
        return it == t.items.end() ? -1 : static_cast<int>(it - t.items.begin());
    };

    std::vector<ctxvuln::AssociationRule> rules;
    for (const auto& a : items) {
        for (const auto& b : items) {
            if (a == b) continue;
            size_t count_a = 0, both = 0, a_first = 0;
            for (const auto& t : transactions) {
                int ia = index_in(t, a), ib = index_in(t, b);
                if (ia >= 0) ++count_a;
                if (ia >= 0 && ib >= 0) {
                    ++both;
                    if (ia < ib) ++a_first;
                }
            }
            if (both == 0) continue;
            double support = static_cast<double>(both) / n;
            double confidence = static_cast<double>(both) / count_a;
            if (support < min_support) continue;
            if (confidence < min_confidence) continue;
            if (a_first * 2 <= both) continue;
            rules.push_back({a, b, support, confidence});
        }
    }
    std::sort(rules.begin(), rules.end(), [](const ctxvuln::AssociationRule& x,
                                             const ctxvuln::AssociationRule& y) {
        if (x.confidence != y.confidence) return x.confidence > y.confidence;
        if (x.support != y.support) return x.support > y.support;
        if (x.antecedent != y.antecedent) return x.antecedent < y.antecedent;
        return x.consequent < y.consequent;
    });
    return rules;
}

std::vector<ctxvuln::NetworkDependency> nesting_brute(
    const std::vector<ctxvuln::FlowRecord>& flows, const ctxvuln::HostMap& host_of,
    double threshold) {
    using ctxvuln::ServiceEndpoint;
    std::map<ServiceEndpoint, size_t> total;
    std::map<std::pair<ServiceEndpoint, ServiceEndpoint>, size_t> containing;
    for (const auto& f : flows) {
        ServiceEndpoint up{f.dst_ip, f.dst_port, f.proto};
        ++total[up];
        std::set<ServiceEndpoint> nested;
        for (const auto& g : flows) {
            if (host_of.at(g.src_ip) != host_of.at(f.dst_ip)) continue;
            if (!(f.start_ms <= g.start_ms && g.end_ms <= f.end_ms)) continue;
            ServiceEndpoint down{g.dst_ip, g.dst_port, g.proto};
            if (down != up) nested.insert(down);
        }
        for (const auto& d : nested) ++containing[{up, d}];
    }
    std::vector<ctxvuln::NetworkDependency> out;
    for (const auto& [key, cnt] : containing) {
        double weight = static_cast<double>(cnt) / total[key.first];
        if (weight >= threshold) out.push_back({key.first, key.second, weight});
    }
    std::sort(out.begin(), out.end(),
              [](const ctxvuln::NetworkDependency& a, const ctxvuln::NetworkDependency& b) {
                  if (a.upstream != b.upstream) return a.upstream < b.upstream;
                  return a.downstream < b.downstream;
              });
    return out;
}

}  // namespace oracles
