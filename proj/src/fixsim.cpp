#include "ctxvuln/fixsim.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ctxvuln/errors.hpp"

namespace ctxvuln {

FixPlanResult simulate_fix(const Cdg& cdg, const std::vector<VulnMatch>& matches,
                           const FixPlan& plan, const std::string& gateway) {
    std::unordered_map<std::string, const CdgNode*> by_id;
    for (const auto& n : cdg.nodes) by_id.emplace(n.id, &n);
    auto gw = by_id.find(gateway);
    if (gw == by_id.end() || gw->second->layer != Layer::hardware)
        throw ArgumentError("gateway \"" + gateway + "\" is not a hardware node");

    std::set<std::string> matched_ids;
    for (const auto& m : matches) matched_ids.insert(m.vuln_id);
    std::set<std::string> plan_ids(plan.ordering.begin(), plan.ordering.end());
    if (plan_ids.size() != plan.ordering.size())
        throw ArgumentError("fix plan repeats a vulnerability");
    if (plan_ids != matched_ids)
        throw ArgumentError("fix plan must cover exactly the matched vulnerabilities");

    // hosts compromised by each vulnerability while it is still unfixed
    std::unordered_map<std::string, std::vector<std::string>> hosts_of_vuln;
    for (const auto& m : matches) {
        std::set<std::string> hosts;
        for (const auto& node_id : m.affected_nodes) {
            auto it = by_id.find(node_id);
            if (it == by_id.end() || it->second->layer != Layer::software)
                throw ArgumentError("matched node \"" + node_id +
                                    "\" is not a software node in the cdg");
            hosts.insert(it->second->host);
        }
        hosts_of_vuln[m.vuln_id].assign(hosts.begin(), hosts.end());
    }

    std::unordered_map<std::string, std::vector<std::string>> adj;
    for (const auto& e : cdg.edges)
        if (e.kind == EdgeKind::hw_link) adj[e.from].push_back(e.to);

    std::vector<std::string> servers;
    for (const auto& n : cdg.nodes)
        if (n.layer == Layer::hardware && n.kind == NodeKind::server) servers.push_back(n.id);

    FixPlanResult result;
    result.plan = plan;
    for (size_t t = 0; t <= plan.ordering.size(); ++t) {
        std::unordered_set<std::string> compromised;
        for (size_t i = t; i < plan.ordering.size(); ++i)
            for (const auto& h : hosts_of_vuln[plan.ordering[i]]) compromised.insert(h);

        // compromised nodes may be reached but never traversed; the gateway
        // expands regardless since it is the reachability root
        std::unordered_set<std::string> seen{gateway};
        std::deque<std::string> q{gateway};
        while (!q.empty()) {
            std::string u = q.front();
            q.pop_front();
            if (u != gateway && compromised.count(u)) continue;
            auto it = adj.find(u);
            if (it == adj.end()) continue;
            for (const auto& v : it->second)
                if (seen.insert(v).second) q.push_back(v);
        }
        int alive = 0;
        for (const auto& s : servers)
            if (!compromised.count(s) && seen.count(s)) ++alive;
        result.alive_counts.push_back(alive);
        result.auc += alive;
    }
    return result;
}

PlanComparison compare_plans(const Cdg& cdg, const std::vector<VulnMatch>& matches,
                             const FixPlan& plan_a, const FixPlan& plan_b,
                             const std::string& gateway) {
    PlanComparison c;
    c.plan_a = simulate_fix(cdg, matches, plan_a, gateway);
    c.plan_b = simulate_fix(cdg, matches, plan_b, gateway);
    c.winner = c.plan_a.auc > c.plan_b.auc   ? "plan_a"
               : c.plan_b.auc > c.plan_a.auc ? "plan_b"
                                             : "tie";
    return c;
}

std::string render_steps_csv(const PlanComparison& comparison) {
    std::ostringstream out;
    out << "step,alive_ncvs,alive_cvss\n";
    size_t steps = std::max(comparison.plan_a.alive_counts.size(),
                            comparison.plan_b.alive_counts.size());
    for (size_t i = 0; i < steps; ++i) {
        out << i;
        out << ',';
        if (i < comparison.plan_a.alive_counts.size()) out << comparison.plan_a.alive_counts[i];
        out << ',';
        if (i < comparison.plan_b.alive_counts.size()) out << comparison.plan_b.alive_counts[i];
        out << '\n';
    }
    return out.str();
}

FixPlan contextual_plan(const std::vector<VulnerabilityScore>& scores) {
    FixPlan plan;
    for (const auto& s : scores) plan.ordering.push_back(s.vuln_id);
    return plan;
}

FixPlan base_score_plan(const std::vector<VulnMatch>& matches,
                        const std::vector<VulnerabilityRecord>& vulndb) {
    std::unordered_map<std::string, double> base_of;
    for (const auto& r : vulndb) base_of.emplace(r.id, r.base_score);
    FixPlan plan;
    for (const auto& m : matches) {
        if (!base_of.count(m.vuln_id))
            throw ValidationError("no base score for \"" + m.vuln_id + "\"");
        plan.ordering.push_back(m.vuln_id);
    }
    std::sort(plan.ordering.begin(), plan.ordering.end(),
              [&](const std::string& a, const std::string& b) {
                  if (base_of[a] != base_of[b]) return base_of[a] > base_of[b];
                  return a < b;
              });
    return plan;
}

}  // namespace ctxvuln
