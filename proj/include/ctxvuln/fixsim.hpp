#pragma once

#include <string>
#include <vector>

#include "ctxvuln/cdg.hpp"
#include "ctxvuln/scoring.hpp"
#include "ctxvuln/vulnmatch.hpp"

namespace ctxvuln {

// A fix ordering; must cover the matched vulnerability set exactly.
struct FixPlan {
    std::vector<std::string> ordering;

    bool operator==(const FixPlan&) const = default;
};

struct FixPlanResult {
    FixPlan plan;
    std::vector<int> alive_counts;  // index 0 = before any fix; length |plan| + 1
    long auc = 0;                   // discrete area under the alive curve

    bool operator==(const FixPlanResult&) const = default;
};

struct PlanComparison {
    FixPlanResult plan_a;
    FixPlanResult plan_b;
    std::string winner;  // "plan_a", "plan_b", or "tie" by auc
};

// Alive model: a hardware node is compromised while any software node it
// hosts is affected by an unfixed vulnerability; a server is alive iff it is
// not compromised and the gateway reaches it without traversing a
// compromised intermediate node.
FixPlanResult simulate_fix(const Cdg& cdg, const std::vector<VulnMatch>& matches,
                           const FixPlan& plan, const std::string& gateway);

PlanComparison compare_plans(const Cdg& cdg, const std::vector<VulnMatch>& matches,
                             const FixPlan& plan_a, const FixPlan& plan_b,
                             const std::string& gateway);

// Step table "step,alive_ncvs,alive_cvss" with plan_a in the ncvs column.
std::string render_steps_csv(const PlanComparison& comparison);

// Fix orderings the CLI offers: contextual severity order (an already-sorted
// score list) and base-score order (desc, ties by id).
FixPlan contextual_plan(const std::vector<VulnerabilityScore>& scores);
FixPlan base_score_plan(const std::vector<VulnMatch>& matches,
                        const std::vector<VulnerabilityRecord>& vulndb);

}  // namespace ctxvuln
