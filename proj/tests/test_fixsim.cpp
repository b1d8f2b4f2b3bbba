#include <doctest.h>

#include <algorithm>
#include <random>

#include "ctxvuln/errors.hpp"
#include "ctxvuln/fixsim.hpp"

using namespace ctxvuln;

namespace {

// gw -- sw1 -- {s1, s2}; app on s1, agent on sw1, gwd on gw (plus their libs)
Cdg rack_cdg() {
    TopologyGraph topo;
    topo.nodes = {{"gw", NodeKind::gateway, {}},
                  {"sw1", NodeKind::edge_switch, {}},
                  {"s1", NodeKind::server, {}},
                  {"s2", NodeKind::server, {}}};
    topo.links = {{"gw", "sw1"}, {"sw1", "s1"}, {"sw1", "s2"}};
    std::vector<SoftwareDependency> sw = {
        {"s1", "app", {"applib"}},
        {"sw1", "agent", {"agentlib"}},
        {"gw", "gwd", {"gwlib"}},
    };
    return build_cdg(topo, sw, {}, {});
}

const std::vector<VulnMatch> kMatches = {
    {"CVE-2021-0001", {"app@s1"}},
    {"CVE-2021-0002", {"agent@sw1"}},
};

}  // namespace

TEST_CASE("fixing the switch first restores reachability sooner") {
    auto cdg = rack_cdg();
    auto good = simulate_fix(cdg, kMatches, {{"CVE-2021-0002", "CVE-2021-0001"}}, "gw");
    CHECK(good.alive_counts == std::vector<int>{0, 1, 2});
    CHECK(good.auc == 3);

    auto bad = simulate_fix(cdg, kMatches, {{"CVE-2021-0001", "CVE-2021-0002"}}, "gw");
    CHECK(bad.alive_counts == std::vector<int>{0, 0, 2});
    CHECK(bad.auc == 2);

    auto cmp = compare_plans(cdg, kMatches, {{"CVE-2021-0002", "CVE-2021-0001"}},
                             {{"CVE-2021-0001", "CVE-2021-0002"}}, "gw");
    CHECK(cmp.winner == "plan_a");
    CHECK(render_steps_csv(cmp) ==
          "step,alive_ncvs,alive_cvss\n"
          "0,0,0\n"
          "1,1,0\n"
          "2,2,2\n");
}

TEST_CASE("a compromised gateway still originates reachability") {
    auto cdg = rack_cdg();
    std::vector<VulnMatch> matches = {{"CVE-2021-0003", {"gwd@gw"}}};
    auto r = simulate_fix(cdg, matches, {{"CVE-2021-0003"}}, "gw");
    // gw is the root, so the rack stays reachable; both servers stay alive
    CHECK(r.alive_counts == std::vector<int>{2, 2});
}

TEST_CASE("simulation argument checks") {
    auto cdg = rack_cdg();
    CHECK_THROWS_AS(simulate_fix(cdg, kMatches, {{"CVE-2021-0001"}}, "gw"), ArgumentError);
    CHECK_THROWS_AS(
        simulate_fix(cdg, kMatches, {{"CVE-2021-0001", "CVE-2021-0001"}}, "gw"),
        ArgumentError);
    CHECK_THROWS_AS(simulate_fix(cdg, kMatches,
                                 {{"CVE-2021-0002", "CVE-2021-0001", "CVE-2021-0009"}}, "gw"),
                    ArgumentError);
    CHECK_THROWS_AS(
        simulate_fix(cdg, kMatches, {{"CVE-2021-0002", "CVE-2021-0001"}}, "ghost"),
        ArgumentError);
    CHECK_THROWS_AS(
        simulate_fix(cdg, kMatches, {{"CVE-2021-0002", "CVE-2021-0001"}}, "app@s1"),
        ArgumentError);
    CHECK_THROWS_AS(simulate_fix(cdg, {{"CVE-2021-0001", {"s1"}}}, {{"CVE-2021-0001"}}, "gw"),
                    ArgumentError);
}

TEST_CASE("alive counts are monotone and end at the server count") {
    auto cdg = rack_cdg();
    const std::vector<std::string> software = {"app@s1",     "applib@s1", "agent@sw1",
                                               "agentlib@sw1", "gwd@gw",  "gwlib@gw"};
    std::mt19937 rng(7);
    for (int round = 0; round < 30; ++round) {
        std::vector<VulnMatch> matches;
        size_t nv = 1 + rng() % 4;
        for (size_t v = 0; v < nv; ++v) {
            VulnMatch m{"CVE-2022-000" + std::to_string(v), {}};
            for (const auto& s : software)
                if (rng() % 2) m.affected_nodes.push_back(s);
            if (m.affected_nodes.empty()) m.affected_nodes.push_back(software[0]);
            matches.push_back(std::move(m));
        }
        FixPlan plan;
        for (const auto& m : matches) plan.ordering.push_back(m.vuln_id);
        std::shuffle(plan.ordering.begin(), plan.ordering.end(), rng);

        auto r = simulate_fix(cdg, matches, plan, "gw");
        REQUIRE(r.alive_counts.size() == matches.size() + 1);
        for (size_t i = 1; i < r.alive_counts.size(); ++i)
            CHECK(r.alive_counts[i - 1] <= r.alive_counts[i]);
        CHECK(r.alive_counts.back() == 2);
    }
}

TEST_CASE("plan builders") {
    std::vector<VulnerabilityScore> scores(2);
    scores[0].vuln_id = "CVE-2021-0002";
    scores[1].vuln_id = "CVE-2021-0001";
    CHECK(contextual_plan(scores).ordering ==
          std::vector<std::string>{"CVE-2021-0002", "CVE-2021-0001"});

    std::vector<VulnerabilityRecord> db = {
        {"CVE-2021-0001", "", {"x"}, 5.0},
        {"CVE-2021-0002", "", {"y"}, 9.0},
        {"CVE-2021-0003", "", {"z"}, 9.0},
    };
    std::vector<VulnMatch> matches = {
        {"CVE-2021-0001", {"a"}}, {"CVE-2021-0003", {"b"}}, {"CVE-2021-0002", {"c"}}};
    CHECK(base_score_plan(matches, db).ordering ==
          std::vector<std::string>{"CVE-2021-0002", "CVE-2021-0003", "CVE-2021-0001"});
    CHECK_THROWS_AS(base_score_plan({{"CVE-2021-0009", {"a"}}}, db), ValidationError);
}
