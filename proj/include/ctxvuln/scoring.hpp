#pragma once

#include <string>
#include <vector>

#include "ctxvuln/cdg.hpp"
#include "ctxvuln/vulnmatch.hpp"

namespace ctxvuln {

struct RankConfig {
    double damping = 0.85;
    int max_iterations = 100;
    double tolerance = 0.001;  // L1 change between consecutive iterations
};

// Standard PageRank with uniform teleport. Dangling mass is redistributed
// uniformly; edges are followed in their stored depends-on direction, so a
// node many others depend on accumulates rank. Scores sum to 1.
std::vector<double> pagerank(const DirectedGraph& graph, const RankConfig& config = {});

// Ranking is pluggable; PageRank is the shipped default.
class Ranker {
public:
    virtual ~Ranker() = default;
    virtual std::vector<double> rank(const DirectedGraph& graph) const = 0;
};

class PageRankRanker : public Ranker {
public:
    PageRankRanker() = default;
    explicit PageRankRanker(RankConfig config) : config_(config) {}
    std::vector<double> rank(const DirectedGraph& graph) const override;

private:
    RankConfig config_;
};

struct ImportanceTriple {
    std::string node;
    double ti = 0.0;  // hardware score of the hosting node
    double si = 0.0;  // software projection score
    double ni = 0.0;  // network projection score; 0 when absent from it

    bool operator==(const ImportanceTriple&) const = default;
};

// One triple per software node: each projection is ranked once and scores
// are read off per node.
std::vector<ImportanceTriple> compute_importances(const Cdg& cdg,
                                                  const RankConfig& config = {});
std::vector<ImportanceTriple> compute_importances(const Cdg& cdg, const Ranker& ranker);

struct Weights {
    double ti = 1.0;
    double ni = 1.0;
    double si = 1.0;
};

enum class Aggregator { weighted_sum, cvss_product };

std::string to_string(Aggregator aggregator);
Aggregator aggregator_from_string(const std::string& s);

struct VulnerabilityScore {
    std::string vuln_id;
    double severity = 0.0;
    // breakdown over S_v; sum_product carries the cvss_product mass so the
    // severity stays recomputable for either aggregator
    double sum_ti = 0.0;
    double sum_ni = 0.0;
    double sum_si = 0.0;
    double sum_product = 0.0;
    Aggregator aggregator = Aggregator::weighted_sum;
    std::vector<std::string> affected_nodes;

    bool operator==(const VulnerabilityScore&) const = default;
};

// weighted_sum: w_ti*Σti + w_ni*Σni + w_si*Σsi. cvss_product:
// (Σ ti*ni*si) * base_score. Sorted by severity desc; ties by base score
// desc, then id.
std::vector<VulnerabilityScore> score_vulnerabilities(
    const std::vector<VulnMatch>& matches, const std::vector<ImportanceTriple>& importances,
    const Weights& weights, Aggregator aggregator,
    const std::vector<VulnerabilityRecord>& vulndb);

}  // namespace ctxvuln
