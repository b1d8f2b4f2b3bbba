#pragma once

// Reference implementations used only to cross-check the library. They favor
// the most literal formulation over speed: a dense transition matrix for the
// ranking, full pairwise enumeration for rule mining and flow nesting.

#include <cstdint>
#include <utility>
#include <vector>

#include "ctxvuln/logmine.hpp"
#include "ctxvuln/netdep.hpp"
#include "ctxvuln/scoring.hpp"

namespace oracles {

std::vector<double> pagerank_dense(size_t n,
                                   const std::vector<std::pair<int32_t, int32_t>>& edges,
                                   const ctxvuln::RankConfig& cfg);

std::vector<ctxvuln::AssociationRule> apriori_brute(
    const std::vector<ctxvuln::Transaction>& transactions, double min_support,
    double min_confidence);

std::vector<ctxvuln::NetworkDependency> nesting_brute(
    const std::vector<ctxvuln::FlowRecord>& flows, const ctxvuln::HostMap& host_of,
    double threshold);

}  // namespace oracles
