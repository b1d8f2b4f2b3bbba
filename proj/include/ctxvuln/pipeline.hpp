#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ctxvuln/cdg.hpp"
#include "ctxvuln/fixsim.hpp"
#include "ctxvuln/scoring.hpp"
#include "ctxvuln/vulnmatch.hpp"

namespace ctxvuln {

struct PipelineConfig {
    // input files; relative paths are resolved against the config file's
    // directory at load time
    std::string topology;
    std::string topology_format;  // "json", "csv", or empty for by-extension
    std::string events;
    std::string flows;
    std::string hosts;
    std::string endpoints;
    std::string vulndb;

    int64_t window_ms = 1000;
    double min_support = 0.1;
    double min_confidence = 0.7;
    double threshold = 0.5;
    RankConfig rank;
    Weights weights;
    Aggregator aggregator = Aggregator::weighted_sum;
    bool simulate = false;
    std::string gateway;  // empty picks the topology's unique gateway node
};

PipelineConfig parse_pipeline_config(const std::string& text, const std::string& base_dir);
PipelineConfig load_pipeline_config(const std::string& path);

struct PipelineResult {
    std::vector<std::string> written;  // artifact paths, in write order
    std::vector<VulnerabilityScore> scores;
    MatchReport match_report;
    std::vector<DroppedEdge> dropped;
    bool simulated = false;
    PlanComparison comparison;  // meaningful when simulated
};

// Runs every stage over the configured inputs and writes each intermediate
// artifact plus the final report into out_dir. Identical inputs produce
// byte-identical artifacts. `log` receives per-stage progress when given.
PipelineResult run_pipeline(const PipelineConfig& config, const std::string& out_dir,
                            std::ostream* log = nullptr);

}  // namespace ctxvuln
