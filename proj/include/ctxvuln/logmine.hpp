#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ctxvuln {

struct LogEvent {
    int64_t timestamp_ms = 0;
    std::string node;
    std::string component;

    bool operator==(const LogEvent&) const = default;
};

// One fixed time window of one node's events; items keep first-occurrence
// order and carry no duplicates.
struct Transaction {
    std::string node;
    int64_t window_start = 0;
    std::vector<std::string> items;

    bool operator==(const Transaction&) const = default;
};

struct AssociationRule {
    std::string antecedent;
    std::string consequent;
    double support = 0.0;
    double confidence = 0.0;

    bool operator==(const AssociationRule&) const = default;
};

struct SoftwareDependency {
    std::string node;
    std::string sw;
    std::vector<std::string> dep;

    bool operator==(const SoftwareDependency&) const = default;
};

// Windows are fixed and non-overlapping, anchored at each node's earliest
// timestamp: [t0 + i*window_ms, t0 + (i+1)*window_ms). Empty windows are
// omitted.
std::vector<Transaction> group_transactions(const std::vector<LogEvent>& events,
                                            int64_t window_ms);

// Pairwise rules X -> Y with support({X,Y}) >= min_support, confidence >=
// min_confidence, and X occurring before Y in a strict majority of the
// transactions containing both. Sorted by confidence desc, support desc,
// then lexicographically.
std::vector<AssociationRule> apriori_rules(const std::vector<Transaction>& transactions,
                                           double min_support, double min_confidence);

// Per-node mining; a rule A -> B reads "B depends on A", and antecedents of
// the same consequent fold into one record.
std::vector<SoftwareDependency> mine_software_dependencies(
    const std::vector<LogEvent>& events, int64_t window_ms, double min_support,
    double min_confidence);

// CSV "timestamp_ms,node,component" or a JSON array of objects with those
// keys; the format is detected from the content.
std::vector<LogEvent> parse_events(const std::string& text);

// Applies the pattern to each line of a raw log; the first three capture
// groups are timestamp_ms, node, component. Non-matching lines are skipped.
std::vector<LogEvent> extract_events(const std::string& raw, const std::string& pattern);

std::string serialize_software_dependencies(const std::vector<SoftwareDependency>& deps);
std::vector<SoftwareDependency> parse_software_dependencies(const std::string& text);

// The line-oriented form: <node="M" sw="S" dep="x,y,z"/>
std::string render_software_dependencies(const std::vector<SoftwareDependency>& deps);

}  // namespace ctxvuln
