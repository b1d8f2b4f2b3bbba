#pragma once

#include <string>
#include <vector>

#include "ctxvuln/cdg.hpp"

namespace ctxvuln {

struct VulnerabilityRecord {
    std::string id;                     // CVE-YYYY-NNNN...
    std::string summary;
    std::vector<std::string> products;  // keyword strings matched against node names
    double base_score = 0.0;            // [0, 10]

    bool operator==(const VulnerabilityRecord&) const = default;
};

// S_v: the software nodes a record lands on.
struct VulnMatch {
    std::string vuln_id;
    std::vector<std::string> affected_nodes;  // sorted CDG software node ids

    bool operator==(const VulnMatch&) const = default;
};

struct MatchReport {
    std::vector<VulnMatch> matches;      // records with at least one affected node
    std::vector<std::string> unmatched;  // ids of records that matched nothing
};

// JSON array of {id, summary, products, base_score}; duplicate ids rejected.
std::vector<VulnerabilityRecord> load_vulndb(const std::string& text);
std::string serialize_vulndb(const std::vector<VulnerabilityRecord>& db);

// How a record is tested against one software node. The keyword matcher is
// the default; alternatives can be dropped in without touching the pipeline.
class Matcher {
public:
    virtual ~Matcher() = default;
    virtual bool matches(const VulnerabilityRecord& record, const CdgNode& node) const = 0;
};

// Case-insensitive token-boundary matching: the keyword's alphanumeric token
// sequence must appear contiguously in the node name's token sequence, so
// "os" does not land on "postgres" but "ios" lands on "switch-os-ios".
class KeywordMatcher : public Matcher {
public:
    bool matches(const VulnerabilityRecord& record, const CdgNode& node) const override;
};

MatchReport match_vulnerabilities(const std::vector<VulnerabilityRecord>& db, const Cdg& cdg);
MatchReport match_vulnerabilities(const std::vector<VulnerabilityRecord>& db, const Cdg& cdg,
                                  const Matcher& matcher);

std::string serialize_match_report(const MatchReport& report);
MatchReport parse_match_report(const std::string& text);

}  // namespace ctxvuln
