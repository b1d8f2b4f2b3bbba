#include "ctxvuln/vulnmatch.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <unordered_set>

#include "ctxvuln/errors.hpp"
#include "json_util.hpp"

namespace ctxvuln {

using detail::json;

namespace {

const std::regex kCveId("CVE-[0-9]{4}-[0-9]{4,}");

void check_record(const VulnerabilityRecord& r, const std::string& where) {
    if (!std::regex_match(r.id, kCveId))
        throw ValidationError(where + ": id \"" + r.id + "\" is not CVE-YYYY-NNNN form");
    if (!(r.base_score >= 0.0 && r.base_score <= 10.0))
        throw ValidationError(where + ": base_score outside [0, 10]");
    if (r.products.empty()) throw ValidationError(where + ": empty products list");
    for (const auto& p : r.products)
        if (p.empty()) throw ValidationError(where + ": empty product keyword");
}

std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char raw : s) {
        unsigned char c = static_cast<unsigned char>(raw);
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

bool keyword_hits(const std::string& keyword, const std::string& name) {
    auto kt = tokens(keyword);
    auto nt = tokens(name);
    if (kt.empty() || kt.size() > nt.size()) return false;
    for (size_t i = 0; i + kt.size() <= nt.size(); ++i)
        if (std::equal(kt.begin(), kt.end(), nt.begin() + i)) return true;
    return false;
}

}  // namespace

std::vector<VulnerabilityRecord> load_vulndb(const std::string& text) {
    json doc = detail::parse_json(text, "vulnerability db");
    if (!doc.is_array()) throw ParseError("vulnerability db: expected a JSON array");
    std::vector<VulnerabilityRecord> out;
    std::unordered_set<std::string> ids;
    size_t i = 0;
    for (const auto& jr : doc) {
        std::string where = "vulnerability db[" + std::to_string(i++) + "]";
        VulnerabilityRecord r;
        r.id = detail::require<std::string>(jr, "id", where);
        r.summary = jr.contains("summary") ? jr.at("summary").get<std::string>() : "";
        r.products = detail::require<std::vector<std::string>>(jr, "products", where);
        r.base_score = detail::require<double>(jr, "base_score", where);
        check_record(r, where);
        if (!ids.insert(r.id).second)
            throw ValidationError(where + ": duplicate id \"" + r.id + "\"");
        out.push_back(std::move(r));
    }
    return out;
}

std::string serialize_vulndb(const std::vector<VulnerabilityRecord>& db) {
    json doc = json::array();
    for (const auto& r : db) {
        json jr;
        jr["id"] = r.id;
        jr["summary"] = r.summary;
        jr["products"] = r.products;
        jr["base_score"] = r.base_score;
        doc.push_back(std::move(jr));
    }
    return doc.dump(2) + "\n";
}

bool KeywordMatcher::matches(const VulnerabilityRecord& record, const CdgNode& node) const {
    for (const auto& keyword : record.products)
        if (keyword_hits(keyword, node.name)) return true;
    return false;
}

MatchReport match_vulnerabilities(const std::vector<VulnerabilityRecord>& db, const Cdg& cdg) {
    KeywordMatcher matcher;
    return match_vulnerabilities(db, cdg, matcher);
}

MatchReport match_vulnerabilities(const std::vector<VulnerabilityRecord>& db, const Cdg& cdg,
                                  const Matcher& matcher) {
    MatchReport report;
    for (const auto& record : db) {
        std::vector<std::string> affected;
        for (const auto& node : cdg.nodes) {
            if (node.layer != Layer::software) continue;  // hardware is never scored
            if (matcher.matches(record, node)) affected.push_back(node.id);
        }
        std::sort(affected.begin(), affected.end());
        if (affected.empty())
            report.unmatched.push_back(record.id);
        else
            report.matches.push_back({record.id, std::move(affected)});
    }
    return report;
}

std::string serialize_match_report(const MatchReport& report) {
    json doc;
    doc["matches"] = json::array();
    for (const auto& m : report.matches)
        doc["matches"].push_back({{"vuln_id", m.vuln_id}, {"affected_nodes", m.affected_nodes}});
    doc["unmatched"] = report.unmatched;
    return doc.dump(2) + "\n";
}

MatchReport parse_match_report(const std::string& text) {
    json doc = detail::parse_json(text, "match report");
    if (!doc.is_object()) throw ParseError("match report: expected a JSON object");
    MatchReport report;
    size_t i = 0;
    for (const auto& jm : detail::require<json>(doc, "matches", "match report")) {
        std::string where = "match report[" + std::to_string(i++) + "]";
        VulnMatch m;
        m.vuln_id = detail::require<std::string>(jm, "vuln_id", where);
        m.affected_nodes =
            detail::require<std::vector<std::string>>(jm, "affected_nodes", where);
        if (m.affected_nodes.empty())
            throw ValidationError(where + ": empty affected node set");
        report.matches.push_back(std::move(m));
    }
    if (doc.contains("unmatched"))
        report.unmatched = doc.at("unmatched").get<std::vector<std::string>>();
    return report;
}

}  // namespace ctxvuln
