#include "ctxvuln/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "ctxvuln/errors.hpp"
#include "json_util.hpp"

namespace ctxvuln {

using detail::json;

std::string render_report(const std::vector<VulnerabilityScore>& scores, ReportFormat format) {
    if (format == ReportFormat::json) {
        json doc = json::array();
        for (const auto& s : scores) {
            json js;
            js["id"] = s.vuln_id;
            js["severity"] = s.severity;
            js["breakdown"] = {{"ti", s.sum_ti}, {"ni", s.sum_ni}, {"si", s.sum_si}};
            js["affected_nodes"] = s.affected_nodes;
            doc.push_back(std::move(js));
        }
        return doc.dump(2) + "\n";
    }

    size_t id_width = 2;  // header "id"
    for (const auto& s : scores) id_width = std::max(id_width, s.vuln_id.size());
    std::ostringstream out;
    out << std::setw(4) << "rank" << "  " << std::left << std::setw(static_cast<int>(id_width))
        << "id" << std::right << "  " << std::setw(8) << "severity" << "  " << std::setw(8)
        << "affected" << '\n';
    int rank = 0;
    for (const auto& s : scores) {
        out << std::setw(4) << ++rank << "  " << std::left
            << std::setw(static_cast<int>(id_width)) << s.vuln_id << std::right << "  "
            << std::setw(8) << std::fixed << std::setprecision(4) << s.severity << "  "
            << std::setw(8) << s.affected_nodes.size() << '\n';
    }
    return out.str();
}

std::vector<VulnerabilityScore> parse_report(const std::string& text) {
    json doc = detail::parse_json(text, "report");
    if (!doc.is_array()) throw ParseError("report: expected a JSON array");
    std::vector<VulnerabilityScore> out;
    size_t i = 0;
    for (const auto& js : doc) {
        std::string where = "report[" + std::to_string(i++) + "]";
        VulnerabilityScore s;
        s.vuln_id = detail::require<std::string>(js, "id", where);
        s.severity = detail::require<double>(js, "severity", where);
        json breakdown = detail::require<json>(js, "breakdown", where);
        s.sum_ti = detail::require<double>(breakdown, "ti", where + ".breakdown");
        s.sum_ni = detail::require<double>(breakdown, "ni", where + ".breakdown");
        s.sum_si = detail::require<double>(breakdown, "si", where + ".breakdown");
        s.affected_nodes =
            detail::require<std::vector<std::string>>(js, "affected_nodes", where);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace ctxvuln
