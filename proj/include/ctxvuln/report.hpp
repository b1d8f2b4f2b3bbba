#pragma once

#include <string>
#include <vector>

#include "ctxvuln/scoring.hpp"

namespace ctxvuln {

enum class ReportFormat { json, text };

// json: array of {id, severity, breakdown: {ti, ni, si}, affected_nodes}.
// text: fixed-width ranked table (severity to 4 decimal places).
std::string render_report(const std::vector<VulnerabilityScore>& scores, ReportFormat format);

// Reads the JSON report form back; fields outside the report schema (the
// aggregator, the product mass) come back defaulted.
std::vector<VulnerabilityScore> parse_report(const std::string& text);

}  // namespace ctxvuln
