#include "ctxvuln/logmine.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ctxvuln/errors.hpp"
#include "csv_util.hpp"
#include "json_util.hpp"

namespace ctxvuln {

using detail::json;

namespace {

void check_event(const LogEvent& e, const std::string& where) {
    if (e.timestamp_ms < 0) throw ValidationError(where + ": negative timestamp");
    if (e.node.empty()) throw ValidationError(where + ": empty node");
    if (e.component.empty()) throw ValidationError(where + ": empty component");
}

void check_thresholds(double min_support, double min_confidence) {
    if (!(min_support > 0.0 && min_support <= 1.0))
        throw ArgumentError("min_support must be in (0, 1]");
    if (!(min_confidence > 0.0 && min_confidence <= 1.0))
        throw ArgumentError("min_confidence must be in (0, 1]");
}

}  // namespace

std::vector<Transaction> group_transactions(const std::vector<LogEvent>& events,
                                            int64_t window_ms) {
    if (window_ms <= 0) throw ArgumentError("window_ms must be positive");
    // per node, in input order; ties on timestamp keep input order
    std::map<std::string, std::vector<const LogEvent*>> per_node;
    for (const auto& e : events) {
        check_event(e, "log event");
        per_node[e.node].push_back(&e);
    }
    std::vector<Transaction> out;
    for (auto& [node, evs] : per_node) {
        std::stable_sort(evs.begin(), evs.end(), [](const LogEvent* a, const LogEvent* b) {
            return a->timestamp_ms < b->timestamp_ms;
        });
        int64_t t0 = evs.front()->timestamp_ms;
        Transaction cur;
        int64_t cur_index = -1;
        auto flush = [&] {
            if (!cur.items.empty()) out.push_back(std::move(cur));
            cur = Transaction{};
        };
        for (const LogEvent* e : evs) {
            int64_t i = (e->timestamp_ms - t0) / window_ms;
            if (i != cur_index) {
                flush();
                cur_index = i;
                cur.node = node;
                cur.window_start = t0 + i * window_ms;
            }
            if (std::find(cur.items.begin(), cur.items.end(), e->component) ==
                cur.items.end())
                cur.items.push_back(e->component);
        }
        flush();
    }
    return out;
}

std::vector<AssociationRule> apriori_rules(const std::vector<Transaction>& transactions,
                                           double min_support, double min_confidence) {
    check_thresholds(min_support, min_confidence);
    size_t n = transactions.size();
    if (n == 0) return {};

    // level 1: per-item transaction counts
    std::map<std::string, size_t> count1;
    for (const auto& t : transactions) {
        std::map<std::string, bool> seen;
        for (const auto& item : t.items)
            if (!seen.count(item)) {
                seen[item] = true;
                ++count1[item];
            }
    }
    std::vector<std::string> frequent;
    for (const auto& [item, c] : count1)
        if (static_cast<double>(c) / n >= min_support) frequent.push_back(item);

    // level 2: candidate pairs only from frequent singletons (the Apriori
    // pruning property); track co-occurrence and first-occurrence precedence
    struct PairStat {
        size_t both = 0;
        size_t x_first = 0;
    };
    std::set<std::string> frequent_set(frequent.begin(), frequent.end());
    std::map<std::pair<std::string, std::string>, PairStat> pair_stats;
    for (const auto& t : transactions) {
        // frequent items of this transaction, in first-occurrence order
        std::vector<std::string> present;
        for (const auto& item : t.items)
            if (frequent_set.count(item) &&
                std::find(present.begin(), present.end(), item) == present.end())
                present.push_back(item);
        for (size_t i = 0; i < present.size(); ++i) {
            for (size_t j = 0; j < present.size(); ++j) {
                if (i == j) continue;
                auto& st = pair_stats[{present[i], present[j]}];
                ++st.both;
                if (i < j) ++st.x_first;
            }
        }
    }

    std::vector<AssociationRule> rules;
    for (const auto& [key, st] : pair_stats) {
        double support = static_cast<double>(st.both) / n;
        if (support < min_support) continue;
        double confidence = static_cast<double>(st.both) / count1[key.first];
        if (confidence < min_confidence) continue;
        if (st.x_first * 2 <= st.both) continue;  // strict precedence majority
        rules.push_back({key.first, key.second, support, confidence});
    }
    std::sort(rules.begin(), rules.end(), [](const AssociationRule& a,
                                             const AssociationRule& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.support != b.support) return a.support > b.support;
        if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
        return a.consequent < b.consequent;
    });
    return rules;
}

std::vector<SoftwareDependency> mine_software_dependencies(
    const std::vector<LogEvent>& events, int64_t window_ms, double min_support,
    double min_confidence) {
    check_thresholds(min_support, min_confidence);
    auto transactions = group_transactions(events, window_ms);

    std::map<std::string, std::vector<Transaction>> per_node;
    for (auto& t : transactions) per_node[t.node].push_back(std::move(t));

    std::vector<SoftwareDependency> out;
    for (const auto& [node, txs] : per_node) {
        auto rules = apriori_rules(txs, min_support, min_confidence);
        // rule A -> B reads "B depends on A"; fold antecedents per consequent
        // keeping the rule ordering inside each dep list
        std::map<std::string, std::vector<std::string>> deps_of;
        for (const auto& r : rules) {
            auto& deps = deps_of[r.consequent];
            if (std::find(deps.begin(), deps.end(), r.antecedent) == deps.end())
                deps.push_back(r.antecedent);
        }
        for (auto& [sw, deps] : deps_of) out.push_back({node, sw, std::move(deps)});
    }
    return out;
}

std::vector<LogEvent> parse_events(const std::string& text) {
    std::vector<LogEvent> out;
    if (detail::looks_like_json(text)) {
        json doc = detail::parse_json(text, "events");
        if (!doc.is_array()) throw ParseError("events: expected a JSON array");
        size_t i = 0;
        for (const auto& je : doc) {
            std::string where = "events[" + std::to_string(i++) + "]";
            LogEvent e;
            e.timestamp_ms = detail::require<int64_t>(je, "timestamp_ms", where);
            e.node = detail::require<std::string>(je, "node", where);
            e.component = detail::require<std::string>(je, "component", where);
            check_event(e, where);
            out.push_back(std::move(e));
        }
        return out;
    }
    bool first = true;
    for (const auto& [line_no, line] : detail::csv_lines(text)) {
        auto fields = detail::split(line, ',');
        std::string where = "line " + std::to_string(line_no);
        if (fields.size() != 3)
            throw ParseError(where + ": expected timestamp_ms,node,component");
        LogEvent e;
        try {
            size_t used = 0;
            e.timestamp_ms = std::stoll(fields[0], &used);
            if (used != fields[0].size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            if (first) {
                first = false;  // header row
                continue;
            }
            throw ParseError(where + ": bad timestamp \"" + fields[0] + "\"");
        }
        first = false;
        e.node = fields[1];
        e.component = fields[2];
        check_event(e, where);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<LogEvent> extract_events(const std::string& raw, const std::string& pattern) {
    std::regex re;
    try {
        re.assign(pattern);
    } catch (const std::regex_error& e) {
        throw ArgumentError(std::string("bad extraction pattern: ") + e.what());
    }
    if (re.mark_count() < 3)
        throw ArgumentError("extraction pattern needs 3 capture groups "
                            "(timestamp_ms, node, component)");
    std::vector<LogEvent> out;
    int line_no = 0;
    std::istringstream in(raw);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::smatch m;
        if (!std::regex_search(line, m, re)) continue;
        LogEvent e;
        try {
            e.timestamp_ms = std::stoll(m[1].str());
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": captured timestamp \"" + m[1].str() +
                             "\" is not an integer");
        }
        e.node = m[2].str();
        e.component = m[3].str();
        check_event(e, "line " + std::to_string(line_no));
        out.push_back(std::move(e));
    }
    return out;
}

std::string serialize_software_dependencies(const std::vector<SoftwareDependency>& deps) {
    json doc = json::array();
    for (const auto& d : deps) {
        json jd;
        jd["node"] = d.node;
        jd["sw"] = d.sw;
        jd["dep"] = d.dep;
        doc.push_back(std::move(jd));
    }
    return doc.dump(2) + "\n";
}

std::vector<SoftwareDependency> parse_software_dependencies(const std::string& text) {
    json doc = detail::parse_json(text, "software dependencies");
    if (!doc.is_array()) throw ParseError("software dependencies: expected a JSON array");
    std::vector<SoftwareDependency> out;
    size_t i = 0;
    for (const auto& jd : doc) {
        std::string where = "software dependencies[" + std::to_string(i++) + "]";
        SoftwareDependency d;
        d.node = detail::require<std::string>(jd, "node", where);
        d.sw = detail::require<std::string>(jd, "sw", where);
        d.dep = detail::require<std::vector<std::string>>(jd, "dep", where);
        if (d.dep.empty()) throw ValidationError(where + ": empty dep list");
        for (const auto& dep : d.dep)
            if (dep == d.sw)
                throw ValidationError(where + ": \"" + d.sw + "\" depends on itself");
        out.push_back(std::move(d));
    }
    return out;
}

std::string render_software_dependencies(const std::vector<SoftwareDependency>& deps) {
    std::ostringstream out;
    for (const auto& d : deps) {
        out << "<node=\"" << d.node << "\" sw=\"" << d.sw << "\" dep=\"";
        for (size_t i = 0; i < d.dep.size(); ++i) {
            if (i) out << ',';
            out << d.dep[i];
        }
        out << "\"/>\n";
    }
    return out.str();
}

}  // namespace ctxvuln
