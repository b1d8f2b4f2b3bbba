#include "ctxvuln/netdep.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ctxvuln/errors.hpp"
#include "csv_util.hpp"
#include "json_util.hpp"

namespace ctxvuln {

using detail::json;

std::string to_string(Proto proto) {
    return proto == Proto::tcp ? "TCP" : "UDP";
}

Proto proto_from_string(const std::string& s) {
    std::string up;
    for (char c : s) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up == "TCP") return Proto::tcp;
    if (up == "UDP") return Proto::udp;
    throw ParseError("unknown protocol \"" + s + "\"");
}

namespace {

bool is_ipv4(const std::string& s) {
    int octets = 0;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t dot = s.find('.', pos);
        std::string part = dot == std::string::npos ? s.substr(pos) : s.substr(pos, dot - pos);
        if (part.empty() || part.size() > 3) return false;
        int v = 0;
        for (char c : part) {
            if (c < '0' || c > '9') return false;
            v = v * 10 + (c - '0');
        }
        if (v > 255) return false;
        ++octets;
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    return octets == 4;
}

void check_flow(const FlowRecord& f, const std::string& where) {
    if (!is_ipv4(f.src_ip)) throw ValidationError(where + ": bad src_ip \"" + f.src_ip + "\"");
    if (!is_ipv4(f.dst_ip)) throw ValidationError(where + ": bad dst_ip \"" + f.dst_ip + "\"");
    if (f.src_port == 0) throw ValidationError(where + ": src_port out of range");
    if (f.dst_port == 0) throw ValidationError(where + ": dst_port out of range");
    if (f.start_ms > f.end_ms) throw ValidationError(where + ": start_ms after end_ms");
}

uint16_t parse_port(const std::string& s, const std::string& where) {
    try {
        size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size() || v < 1 || v > 65535) throw std::out_of_range("port");
        return static_cast<uint16_t>(v);
    } catch (const std::exception&) {
        throw ParseError(where + ": bad port \"" + s + "\"");
    }
}

int64_t parse_ms(const std::string& s, const std::string& where) {
    try {
        size_t used = 0;
        int64_t v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + ": bad millisecond value \"" + s + "\"");
    }
}

const std::string& host_for(const HostMap& host_of, const std::string& ip) {
    auto it = host_of.find(ip);
    if (it == host_of.end())
        throw ValidationError("no host mapping for ip \"" + ip + "\"");
    return it->second;
}

}  // namespace

std::vector<NetworkDependency> mine_network_dependencies(
    const std::vector<FlowRecord>& flows, const HostMap& host_of, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw ArgumentError("threshold must be in (0, 1]");
    for (size_t i = 0; i < flows.size(); ++i)
        check_flow(flows[i], "flow[" + std::to_string(i) + "]");

    // flows grouped by originating host, sorted by start, so the candidates
    // nested inside [f.start, f.end] come from one binary-searched range
    std::unordered_map<std::string, std::vector<const FlowRecord*>> by_src_host;
    for (const auto& f : flows) by_src_host[host_for(host_of, f.src_ip)].push_back(&f);
    for (auto& [_, v] : by_src_host)
        std::sort(v.begin(), v.end(), [](const FlowRecord* a, const FlowRecord* b) {
            return a->start_ms < b->start_ms;
        });

    std::map<ServiceEndpoint, std::vector<const FlowRecord*>> by_upstream;
    for (const auto& f : flows)
        by_upstream[{f.dst_ip, f.dst_port, f.proto}].push_back(&f);

    std::vector<NetworkDependency> out;
    for (const auto& [upstream, uflows] : by_upstream) {
        std::map<ServiceEndpoint, size_t> containing;  // # of U-flows with >= 1 nested D-flow
        for (const FlowRecord* f : uflows) {
            auto it = by_src_host.find(host_for(host_of, f->dst_ip));
            if (it == by_src_host.end()) continue;
            const auto& cands = it->second;
            auto lo = std::lower_bound(cands.begin(), cands.end(), f->start_ms,
                                       [](const FlowRecord* g, int64_t t) {
                                           return g->start_ms < t;
                                       });
            std::set<ServiceEndpoint> nested;
            for (auto gi = lo; gi != cands.end() && (*gi)->start_ms <= f->end_ms; ++gi) {
                const FlowRecord* g = *gi;
                if (g->end_ms > f->end_ms) continue;
                ServiceEndpoint d{g->dst_ip, g->dst_port, g->proto};
                if (d != upstream) nested.insert(d);
            }
            for (const auto& d : nested) ++containing[d];
        }
        for (const auto& [downstream, cnt] : containing) {
            double weight = static_cast<double>(cnt) / uflows.size();
            if (weight >= threshold) out.push_back({upstream, downstream, weight});
        }
    }
    return out;  // map iteration already yields (U, D) order
}

std::string render_dependency_listing(const std::vector<NetworkDependency>& deps) {
    std::map<ServiceEndpoint, std::vector<const NetworkDependency*>> groups;
    for (const auto& d : deps) groups[d.upstream].push_back(&d);
    std::ostringstream out;
    for (const auto& [up, rows] : groups) {
        out << up.ip << ':' << up.port << ":[" << to_string(up.proto) << "]\n";
        std::vector<ServiceEndpoint> downs;
        for (const auto* d : rows) downs.push_back(d->downstream);
        std::sort(downs.begin(), downs.end());
        for (const auto& d : downs)
            out << "  " << d.ip << "  " << d.port << "  [" << to_string(d.proto) << "]\n";
    }
    return out.str();
}

std::vector<FlowRecord> parse_flows(const std::string& text) {
    std::vector<FlowRecord> out;
    if (detail::looks_like_json(text)) {
        json doc = detail::parse_json(text, "flows");
        if (!doc.is_array()) throw ParseError("flows: expected a JSON array");
        size_t i = 0;
        for (const auto& jf : doc) {
            std::string where = "flows[" + std::to_string(i++) + "]";
            FlowRecord f;
            f.src_ip = detail::require<std::string>(jf, "src_ip", where);
            f.src_port = static_cast<uint16_t>(detail::require<int>(jf, "src_port", where));
            f.dst_ip = detail::require<std::string>(jf, "dst_ip", where);
            f.dst_port = static_cast<uint16_t>(detail::require<int>(jf, "dst_port", where));
            f.proto = proto_from_string(detail::require<std::string>(jf, "proto", where));
            f.start_ms = detail::require<int64_t>(jf, "start_ms", where);
            f.end_ms = detail::require<int64_t>(jf, "end_ms", where);
            check_flow(f, where);
            out.push_back(std::move(f));
        }
        return out;
    }
    bool first = true;
    for (const auto& [line_no, line] : detail::csv_lines(text)) {
        std::string where = "line " + std::to_string(line_no);
        auto fields = detail::split(line, ',');
        if (fields.size() != 7)
            throw ParseError(where +
                             ": expected src_ip,src_port,dst_ip,dst_port,proto,start_ms,end_ms");
        if (first && !is_ipv4(fields[0])) {
            first = false;  // header row
            continue;
        }
        first = false;
        FlowRecord f;
        f.src_ip = fields[0];
        f.src_port = parse_port(fields[1], where);
        f.dst_ip = fields[2];
        f.dst_port = parse_port(fields[3], where);
        try {
            f.proto = proto_from_string(fields[4]);
        } catch (const ParseError&) {
            throw ParseError(where + ": bad protocol \"" + fields[4] + "\"");
        }
        f.start_ms = parse_ms(fields[5], where);
        f.end_ms = parse_ms(fields[6], where);
        check_flow(f, where);
        out.push_back(std::move(f));
    }
    return out;
}

HostMap parse_host_map(const std::string& text) {
    json doc = detail::parse_json(text, "host map");
    if (!doc.is_object()) throw ParseError("host map: expected a JSON object of ip -> host");
    HostMap out;
    for (const auto& [ip, host] : doc.items()) {
        if (!is_ipv4(ip)) throw ValidationError("host map: bad ip \"" + ip + "\"");
        if (!host.is_string() || host.get<std::string>().empty())
            throw ParseError("host map: host for \"" + ip + "\" must be a nonempty string");
        out[ip] = host.get<std::string>();
    }
    return out;
}

namespace {

json endpoint_to_json(const ServiceEndpoint& e) {
    return {{"ip", e.ip}, {"port", e.port}, {"proto", to_string(e.proto)}};
}

ServiceEndpoint endpoint_from_json(const json& je, const std::string& where) {
    ServiceEndpoint e;
    e.ip = detail::require<std::string>(je, "ip", where);
    e.port = static_cast<uint16_t>(detail::require<int>(je, "port", where));
    e.proto = proto_from_string(detail::require<std::string>(je, "proto", where));
    if (!is_ipv4(e.ip)) throw ValidationError(where + ": bad ip \"" + e.ip + "\"");
    if (e.port == 0) throw ValidationError(where + ": port out of range");
    return e;
}

}  // namespace

std::string serialize_network_dependencies(const std::vector<NetworkDependency>& deps) {
    json doc = json::array();
    for (const auto& d : deps) {
        json jd;
        jd["upstream"] = endpoint_to_json(d.upstream);
        jd["downstream"] = endpoint_to_json(d.downstream);
        jd["weight"] = d.weight;
        doc.push_back(std::move(jd));
    }
    return doc.dump(2) + "\n";
}

std::vector<NetworkDependency> parse_network_dependencies(const std::string& text) {
    json doc = detail::parse_json(text, "network dependencies");
    if (!doc.is_array()) throw ParseError("network dependencies: expected a JSON array");
    std::vector<NetworkDependency> out;
    size_t i = 0;
    for (const auto& jd : doc) {
        std::string where = "network dependencies[" + std::to_string(i++) + "]";
        NetworkDependency d;
        d.upstream = endpoint_from_json(detail::require<json>(jd, "upstream", where), where);
        d.downstream = endpoint_from_json(detail::require<json>(jd, "downstream", where), where);
        d.weight = detail::require<double>(jd, "weight", where);
        if (d.upstream == d.downstream)
            throw ValidationError(where + ": upstream equals downstream");
        if (!(d.weight >= 0.0 && d.weight <= 1.0))
            throw ValidationError(where + ": weight outside [0, 1]");
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace ctxvuln
