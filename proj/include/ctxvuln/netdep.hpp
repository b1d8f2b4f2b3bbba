#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ctxvuln {

enum class Proto { tcp, udp };

std::string to_string(Proto proto);
Proto proto_from_string(const std::string& s);

struct FlowRecord {
    std::string src_ip;
    uint16_t src_port = 0;
    std::string dst_ip;
    uint16_t dst_port = 0;
    Proto proto = Proto::tcp;
    int64_t start_ms = 0;
    int64_t end_ms = 0;

    bool operator==(const FlowRecord&) const = default;
};

struct ServiceEndpoint {
    std::string ip;
    uint16_t port = 0;
    Proto proto = Proto::tcp;

    auto operator<=>(const ServiceEndpoint&) const = default;
};

struct NetworkDependency {
    ServiceEndpoint upstream;
    ServiceEndpoint downstream;
    double weight = 0.0;  // nesting ratio, >= the mining threshold

    bool operator==(const NetworkDependency&) const = default;
};

using HostMap = std::map<std::string, std::string>;  // ip -> host id

// Flow g nests in flow f when g originates from the host serving f's
// destination and g's interval lies inside f's (non-strict ends). For each
// upstream endpoint U = f's destination, weight(U, D) is the fraction of
// U-flows containing at least one nested flow to D; pairs at or above the
// threshold are emitted, sorted by (upstream, downstream).
std::vector<NetworkDependency> mine_network_dependencies(
    const std::vector<FlowRecord>& flows, const HostMap& host_of, double threshold);

// The indented text form: one "<ip>:<port>:[<PROTO>]" header per upstream,
// then one two-space-indented "<ip>  <port>  [<PROTO>]" line per downstream.
std::string render_dependency_listing(const std::vector<NetworkDependency>& deps);

// CSV "src_ip,src_port,dst_ip,dst_port,proto,start_ms,end_ms" or a JSON
// array of objects with those keys; format detected from the content.
std::vector<FlowRecord> parse_flows(const std::string& text);

// JSON object mapping ip -> host id.
HostMap parse_host_map(const std::string& text);

std::string serialize_network_dependencies(const std::vector<NetworkDependency>& deps);
std::vector<NetworkDependency> parse_network_dependencies(const std::string& text);

}  // namespace ctxvuln
