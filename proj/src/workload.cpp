#include "qwt/workload.hpp"

#include <array>
#include <cstdlib>
#include <fstream>

namespace qwt {

const char* to_string(QueryKind k) {
    switch (k) {
        case QueryKind::access: return "access";
        case QueryKind::rank: return "rank";
        case QueryKind::select: return "select";
    }
    return "?";
}

QueryKind query_kind_from_string(const std::string& s) {
    if (s == "access") return QueryKind::access;
    if (s == "rank") return QueryKind::rank;
    if (s == "select") return QueryKind::select;
    throw std::invalid_argument("unknown query kind: " + s);
}

QueryWorkload gen_queries(std::span<const uint16_t> text, QueryKind kind, std::size_t count,
                          uint64_t seed, bool chained) {
    if (text.empty()) throw std::invalid_argument("cannot generate queries over an empty sequence");
    std::vector<uint64_t> occ;
    if (kind == QueryKind::select) {
        occ.assign(1u << 16, 0);
        for (uint16_t c : text) ++occ[c];
    }
    return gen_queries_fn(
        text.size(), [&](uint64_t pos) { return text[pos]; },
        [&](uint16_t c) { return occ[c]; }, kind, count, seed, chained);
}

std::string hardware_string() {
    if (const char* env = std::getenv("QWT_HARDWARE"); env != nullptr && env[0] != '\0')
        return env;
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        if (line.rfind("model name", 0) == 0) {
            std::size_t colon = line.find(':');
            if (colon != std::string::npos && colon + 2 <= line.size())
                return line.substr(colon + 2);
        }
    }
    return "unknown";
}

void verify_checksum(const BenchReport& reference, const BenchReport& candidate) {
    if (reference.checksum != candidate.checksum) {
        throw std::runtime_error("output checksum of '" + candidate.structure +
                                 "' diverges from '" + reference.structure + "'");
    }
}

} // namespace qwt
