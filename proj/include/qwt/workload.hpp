#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwt {

// The workload RNG: splitmix64 with the usual constants. Fixed here so
// that workloads are reproducible across implementations.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t below(uint64_t bound) { return next() % bound; }
};

inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

enum class QueryKind { access, rank, select };

const char* to_string(QueryKind k);
QueryKind query_kind_from_string(const std::string& s);

struct QueryEntry {
    uint64_t pos;  // position for access/rank; 1-based occurrence index for select
    uint16_t sym;  // unused for access
};

struct QueryWorkload {
    QueryKind kind = QueryKind::access;
    uint64_t seed = 0;
    bool chained = false;
    std::vector<QueryEntry> entries;
};

// Query positions are uniform; rank queries pair a position with the
// symbol found there; select symbols follow the empirical distribution
// (drawn by sampling a position) with a uniform occurrence index.
QueryWorkload gen_queries(std::span<const uint16_t> text, QueryKind kind, std::size_t count,
                          uint64_t seed, bool chained);

// Same protocol driven by accessors instead of an in-memory copy of the
// sequence, so workloads can be generated straight from an index. Consumes
// the RNG in the same order as the span overload.
template <typename AccessFn, typename OccFn>
QueryWorkload gen_queries_fn(std::size_t n, AccessFn&& access, OccFn&& occ, QueryKind kind,
                             std::size_t count, uint64_t seed, bool chained) {
    if (count == 0) throw std::invalid_argument("query count must be positive");
    if (n == 0) throw std::invalid_argument("cannot generate queries over an empty sequence");
    QueryWorkload w;
    w.kind = kind;
    w.seed = seed;
    w.chained = chained;
    w.entries.reserve(count);
    SplitMix64 rng(seed);
    for (std::size_t q = 0; q < count; ++q) {
        uint64_t pos = rng.below(n);
        switch (kind) {
            case QueryKind::access:
                w.entries.push_back({pos, 0});
                break;
            case QueryKind::rank:
                w.entries.push_back({pos, access(pos)});
                break;
            case QueryKind::select: {
                uint16_t c = access(pos);
                uint64_t r = rng.below(occ(c)) + 1;
                w.entries.push_back({r, c});
                break;
            }
        }
    }
    return w;
}

struct BenchReport {
    std::string structure;
    std::string kind;
    uint64_t count = 0;
    unsigned reps = 0;
    bool chained = false;
    double total_ms = 0.0;
    double ns_per_query = 0.0;
    double queries_per_s = 0.0;
    uint64_t checksum = 0;
    uint64_t space_data_bits = 0;
    uint64_t space_counter_bits = 0;
    uint64_t space_select_bits = 0;
    uint64_t space_predictor_bits = 0;
    std::string hardware;
};

std::string hardware_string();

// Runs the workload reps times. The adapter maps a raw (possibly
// chain-perturbed) entry onto a valid query and returns the answer. In
// chained mode the raw position of each query is the stored position
// xor-ed with the previous answer; adapters reduce it into range, so the
// chain is identical for every structure that answers correctly.
template <typename Adapter>
BenchReport run_bench(std::string structure, const QueryWorkload& w, unsigned reps, Adapter&& adapter) {
    if (reps == 0) throw std::invalid_argument("repetitions must be positive");
    BenchReport r;
    r.structure = std::move(structure);
    r.kind = to_string(w.kind);
    r.count = w.entries.size();
    r.reps = reps;
    r.chained = w.chained;
    r.hardware = hardware_string();

    uint64_t checksum = 0;
    auto t0 = std::chrono::steady_clock::now();
    for (unsigned rep = 0; rep < reps; ++rep) {
        uint64_t cs = 0;
        uint64_t prev = 0;
        for (const QueryEntry& e : w.entries) {
            uint64_t raw = w.chained ? (prev ^ e.pos) : e.pos;
            uint64_t ans = adapter(raw, e.sym);
            cs = mix64(cs ^ ans);
            prev = ans;
        }
        if (rep == 0) checksum = cs;
        else if (cs != checksum) throw std::runtime_error("nondeterministic answers across repetitions");
    }
    auto t1 = std::chrono::steady_clock::now();

    double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
    r.checksum = checksum;
    r.total_ms = ns / 1e6;
    uint64_t issued = r.count * reps;
    r.ns_per_query = issued == 0 ? 0.0 : ns / static_cast<double>(issued);
    r.queries_per_s = ns == 0.0 ? 0.0 : static_cast<double>(issued) / (ns / 1e9);
    return r;
}

// Hard failure on diverging outputs; timing is only meaningful for runs
// that answered identically.
void verify_checksum(const BenchReport& reference, const BenchReport& candidate);

} // namespace qwt
