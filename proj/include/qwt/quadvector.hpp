#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "qwt/common.hpp"
#include "qwt/counters.hpp"

namespace qwt {

// Two counter geometries. The large one keeps the occurrence counters of
// one symbol for a whole superblock in a 16-byte group (6.25% overhead);
// the small one halves superblock and block so that a data block spans a
// single cache line, doubling the overhead to 12.5% but capping a rank
// query at two distinct line touches.
enum class Geometry : uint8_t {
    sb4096_b512 = 0,
    sb2048_b256 = 1,
};

constexpr std::size_t superblock_quads(Geometry g) {
    return g == Geometry::sb4096_b512 ? 4096 : 2048;
}
constexpr std::size_t block_quads(Geometry g) {
    return g == Geometry::sb4096_b512 ? 512 : 256;
}

struct SpaceReport {
    uint64_t data_bits = 0;
    uint64_t counter_bits = 0;
    uint64_t select_sample_bits = 0;

    double counter_overhead_pct() const {
        return data_bits == 0 ? 0.0 : 100.0 * static_cast<double>(counter_bits) / static_cast<double>(data_bits);
    }
    double select_overhead_pct() const {
        return data_bits == 0 ? 0.0 : 100.0 * static_cast<double>(select_sample_bits) / static_cast<double>(data_bits);
    }
    uint64_t total_bits() const { return data_bits + counter_bits + select_sample_bits; }
};

// Vector over {0,1,2,3} with constant-time per-symbol rank and sampled
// select. Symbols are packed two bits per quad; each symbol keeps one
// interleaved superblock/block counter group per superblock plus the
// superblock index of every 8192-th occurrence for select.
class RsQuadVector {
public:
    static constexpr std::size_t kSelectSampleRate = 8192;

    RsQuadVector() = default;

    static RsQuadVector build(std::span<const uint8_t> quads, Geometry g = Geometry::sb2048_b256);

    std::size_t size() const { return len_; }
    Geometry geometry() const { return geometry_; }

    uint8_t access(std::size_t i) const;
    std::size_t rank(unsigned sym, std::size_t i) const;
    std::size_t select(unsigned sym, std::size_t j) const;
    std::size_t count(unsigned sym) const;

    // Non-binding prefetch of the counter group line and the data line a
    // rank(sym, i) would touch. No observable effect.
    void prefetch_rank(unsigned sym, std::size_t i) const;

    // Exact occurrence count at the block boundary at or below i, read
    // from the counter group alone (no data scan).
    std::size_t rank_block_floor(unsigned sym, std::size_t i) const;

    SpaceReport space_report() const;

    // line geometry for prefetch planning (64-byte lines)
    std::size_t data_line_of(std::size_t i) const { return i / (kCacheLineBits / 2); }
    std::size_t data_line_count() const;
    std::size_t counter_line_of(std::size_t i) const { return i / superblock_quads(geometry_) / 4; }
    std::size_t counter_line_count(unsigned sym) const;
    const void* data_line_addr(std::size_t line) const;
    const void* counter_line_addr(unsigned sym, std::size_t line) const;

    const uint64_t* words() const { return words_.data(); }
    const CounterGroup& group(unsigned sym, std::size_t sb) const { return counters_[sym][sb]; }

    void save(std::ostream& os) const;
    static RsQuadVector load(std::istream& is);

private:
    void build_directory();

    AlignedWords words_;
    std::size_t len_ = 0;
    Geometry geometry_ = Geometry::sb2048_b256;
    std::array<std::vector<CounterGroup>, 4> counters_;
    std::array<std::vector<uint32_t>, 4> samples_;
    std::array<std::size_t, 4> totals_ = {0, 0, 0, 0};
};

} // namespace qwt
