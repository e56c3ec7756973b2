#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "qwt/common.hpp"
#include "qwt/quadvector.hpp"

namespace qwt {

class QuadWaveletMatrix;

// Bitmap with a 64-bit absolute one-counter per 256 payload bits (a 25%
// rank directory, the overhead the space budget of the predictor is
// charged with).
class PredictorBitmap {
public:
    PredictorBitmap() = default;

    static PredictorBitmap build(const std::vector<bool>& bits);

    std::size_t size() const { return len_; }
    std::size_t ones() const { return ones_; }
    std::size_t rank1(std::size_t i) const;
    std::size_t select1(std::size_t j) const; // position + 1 of the j-th one
    bool access(std::size_t i) const;

    uint64_t space_bits() const { return (words_.size() + counts_.size()) * 64; }

    void save(std::ostream& os) const;
    static PredictorBitmap load(std::istream& is);

private:
    void build_counts();

    std::vector<uint64_t> words_;
    std::vector<uint64_t> counts_; // ones before each 4-word chunk
    std::size_t len_ = 0;
    std::size_t ones_ = 0;
};

// Fixed-width packed integer array; width up to 32 bits.
class PackedIntVector {
public:
    PackedIntVector() = default;
    explicit PackedIntVector(unsigned width) : width_(width) {}

    void push_back(uint32_t v);
    uint32_t get(std::size_t i) const;
    std::size_t size() const { return size_; }
    unsigned width() const { return width_; }
    uint64_t space_bits() const { return words_.size() * 64; }

private:
    std::vector<uint64_t> words_;
    std::size_t size_ = 0;
    unsigned width_ = 0;
};

// Additive-approximation rank over one quad vector. The vector is split
// into blocks of block_size() quads and, per symbol, block i is marked iff
// it holds an occurrence whose ordinal is a multiple of block_size(). The
// estimate counts marks strictly before the queried block, so it never
// overestimates and stays within error_bound() = 2 * block_size() of the
// exact rank.
class ApproxRankIndex {
public:
    ApproxRankIndex() = default;

    // error-first constructor: guarantees 0 <= rank - estimate < epsilon
    static ApproxRankIndex with_error(const RsQuadVector& qv, uint64_t epsilon);
    // block-first constructor used by the practical prefetch predictor
    static ApproxRankIndex with_block(const RsQuadVector& qv, uint64_t block);

    uint64_t block_size() const { return block_; }
    uint64_t error_bound() const { return 2 * block_; }
    std::size_t domain() const { return n_; }

    std::size_t approx_rank(unsigned sym, std::size_t i) const;

    const PredictorBitmap& bitmap(unsigned sym) const { return bitmaps_[sym]; }
    uint64_t space_bits() const;

    void save(std::ostream& os) const;
    static ApproxRankIndex load(std::istream& is);

private:
    uint64_t block_ = 0;
    std::size_t n_ = 0;
    std::array<PredictorBitmap, 4> bitmaps_;
};

// Discriminant positions: per level and symbol, the in-block offset of
// every block_size()-th occurrence, one entry per marked bitmap block.
// They anchor the correction term that stops estimate errors from
// accumulating across levels: each corrected estimate stays within
// epsilon of the exact chain value and never overestimates it.
class DiscriminantTable {
public:
    DiscriminantTable() = default;

    static DiscriminantTable build(const QuadWaveletMatrix& m, uint64_t epsilon);

    uint64_t epsilon() const { return epsilon_; }

    // estimates of the position chain r_1..r_l over the quad levels
    std::vector<std::size_t> corrected_chain(const QuadWaveletMatrix& m, uint16_t sym,
                                             std::size_t i) const;
    // ablation: plain per-level approximation, errors compound
    std::vector<std::size_t> uncorrected_chain(const QuadWaveletMatrix& m, uint16_t sym,
                                               std::size_t i) const;

    uint64_t space_bits() const;

private:
    struct Level {
        ApproxRankIndex approx;
        std::array<PackedIntVector, 4> offsets;
    };
    uint64_t epsilon_ = 0;
    std::vector<Level> levels_;
};

enum class LineKind : uint8_t { counter, data };
enum class PlanChain : uint8_t { lower, upper };

struct PrefetchEntry {
    uint8_t level;
    LineKind kind;
    PlanChain chain;
    uint64_t line;
};

struct PrefetchPlanConfig {
    std::size_t max_lines = 10;  // parallel-request budget
    bool widen_by_level = false; // widen windows with accumulated error
};

struct PrefetchPlan {
    uint16_t sym = 0;
    uint64_t pos = 0;
    std::vector<PrefetchEntry> entries;
};

// Practical two-level prefetch predictor: coarse per-level bitmaps locate
// the counter lines of every level up front; the superblock and block
// counters then refine the estimates down to data-line granularity.
class WaveletPredictor {
public:
    static constexpr uint64_t kDefaultBlock = 2048;

    WaveletPredictor() = default;

    static WaveletPredictor build(const QuadWaveletMatrix& m, uint64_t block = kDefaultBlock);

    uint64_t block_size() const { return block_; }
    unsigned levels() const { return static_cast<unsigned>(levels_.size()); }
    const ApproxRankIndex& level(unsigned k) const { return levels_[k]; }

    PrefetchPlan plan(const QuadWaveletMatrix& m, uint16_t sym, std::size_t i,
                      const PrefetchPlanConfig& cfg = {}) const;
    void issue(const QuadWaveletMatrix& m, const PrefetchPlan& p) const;

    // fused plan-and-issue fast path used by rank_prefetch
    void issue_hints(const QuadWaveletMatrix& m, uint16_t sym, std::size_t i) const;

    uint64_t space_bits() const;

    void save(std::ostream& os) const;
    static WaveletPredictor load(std::istream& is);

private:
    uint64_t block_ = kDefaultBlock;
    std::vector<ApproxRankIndex> levels_;
};

} // namespace qwt
