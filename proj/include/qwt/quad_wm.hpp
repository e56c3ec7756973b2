#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qwt/binary_wm.hpp"
#include "qwt/bitvector.hpp"
#include "qwt/quadvector.hpp"

namespace qwt {

class WaveletPredictor;

// 4-ary wavelet matrix: one quad plane per pair of code bits, consuming the
// two most significant bits first, plus a bit plane for the last code bit
// when the code width is odd. Each level is the previous one stably sorted
// by its quad; intervals therefore appear in bit-reversal order
// (00, 10, 01, 11), and C_k[q] counts the level-k symbols whose quad
// precedes q in that order.
class QuadWaveletMatrix {
public:
    QuadWaveletMatrix();
    ~QuadWaveletMatrix();
    QuadWaveletMatrix(QuadWaveletMatrix&&) noexcept;
    QuadWaveletMatrix& operator=(QuadWaveletMatrix&&) noexcept;

    static constexpr std::array<unsigned, 4> kLevelOrder = {0, 2, 1, 3};

    static QuadWaveletMatrix build(std::span<const uint16_t> text, uint32_t sigma,
                                   Geometry g = Geometry::sb2048_b256);

    std::size_t size() const { return n_; }
    uint32_t sigma() const { return sigma_; }
    unsigned bit_width() const { return bit_width_; }
    unsigned levels() const { return (bit_width_ + 1) / 2; }
    unsigned quad_levels() const { return static_cast<unsigned>(qplanes_.size()); }
    bool has_tail() const { return tail_.has_value(); }
    Geometry geometry() const { return geometry_; }

    std::size_t rank(uint16_t sym, std::size_t i, QueryStats* stats = nullptr) const;
    uint16_t access(std::size_t i) const;
    std::size_t select(uint16_t sym, std::size_t j) const;

    // rank with the prefetch plan issued up front; falls back to the plain
    // path when no predictor is attached. Same result either way.
    std::size_t rank_prefetch(uint16_t sym, std::size_t i) const;

    void attach_predictor(std::unique_ptr<WaveletPredictor> p);
    const WaveletPredictor* predictor() const { return predictor_.get(); }

    // per-level introspection
    const RsQuadVector& quad_plane(unsigned k) const { return qplanes_[k]; }
    const RsBitVector* tail_plane() const { return tail_ ? &*tail_ : nullptr; }
    std::size_t tail_zeros() const { return tail_ ? tail_->zeros() : 0; }
    const std::array<std::size_t, 4>& level_offsets(unsigned k) const { return offsets_[k]; }
    unsigned quad_at_level(uint16_t sym, unsigned k) const; // two code bits used on level k
    bool tail_bit(uint16_t sym) const { return sym & 1u; }

    // inclusive cumulative counts in level order, e.g. (5, 7, 11, 15) for
    // the worked 15-symbol example
    std::array<std::size_t, 4> cumulative_level_offsets(unsigned k) const;

    // exact per-level values of the two rank chains (positions fed to the
    // next level); the final chain values after the tail step come last
    struct RankChain {
        std::vector<std::size_t> lo; // b chain, starts at 0
        std::vector<std::size_t> hi; // r chain, starts at i
    };
    RankChain rank_chain(uint16_t sym, std::size_t i) const;

    // structural payload only; the header fields travel with the index file
    void save(std::ostream& os) const;
    static QuadWaveletMatrix load(std::istream& is, uint32_t sigma, std::size_t n,
                                  unsigned bit_width, Geometry g);

    SpaceReport space_report() const;

private:
    std::size_t n_ = 0;
    uint32_t sigma_ = 0;
    unsigned bit_width_ = 0;
    Geometry geometry_ = Geometry::sb2048_b256;
    std::vector<RsQuadVector> qplanes_;
    std::optional<RsBitVector> tail_;
    std::vector<std::array<std::size_t, 4>> offsets_; // C_k by quad value
    std::unique_ptr<WaveletPredictor> predictor_;
};

} // namespace qwt
