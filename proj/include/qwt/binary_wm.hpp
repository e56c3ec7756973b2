#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qwt/bitvector.hpp"

namespace qwt {

struct QueryStats {
    uint64_t plane_visits = 0;
};

// Level-wise binary wavelet matrix: one plane per code bit, each level
// obtained by stably sorting the previous one on its bit. Planes are kept
// as separate vectors; positions are level-local.
class BinaryWaveletMatrix {
public:
    BinaryWaveletMatrix() = default;

    static BinaryWaveletMatrix build(std::span<const uint16_t> text, uint32_t sigma);

    std::size_t size() const { return n_; }
    uint32_t sigma() const { return sigma_; }
    unsigned levels() const { return static_cast<unsigned>(planes_.size()); }

    std::size_t rank(uint16_t sym, std::size_t i, QueryStats* stats = nullptr) const;
    uint16_t access(std::size_t i) const;
    std::size_t select(uint16_t sym, std::size_t j) const;

    const std::vector<std::size_t>& zeros_per_level() const { return zeros_; }
    const RsBitVector& plane(unsigned level) const { return planes_[level]; }

private:
    std::size_t n_ = 0;
    uint32_t sigma_ = 0;
    std::vector<RsBitVector> planes_;
    std::vector<std::size_t> zeros_; // Z
};

// Level-wise binary wavelet tree kept purely as a rank oracle; node
// intervals are recomputed on the fly from three ranks per level.
class BinaryWaveletTree {
public:
    BinaryWaveletTree() = default;

    static BinaryWaveletTree build(std::span<const uint16_t> text, uint32_t sigma);

    std::size_t size() const { return n_; }
    unsigned levels() const { return static_cast<unsigned>(planes_.size()); }

    std::size_t rank(uint16_t sym, std::size_t i, QueryStats* stats = nullptr) const;

private:
    std::size_t n_ = 0;
    uint32_t sigma_ = 0;
    std::vector<RsBitVector> planes_;
};

} // namespace qwt
