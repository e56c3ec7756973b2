#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "qwt/common.hpp"
#include "qwt/counters.hpp"

namespace qwt {

// Plain bit vector with constant-time rank and sampled select. Rank is
// exclusive: rank1(i) counts ones strictly before position i. Select
// follows the min definition: select1(j) is the smallest p with
// rank1(p) == j, i.e. one past the j-th set bit.
//
// The rank directory mirrors the quad-vector layout: superblocks of 4096
// bits and blocks of 512 bits packed into one 128-bit group per
// superblock. Select scans resume from a sampled superblock recorded for
// every 8192-th occurrence of the queried bit.
class RsBitVector {
public:
    static constexpr std::size_t kSuperBits = 4096;
    static constexpr std::size_t kBlockBits = 512;
    static constexpr std::size_t kSelectSampleRate = 8192;

    RsBitVector() = default;

    static RsBitVector build(const std::vector<bool>& bits);
    static RsBitVector build(AlignedWords words, std::size_t len);

    std::size_t size() const { return len_; }
    std::size_t ones() const { return ones_; }
    std::size_t zeros() const { return len_ - ones_; }

    bool access(std::size_t i) const;
    std::size_t rank1(std::size_t i) const;
    std::size_t rank0(std::size_t i) const { return i - rank1(i); }
    std::size_t select1(std::size_t j) const;
    std::size_t select0(std::size_t j) const;

    const uint64_t* words() const { return words_.data(); }
    std::size_t word_count() const { return words_.size(); }

    // directory + sample footprint, excluding the payload words
    uint64_t directory_bits() const;

    void save(std::ostream& os) const;
    static RsBitVector load(std::istream& is);

private:
    void build_directory();
    std::size_t select_scan(std::size_t j, bool bit) const;

    AlignedWords words_;
    std::size_t len_ = 0;
    std::size_t ones_ = 0;
    std::vector<CounterGroup> dir_;
    std::vector<uint32_t> samples1_;
    std::vector<uint32_t> samples0_;
};

} // namespace qwt
