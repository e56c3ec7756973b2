#include "qwt/bitvector.hpp"

#include <stdexcept>

#include "qwt/kernels.hpp"
#include "qwt/serialize.hpp"

namespace qwt {

namespace {
constexpr std::size_t kWordsPerBlock = RsBitVector::kBlockBits / 64;
constexpr std::size_t kBlocksPerSuper = RsBitVector::kSuperBits / RsBitVector::kBlockBits;
} // namespace

RsBitVector RsBitVector::build(const std::vector<bool>& bits) {
    AlignedWords words((bits.size() + 63) / 64);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) words[i >> 6] |= uint64_t(1) << (i & 63);
    }
    return build(std::move(words), bits.size());
}

RsBitVector RsBitVector::build(AlignedWords words, std::size_t len) {
    RsBitVector v;
    v.words_ = std::move(words);
    v.len_ = len;
    if (v.words_.size() * 64 < len) throw std::invalid_argument("bit buffer shorter than length");
    // clear tail bits beyond len
    if (len % 64 != 0 && !v.words_.empty()) {
        v.words_[len >> 6] &= (uint64_t(1) << (len & 63)) - 1;
    }
    for (std::size_t w = (len + 63) / 64; w < v.words_.size(); ++w) v.words_[w] = 0;
    v.build_directory();
    return v;
}

void RsBitVector::build_directory() {
    std::size_t n_super = len_ / kSuperBits + 1;
    dir_.assign(n_super, CounterGroup{});
    samples1_.clear();
    samples0_.clear();

    std::size_t cum = 0; // ones before current position
    for (std::size_t sb = 0; sb < n_super; ++sb) {
        dir_[sb].set_super(cum);
        std::size_t in_super = 0;
        for (std::size_t blk = 0; blk < kBlocksPerSuper; ++blk) {
            if (blk > 0) dir_[sb].set_block(static_cast<unsigned>(blk), static_cast<uint32_t>(in_super));
            std::size_t start = sb * kSuperBits + blk * kBlockBits;
            if (start >= len_) continue;
            std::size_t end = std::min(start + kBlockBits, len_);
            std::size_t w0 = start / 64;
            std::size_t full = (end - start) / 64;
            std::size_t c = kernels::bit_count(words_.data() + w0, full);
            std::size_t rem = (end - start) % 64;
            if (rem != 0) c += kernels::bit_count_word_prefix(words_[w0 + full], static_cast<unsigned>(rem));
            // sample the superblock of every 8192-th one (and zero)
            std::size_t ones_before = cum + in_super;
            std::size_t zeros_before = start - ones_before;
            std::size_t ones_after = ones_before + c;
            std::size_t zeros_after = zeros_before + (end - start - c);
            for (std::size_t m = ones_before / kSelectSampleRate + 1; m * kSelectSampleRate <= ones_after; ++m)
                samples1_.push_back(static_cast<uint32_t>(sb));
            for (std::size_t m = zeros_before / kSelectSampleRate + 1; m * kSelectSampleRate <= zeros_after; ++m)
                samples0_.push_back(static_cast<uint32_t>(sb));
            in_super += c;
        }
        cum += in_super;
    }
    ones_ = cum;
}

bool RsBitVector::access(std::size_t i) const {
    if (i >= len_) throw std::out_of_range("bit index out of range");
    return (words_[i >> 6] >> (i & 63)) & 1u;
}

std::size_t RsBitVector::rank1(std::size_t i) const {
    if (i > len_) throw std::out_of_range("rank position out of range");
    const CounterGroup& g = dir_[i / kSuperBits];
    std::size_t blk = (i % kSuperBits) / kBlockBits;
    std::size_t c = g.super() + g.block(static_cast<unsigned>(blk));
    std::size_t start = i / kBlockBits * kBlockBits;
    std::size_t w0 = start / 64;
    std::size_t full = (i - start) / 64;
    c += kernels::bit_count(words_.data() + w0, full);
    std::size_t rem = (i - start) % 64;
    if (rem != 0) c += kernels::bit_count_word_prefix(words_[w0 + full], static_cast<unsigned>(rem));
    return c;
}

std::size_t RsBitVector::select1(std::size_t j) const {
    if (j == 0 || j > ones_) throw std::out_of_range("select1 argument out of range");
    return select_scan(j, true);
}

std::size_t RsBitVector::select0(std::size_t j) const {
    if (j == 0 || j > zeros()) throw std::out_of_range("select0 argument out of range");
    return select_scan(j, false);
}

std::size_t RsBitVector::select_scan(std::size_t j, bool bit) const {
    const std::vector<uint32_t>& samples = bit ? samples1_ : samples0_;
    auto super_count = [&](std::size_t sb) {
        uint64_t one = dir_[sb].super();
        return bit ? one : sb * kSuperBits - one;
    };

    std::size_t m = (j - 1) / kSelectSampleRate;
    std::size_t lo = m > 0 ? samples[m - 1] : 0;
    std::size_t hi = m < samples.size() ? samples[m] : len_ / kSuperBits;
    // last superblock whose prefix count is < j
    while (lo < hi) {
        std::size_t mid = (lo + hi + 1) / 2;
        if (super_count(mid) < j) lo = mid; else hi = mid - 1;
    }
    std::size_t sb = lo;
    std::size_t remaining = j - super_count(sb);

    const CounterGroup& g = dir_[sb];
    std::size_t blk = 0;
    for (unsigned b = 1; b < kBlocksPerSuper; ++b) {
        std::size_t base = sb * kSuperBits + b * kBlockBits;
        if (base >= len_) break;
        uint64_t cnt = bit ? g.block(b) : b * kBlockBits - g.block(b);
        if (cnt < remaining) blk = b; else break;
    }
    remaining -= bit ? g.block(static_cast<unsigned>(blk))
                     : blk * kBlockBits - g.block(static_cast<unsigned>(blk));

    std::size_t w = (sb * kSuperBits + blk * kBlockBits) / 64;
    for (;; ++w) {
        uint64_t word = bit ? words_[w] : ~words_[w];
        std::size_t c = std::popcount(word);
        if (c >= remaining) {
            return w * 64 + kernels::bit_nth_in_word(word, remaining) + 1;
        }
        remaining -= c;
    }
}

uint64_t RsBitVector::directory_bits() const {
    return dir_.size() * 128 + (samples1_.size() + samples0_.size()) * 32;
}

void RsBitVector::save(std::ostream& os) const {
    io::put_u64(os, len_);
    io::put_u64(os, words_.size());
    for (std::size_t w = 0; w < words_.size(); ++w) io::put_u64(os, words_[w]);
}

RsBitVector RsBitVector::load(std::istream& is) {
    std::size_t len = io::get_u64(is);
    std::size_t n_words = io::get_u64(is);
    AlignedWords words(n_words);
    for (std::size_t w = 0; w < n_words; ++w) words[w] = io::get_u64(is);
    return build(std::move(words), len);
}

} // namespace qwt
