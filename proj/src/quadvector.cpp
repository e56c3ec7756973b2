#include "qwt/quadvector.hpp"

#include <algorithm>
#include <stdexcept>

#include "qwt/kernels.hpp"
#include "qwt/serialize.hpp"

namespace qwt {

RsQuadVector RsQuadVector::build(std::span<const uint8_t> quads, Geometry g) {
    RsQuadVector v;
    v.geometry_ = g;
    v.len_ = quads.size();
    v.words_.resize((quads.size() + 31) / 32);
    for (std::size_t i = 0; i < quads.size(); ++i) {
        if (quads[i] >= 4) throw std::invalid_argument("quad symbol out of range");
        v.words_[i >> 5] |= uint64_t(quads[i]) << (2 * (i & 31));
    }
    v.build_directory();
    return v;
}

void RsQuadVector::build_directory() {
    const std::size_t sb_quads = superblock_quads(geometry_);
    const std::size_t blk_quads = block_quads(geometry_);
    const std::size_t blocks_per_super = sb_quads / blk_quads;
    const std::size_t n_super = len_ / sb_quads + 1;

    for (unsigned sym = 0; sym < 4; ++sym) {
        counters_[sym].assign(n_super, CounterGroup{});
        samples_[sym].clear();
        std::size_t cum = 0;
        for (std::size_t sb = 0; sb < n_super; ++sb) {
            counters_[sym][sb].set_super(cum);
            std::size_t in_super = 0;
            for (std::size_t blk = 0; blk < blocks_per_super; ++blk) {
                if (blk > 0)
                    counters_[sym][sb].set_block(static_cast<unsigned>(blk),
                                                 static_cast<uint32_t>(in_super));
                std::size_t start = sb * sb_quads + blk * blk_quads;
                if (start >= len_) continue;
                std::size_t end = std::min(start + blk_quads, len_);
                std::size_t w0 = start / 32;
                std::size_t full = (end - start) / 32;
                std::size_t c = kernels::quad_count(words_.data() + w0, full, sym);
                std::size_t rem = (end - start) % 32;
                if (rem != 0)
                    c += kernels::quad_count_word_prefix(words_[w0 + full], sym,
                                                         static_cast<unsigned>(rem));
                std::size_t before = cum + in_super;
                for (std::size_t m = before / kSelectSampleRate + 1;
                     m * kSelectSampleRate <= before + c; ++m)
                    samples_[sym].push_back(static_cast<uint32_t>(sb));
                in_super += c;
            }
            cum += in_super;
        }
        totals_[sym] = cum;
    }
}

uint8_t RsQuadVector::access(std::size_t i) const {
    if (i >= len_) throw std::out_of_range("quad index out of range");
    return static_cast<uint8_t>((words_[i >> 5] >> (2 * (i & 31))) & 3u);
}

std::size_t RsQuadVector::rank(unsigned sym, std::size_t i) const {
    if (sym >= 4) throw std::invalid_argument("symbol out of range");
    if (i > len_) throw std::out_of_range("rank position out of range");
    const std::size_t sb_quads = superblock_quads(geometry_);
    const std::size_t blk_quads = block_quads(geometry_);
    const CounterGroup& g = counters_[sym][i / sb_quads];
    std::size_t blk = (i % sb_quads) / blk_quads;
    std::size_t c = g.super() + g.block(static_cast<unsigned>(blk));
    std::size_t start = i / blk_quads * blk_quads;
    std::size_t w0 = start / 32;
    std::size_t full = (i - start) / 32;
    c += kernels::quad_count(words_.data() + w0, full, sym);
    std::size_t rem = (i - start) % 32;
    if (rem != 0)
        c += kernels::quad_count_word_prefix(words_[w0 + full], sym, static_cast<unsigned>(rem));
    return c;
}

std::size_t RsQuadVector::count(unsigned sym) const {
    if (sym >= 4) throw std::invalid_argument("symbol out of range");
    return totals_[sym];
}

std::size_t RsQuadVector::select(unsigned sym, std::size_t j) const {
    if (sym >= 4) throw std::invalid_argument("symbol out of range");
    if (j == 0 || j > totals_[sym]) throw std::out_of_range("select occurrence out of range");
    const std::size_t sb_quads = superblock_quads(geometry_);
    const std::size_t blk_quads = block_quads(geometry_);
    const std::size_t blocks_per_super = sb_quads / blk_quads;
    const std::vector<CounterGroup>& dir = counters_[sym];
    const std::vector<uint32_t>& samples = samples_[sym];

    std::size_t m = (j - 1) / kSelectSampleRate;
    std::size_t lo = m > 0 ? samples[m - 1] : 0;
    std::size_t hi = m < samples.size() ? samples[m] : len_ / sb_quads;
    while (lo < hi) {
        std::size_t mid = (lo + hi + 1) / 2;
        if (dir[mid].super() < j) lo = mid; else hi = mid - 1;
    }
    std::size_t sb = lo;
    std::size_t remaining = j - dir[sb].super();

    std::size_t blk = 0;
    for (unsigned b = 1; b < blocks_per_super; ++b) {
        if (sb * sb_quads + b * blk_quads >= len_) break;
        if (dir[sb].block(b) < remaining) blk = b; else break;
    }
    remaining -= dir[sb].block(static_cast<unsigned>(blk));

    std::size_t w = (sb * sb_quads + blk * blk_quads) / 32;
    for (;; ++w) {
        std::size_t c = kernels::quad_count_word_prefix(words_[w], sym, 32);
        if (c >= remaining) {
            return w * 32 + kernels::quad_nth_in_word(words_[w], sym, remaining) + 1;
        }
        remaining -= c;
    }
}

void RsQuadVector::prefetch_rank(unsigned sym, std::size_t i) const {
    if (sym >= 4 || i > len_) return;
    prefetch_read(&counters_[sym][i / superblock_quads(geometry_)]);
    if (i < len_) prefetch_read(words_.data() + i / 32);
}

std::size_t RsQuadVector::rank_block_floor(unsigned sym, std::size_t i) const {
    const std::size_t sb_quads = superblock_quads(geometry_);
    const std::size_t blk_quads = block_quads(geometry_);
    if (i > len_) i = len_;
    const CounterGroup& g = counters_[sym][i / sb_quads];
    std::size_t blk = (i % sb_quads) / blk_quads;
    return g.super() + g.block(static_cast<unsigned>(blk));
}

SpaceReport RsQuadVector::space_report() const {
    SpaceReport r;
    r.data_bits = static_cast<uint64_t>(len_) * 2;
    for (unsigned sym = 0; sym < 4; ++sym) {
        r.counter_bits += counters_[sym].size() * 128;
        r.select_sample_bits += samples_[sym].size() * 32;
    }
    return r;
}

std::size_t RsQuadVector::data_line_count() const {
    return (len_ * 2 + kCacheLineBits - 1) / kCacheLineBits;
}

std::size_t RsQuadVector::counter_line_count(unsigned sym) const {
    return (counters_[sym].size() * 16 + kCacheLineBytes - 1) / kCacheLineBytes;
}

const void* RsQuadVector::data_line_addr(std::size_t line) const {
    return reinterpret_cast<const char*>(words_.data()) + line * kCacheLineBytes;
}

const void* RsQuadVector::counter_line_addr(unsigned sym, std::size_t line) const {
    return reinterpret_cast<const char*>(counters_[sym].data()) + line * kCacheLineBytes;
}

void RsQuadVector::save(std::ostream& os) const {
    io::put_u8(os, static_cast<uint8_t>(geometry_));
    io::put_u64(os, len_);
    io::put_u64(os, words_.size());
    for (std::size_t w = 0; w < words_.size(); ++w) io::put_u64(os, words_[w]);
    for (unsigned sym = 0; sym < 4; ++sym) {
        io::put_u64(os, counters_[sym].size());
        for (const CounterGroup& g : counters_[sym]) {
            io::put_u64(os, g.lo);
            io::put_u64(os, g.hi);
        }
    }
    for (unsigned sym = 0; sym < 4; ++sym) io::put_vec_le<uint32_t>(os, samples_[sym]);
}

RsQuadVector RsQuadVector::load(std::istream& is) {
    RsQuadVector v;
    uint8_t g = io::get_u8(is);
    if (g > 1) throw IoError("bad geometry tag");
    v.geometry_ = static_cast<Geometry>(g);
    v.len_ = io::get_u64(is);
    std::size_t n_words = io::get_u64(is);
    v.words_.resize(n_words);
    for (std::size_t w = 0; w < n_words; ++w) v.words_[w] = io::get_u64(is);
    for (unsigned sym = 0; sym < 4; ++sym) {
        std::size_t n_groups = io::get_u64(is);
        v.counters_[sym].resize(n_groups);
        for (CounterGroup& grp : v.counters_[sym]) {
            grp.lo = io::get_u64(is);
            grp.hi = io::get_u64(is);
        }
    }
    for (unsigned sym = 0; sym < 4; ++sym) v.samples_[sym] = io::get_vec_le<uint32_t>(is);
    for (unsigned sym = 0; sym < 4; ++sym) {
        std::size_t sb = v.len_ / superblock_quads(v.geometry_);
        if (v.counters_[sym].size() != sb + 1) throw IoError("counter table size mismatch");
        v.totals_[sym] = v.rank(sym, v.len_);
    }
    return v;
}

} // namespace qwt
