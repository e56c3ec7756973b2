#include "qwt/predictor.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "qwt/kernels.hpp"
#include "qwt/quad_wm.hpp"
#include "qwt/serialize.hpp"

namespace qwt {

// ---------------------------------------------------------------- bitmap

PredictorBitmap PredictorBitmap::build(const std::vector<bool>& bits) {
    PredictorBitmap b;
    b.len_ = bits.size();
    b.words_.assign((bits.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) b.words_[i >> 6] |= uint64_t(1) << (i & 63);
    }
    b.build_counts();
    return b;
}

void PredictorBitmap::build_counts() {
    counts_.assign((len_ + 255) / 256, 0);
    uint64_t cum = 0;
    for (std::size_t chunk = 0; chunk < counts_.size(); ++chunk) {
        counts_[chunk] = cum;
        std::size_t w0 = chunk * 4;
        std::size_t w1 = std::min(w0 + 4, words_.size());
        cum += kernels::bit_count(words_.data() + w0, w1 - w0);
    }
    ones_ = cum;
}

std::size_t PredictorBitmap::rank1(std::size_t i) const {
    if (i > len_) throw std::out_of_range("bitmap rank out of range");
    if (i == 0) return 0;
    std::size_t chunk = i / 256;
    std::size_t c = chunk < counts_.size() ? counts_[chunk] : ones_;
    std::size_t w0 = chunk * 4;
    std::size_t full = (i - chunk * 256) / 64;
    c += kernels::bit_count(words_.data() + w0, full);
    std::size_t rem = i % 64;
    if (rem != 0) c += kernels::bit_count_word_prefix(words_[w0 + full], static_cast<unsigned>(rem));
    return c;
}

std::size_t PredictorBitmap::select1(std::size_t j) const {
    if (j == 0 || j > ones_) throw std::out_of_range("bitmap select out of range");
    std::size_t lo = 0;
    std::size_t hi = counts_.size() - 1;
    while (lo < hi) { // last chunk with count < j
        std::size_t mid = (lo + hi + 1) / 2;
        if (counts_[mid] < j) lo = mid; else hi = mid - 1;
    }
    std::size_t remaining = j - counts_[lo];
    for (std::size_t w = lo * 4;; ++w) {
        std::size_t c = std::popcount(words_[w]);
        if (c >= remaining) return w * 64 + kernels::bit_nth_in_word(words_[w], remaining) + 1;
        remaining -= c;
    }
}

bool PredictorBitmap::access(std::size_t i) const {
    if (i >= len_) throw std::out_of_range("bitmap index out of range");
    return (words_[i >> 6] >> (i & 63)) & 1u;
}

void PredictorBitmap::save(std::ostream& os) const {
    io::put_u64(os, len_);
    io::put_vec_le<uint64_t>(os, words_);
}

PredictorBitmap PredictorBitmap::load(std::istream& is) {
    PredictorBitmap b;
    b.len_ = io::get_u64(is);
    b.words_ = io::get_vec_le<uint64_t>(is);
    if (b.words_.size() != (b.len_ + 63) / 64) throw IoError("bitmap payload size mismatch");
    b.build_counts();
    return b;
}

// ------------------------------------------------------------ packed ints

void PackedIntVector::push_back(uint32_t v) {
    std::size_t bit = size_ * width_;
    std::size_t need = (bit + width_ + 63) / 64;
    if (words_.size() < need) words_.resize(need, 0);
    std::size_t w = bit / 64;
    unsigned off = bit % 64;
    words_[w] |= static_cast<uint64_t>(v) << off;
    if (off + width_ > 64) words_[w + 1] |= static_cast<uint64_t>(v) >> (64 - off);
    ++size_;
}

uint32_t PackedIntVector::get(std::size_t i) const {
    std::size_t bit = i * width_;
    std::size_t w = bit / 64;
    unsigned off = bit % 64;
    uint64_t v = words_[w] >> off;
    if (off + width_ > 64) v |= words_[w + 1] << (64 - off);
    return static_cast<uint32_t>(v & ((uint64_t(1) << width_) - 1));
}

// ----------------------------------------------------------- approx rank

ApproxRankIndex ApproxRankIndex::with_error(const RsQuadVector& qv, uint64_t epsilon) {
    if (epsilon < 2 || epsilon % 2 != 0) throw std::invalid_argument("error budget must be even and at least 2");
    return with_block(qv, epsilon / 2);
}

ApproxRankIndex ApproxRankIndex::with_block(const RsQuadVector& qv, uint64_t block) {
    if (block == 0) throw std::invalid_argument("block size must be positive");
    ApproxRankIndex a;
    a.block_ = block;
    a.n_ = qv.size();
    std::size_t n_blocks = (qv.size() + block - 1) / block;
    std::array<std::vector<bool>, 4> marks;
    for (std::vector<bool>& m : marks) m.assign(n_blocks, false);
    std::array<uint64_t, 4> seen = {0, 0, 0, 0};
    for (std::size_t i = 0; i < qv.size(); ++i) {
        unsigned sym = qv.access(i);
        if (++seen[sym] % block == 0) marks[sym][i / block] = true;
    }
    for (unsigned sym = 0; sym < 4; ++sym) a.bitmaps_[sym] = PredictorBitmap::build(marks[sym]);
    return a;
}

std::size_t ApproxRankIndex::approx_rank(unsigned sym, std::size_t i) const {
    if (sym >= 4) throw std::invalid_argument("symbol out of range");
    if (i > n_) throw std::out_of_range("rank position out of range");
    std::size_t blk = std::min(i / block_, bitmaps_[sym].size());
    return bitmaps_[sym].rank1(blk) * block_;
}

uint64_t ApproxRankIndex::space_bits() const {
    uint64_t bits = 0;
    for (const PredictorBitmap& b : bitmaps_) bits += b.space_bits();
    return bits;
}

void ApproxRankIndex::save(std::ostream& os) const {
    io::put_u64(os, block_);
    io::put_u64(os, n_);
    for (const PredictorBitmap& b : bitmaps_) b.save(os);
}

ApproxRankIndex ApproxRankIndex::load(std::istream& is) {
    ApproxRankIndex a;
    a.block_ = io::get_u64(is);
    a.n_ = io::get_u64(is);
    for (PredictorBitmap& b : a.bitmaps_) b = PredictorBitmap::load(is);
    return a;
}

// ----------------------------------------------------------- discriminants

DiscriminantTable DiscriminantTable::build(const QuadWaveletMatrix& m, uint64_t epsilon) {
    if (epsilon < 2 || epsilon % 2 != 0) throw std::invalid_argument("error budget must be even and at least 2");
    DiscriminantTable t;
    t.epsilon_ = epsilon;
    uint64_t block = epsilon / 2;
    unsigned width = std::max(1u, ceil_log2(block));
    for (unsigned k = 0; k < m.quad_levels(); ++k) {
        const RsQuadVector& qv = m.quad_plane(k);
        Level lvl;
        lvl.approx = ApproxRankIndex::with_error(qv, epsilon);
        for (PackedIntVector& p : lvl.offsets) p = PackedIntVector(width);
        std::array<uint64_t, 4> seen = {0, 0, 0, 0};
        for (std::size_t i = 0; i < qv.size(); ++i) {
            unsigned sym = qv.access(i);
            if (++seen[sym] % block == 0)
                lvl.offsets[sym].push_back(static_cast<uint32_t>(i % block));
        }
        t.levels_.push_back(std::move(lvl));
    }
    return t;
}

std::vector<std::size_t> DiscriminantTable::corrected_chain(const QuadWaveletMatrix& m,
                                                            uint16_t sym, std::size_t i) const {
    if (levels_.size() != m.quad_levels())
        throw std::invalid_argument("discriminant table does not match matrix");
    const uint64_t block = epsilon_ / 2;
    std::vector<std::size_t> chain;
    chain.reserve(levels_.size());
    std::size_t est = i; // estimated position entering the level, never above the exact one
    for (unsigned k = 0; k < levels_.size(); ++k) {
        unsigned q = m.quad_at_level(sym, k);
        std::size_t off = m.level_offsets(k)[q];
        const Level& lvl = levels_[k];
        const PredictorBitmap& bm = lvl.approx.bitmap(q);
        std::size_t n = lvl.approx.domain();

        std::size_t pos = std::min(est, n);
        std::size_t blk = std::min(pos / block, bm.size());
        std::size_t marks_before = bm.rank1(blk);

        // successor discriminant of the estimate, then the correction term
        std::size_t next = 0;
        bool found = false;
        for (std::size_t idx = marks_before + 1; idx <= bm.ones(); ++idx) {
            std::size_t b = bm.select1(idx) - 1;
            std::size_t d = b * block + lvl.offsets[q].get(idx - 1);
            if (d >= pos) {
                // idx * block occurrences lie in [0, d]
                std::size_t delta = std::min<std::size_t>(d - pos + 1, epsilon_ - 1);
                std::size_t known = idx * block;
                next = known > delta ? known - delta : 0;
                found = true;
                break;
            }
        }
        if (!found) {
            // past the last discriminant; saturate the correction
            std::size_t total = m.quad_plane(k).count(q);
            std::size_t delta = std::min<std::size_t>(epsilon_ - 1, total);
            next = total - delta;
        }
        est = next + off;
        chain.push_back(est);
    }
    return chain;
}

std::vector<std::size_t> DiscriminantTable::uncorrected_chain(const QuadWaveletMatrix& m,
                                                              uint16_t sym, std::size_t i) const {
    if (levels_.size() != m.quad_levels())
        throw std::invalid_argument("discriminant table does not match matrix");
    std::vector<std::size_t> chain;
    chain.reserve(levels_.size());
    std::size_t est = i;
    for (unsigned k = 0; k < levels_.size(); ++k) {
        unsigned q = m.quad_at_level(sym, k);
        std::size_t off = m.level_offsets(k)[q];
        est = levels_[k].approx.approx_rank(q, std::min(est, levels_[k].approx.domain())) + off;
        chain.push_back(est);
    }
    return chain;
}

uint64_t DiscriminantTable::space_bits() const {
    uint64_t bits = 0;
    for (const Level& lvl : levels_) {
        bits += lvl.approx.space_bits();
        for (const PackedIntVector& p : lvl.offsets) bits += p.space_bits();
    }
    return bits;
}

// ------------------------------------------------------- prefetch planner

WaveletPredictor WaveletPredictor::build(const QuadWaveletMatrix& m, uint64_t block) {
    if (block == 0) throw std::invalid_argument("block size must be positive");
    WaveletPredictor p;
    p.block_ = block;
    for (unsigned k = 0; k < m.quad_levels(); ++k)
        p.levels_.push_back(ApproxRankIndex::with_block(m.quad_plane(k), block));
    return p;
}

namespace {

constexpr std::size_t kQuadsPerLine = kCacheLineBits / 2;
constexpr std::size_t kGroupsPerLine = kCacheLineBytes / sizeof(CounterGroup);

template <typename Emit>
void plan_chain(const QuadWaveletMatrix& m, const std::vector<ApproxRankIndex>& pred,
                uint64_t bitmap_block, uint16_t sym, std::size_t start, PlanChain chain,
                bool widen, Emit&& emit) {
    const std::size_t n = m.size();
    const std::size_t blk = block_quads(m.geometry());
    const std::size_t sb = superblock_quads(m.geometry());

    // coarse pass: bitmap estimates locate the counter lines of every level
    std::size_t est = start;
    std::size_t err = 0;
    for (unsigned k = 0; k < m.quad_levels(); ++k) {
        unsigned q = m.quad_at_level(sym, k);
        std::size_t lo_group = std::min(est, n) / sb;
        std::size_t hi_group = widen ? std::min(est + err, n) / sb : lo_group;
        for (std::size_t line = lo_group / kGroupsPerLine; line <= hi_group / kGroupsPerLine; ++line) {
            emit(PrefetchEntry{static_cast<uint8_t>(k), LineKind::counter, chain, line});
            if (!widen) break;
        }
        est = pred[k].approx_rank(q, std::min(est, n)) + m.level_offsets(k)[q];
        err += 2 * bitmap_block - 1;
    }

    // refined pass: counters pin the estimates down to data-line windows
    est = start;
    err = 0;
    for (unsigned k = 0; k < m.quad_levels(); ++k) {
        unsigned q = m.quad_at_level(sym, k);
        std::size_t pos = std::min(est, n);
        // the exact scan reads from the block floor up to the position
        std::size_t lo_line = (widen ? pos / blk * blk : pos) / kQuadsPerLine;
        std::size_t hi_line = (widen ? std::min(est + err, n) : pos) / kQuadsPerLine;
        for (std::size_t line = lo_line; line <= hi_line; ++line)
            emit(PrefetchEntry{static_cast<uint8_t>(k), LineKind::data, chain, line});
        est = m.quad_plane(k).rank_block_floor(q, pos) + m.level_offsets(k)[q];
        err += blk - 1;
    }
    if (m.has_tail()) {
        std::size_t pos = std::min(est, n);
        std::size_t lo_line = (widen ? pos / RsBitVector::kBlockBits * RsBitVector::kBlockBits : pos) / kCacheLineBits;
        std::size_t hi_line = (widen ? std::min(est + err, n) : pos) / kCacheLineBits;
        for (std::size_t line = lo_line; line <= hi_line; ++line)
            emit(PrefetchEntry{static_cast<uint8_t>(m.quad_levels()), LineKind::data, chain, line});
    }
}

} // namespace

PrefetchPlan WaveletPredictor::plan(const QuadWaveletMatrix& m, uint16_t sym, std::size_t i,
                                    const PrefetchPlanConfig& cfg) const {
    PrefetchPlan p;
    p.sym = sym;
    p.pos = i;
    if (levels_.size() != m.quad_levels() || sym >= m.sigma() || i > m.size()) return p;
    std::vector<PrefetchEntry> counters;
    std::vector<PrefetchEntry> data;
    auto emit = [&](const PrefetchEntry& e) {
        (e.kind == LineKind::counter ? counters : data).push_back(e);
    };
    plan_chain(m, levels_, block_, sym, i, PlanChain::upper, cfg.widen_by_level, emit);
    plan_chain(m, levels_, block_, sym, 0, PlanChain::lower, cfg.widen_by_level, emit);
    // counter lines first: they are read while refining the data lines
    for (const PrefetchEntry& e : counters) {
        if (p.entries.size() >= cfg.max_lines) return p;
        p.entries.push_back(e);
    }
    for (const PrefetchEntry& e : data) {
        if (p.entries.size() >= cfg.max_lines) return p;
        p.entries.push_back(e);
    }
    return p;
}

void WaveletPredictor::issue(const QuadWaveletMatrix& m, const PrefetchPlan& p) const {
    for (const PrefetchEntry& e : p.entries) {
        if (e.level < m.quad_levels()) {
            const RsQuadVector& qv = m.quad_plane(e.level);
            unsigned q = m.quad_at_level(p.sym, e.level);
            if (e.kind == LineKind::counter) {
                if (e.line < qv.counter_line_count(q)) prefetch_read(qv.counter_line_addr(q, e.line));
            } else {
                if (e.line < qv.data_line_count()) prefetch_read(qv.data_line_addr(e.line));
            }
        } else if (m.has_tail() && e.kind == LineKind::data) {
            const RsBitVector* tail = m.tail_plane();
            std::size_t bit = e.line * kCacheLineBits;
            if (bit < tail->size()) prefetch_read(tail->words() + bit / 64);
        }
    }
}

void WaveletPredictor::issue_hints(const QuadWaveletMatrix& m, uint16_t sym, std::size_t i) const {
    if (levels_.size() != m.quad_levels() || sym >= m.sigma() || i > m.size()) return;
    const std::size_t n = m.size();
    if (n == 0) return;
    for (std::size_t start : {i, std::size_t(0)}) {
        // coarse pass over the in-cache bitmaps: request every counter line
        std::size_t est = start;
        for (unsigned k = 0; k < m.quad_levels(); ++k) {
            unsigned q = m.quad_at_level(sym, k);
            std::size_t pos = std::min(est, n);
            const RsQuadVector& qv = m.quad_plane(k);
            prefetch_read(&qv.group(q, pos / superblock_quads(qv.geometry())));
            est = levels_[k].approx_rank(q, pos) + m.level_offsets(k)[q];
        }
        // refined pass: counters are on their way, follow them to the data
        est = start;
        for (unsigned k = 0; k < m.quad_levels(); ++k) {
            unsigned q = m.quad_at_level(sym, k);
            std::size_t pos = std::min(est, n);
            const RsQuadVector& qv = m.quad_plane(k);
            prefetch_read(qv.words() + pos / 32);
            est = qv.rank_block_floor(q, pos) + m.level_offsets(k)[q];
        }
        if (m.has_tail()) {
            const RsBitVector* tail = m.tail_plane();
            std::size_t pos = std::min(est, n);
            if (pos / 64 < tail->word_count()) prefetch_read(tail->words() + pos / 64);
        }
    }
}

uint64_t WaveletPredictor::space_bits() const {
    uint64_t bits = 0;
    for (const ApproxRankIndex& lvl : levels_) bits += lvl.space_bits();
    return bits;
}

void WaveletPredictor::save(std::ostream& os) const {
    io::put_u64(os, block_);
    io::put_u8(os, static_cast<uint8_t>(levels_.size()));
    for (const ApproxRankIndex& lvl : levels_) lvl.save(os);
    io::put_u8(os, 0); // discriminant tables, none attached
}

WaveletPredictor WaveletPredictor::load(std::istream& is) {
    WaveletPredictor p;
    p.block_ = io::get_u64(is);
    unsigned n = io::get_u8(is);
    for (unsigned k = 0; k < n; ++k) p.levels_.push_back(ApproxRankIndex::load(is));
    if (io::get_u8(is) != 0) throw IoError("discriminant payloads are not supported yet");
    return p;
}

} // namespace qwt
