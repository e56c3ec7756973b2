#include "qwt/binary_wm.hpp"

#include <stdexcept>

#include "qwt/common.hpp"

namespace qwt {

namespace {

void check_text(std::span<const uint16_t> text, uint32_t sigma) {
    if (sigma < 2) throw std::invalid_argument("alphabet size must be at least 2");
    for (uint16_t c : text) {
        if (c >= sigma) throw std::invalid_argument("symbol out of alphabet range");
    }
}

RsBitVector make_plane(const std::vector<uint16_t>& order, unsigned shift) {
    std::vector<bool> bits(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) bits[i] = (order[i] >> shift) & 1u;
    return RsBitVector::build(bits);
}

} // namespace

BinaryWaveletMatrix BinaryWaveletMatrix::build(std::span<const uint16_t> text, uint32_t sigma) {
    check_text(text, sigma);
    BinaryWaveletMatrix m;
    m.n_ = text.size();
    m.sigma_ = sigma;
    unsigned levels = std::max(1u, ceil_log2(sigma));

    std::vector<uint16_t> order(text.begin(), text.end());
    std::vector<uint16_t> next(order.size());
    for (unsigned level = 0; level < levels; ++level) {
        unsigned shift = levels - 1 - level;
        m.planes_.push_back(make_plane(order, shift));
        m.zeros_.push_back(m.planes_.back().zeros());
        // stable partition on the current bit: zeros first, then ones
        std::size_t z = 0;
        for (uint16_t c : order)
            if (((c >> shift) & 1u) == 0) next[z++] = c;
        for (uint16_t c : order)
            if (((c >> shift) & 1u) == 1) next[z++] = c;
        order.swap(next);
    }
    return m;
}

std::size_t BinaryWaveletMatrix::rank(uint16_t sym, std::size_t i, QueryStats* stats) const {
    if (sym >= sigma_) throw std::invalid_argument("symbol out of alphabet range");
    if (i > n_) throw std::out_of_range("rank position out of range");
    std::size_t lo = 0;
    std::size_t hi = i;
    for (unsigned level = 0; level < planes_.size(); ++level) {
        const RsBitVector& p = planes_[level];
        if (stats != nullptr) ++stats->plane_visits;
        if ((sym >> (planes_.size() - 1 - level)) & 1u) {
            lo = zeros_[level] + p.rank1(lo);
            hi = zeros_[level] + p.rank1(hi);
        } else {
            lo = p.rank0(lo);
            hi = p.rank0(hi);
        }
    }
    return hi - lo;
}

uint16_t BinaryWaveletMatrix::access(std::size_t i) const {
    if (i >= n_) throw std::out_of_range("access position out of range");
    uint16_t sym = 0;
    for (unsigned level = 0; level < planes_.size(); ++level) {
        const RsBitVector& p = planes_[level];
        bool bit = p.access(i);
        sym = static_cast<uint16_t>((sym << 1) | bit);
        i = bit ? zeros_[level] + p.rank1(i) : p.rank0(i);
    }
    return sym;
}

std::size_t BinaryWaveletMatrix::select(uint16_t sym, std::size_t j) const {
    if (sym >= sigma_) throw std::invalid_argument("symbol out of alphabet range");
    if (j == 0 || j > rank(sym, n_)) throw std::out_of_range("select occurrence out of range");
    // interval start of sym at the deepest level
    std::size_t lo = 0;
    for (unsigned level = 0; level < planes_.size(); ++level) {
        const RsBitVector& p = planes_[level];
        if ((sym >> (planes_.size() - 1 - level)) & 1u)
            lo = zeros_[level] + p.rank1(lo);
        else
            lo = p.rank0(lo);
    }
    std::size_t pos = lo + j - 1;
    for (unsigned level = static_cast<unsigned>(planes_.size()); level-- > 0;) {
        const RsBitVector& p = planes_[level];
        if ((sym >> (planes_.size() - 1 - level)) & 1u)
            pos = p.select1(pos - zeros_[level] + 1) - 1;
        else
            pos = p.select0(pos + 1) - 1;
    }
    return pos + 1;
}

BinaryWaveletTree BinaryWaveletTree::build(std::span<const uint16_t> text, uint32_t sigma) {
    check_text(text, sigma);
    BinaryWaveletTree t;
    t.n_ = text.size();
    t.sigma_ = sigma;
    unsigned levels = std::max(1u, ceil_log2(sigma));

    // level l orders the text by its (l)-bit prefix, nodes left to right
    std::vector<uint16_t> order(text.begin(), text.end());
    std::vector<uint16_t> next(order.size());
    for (unsigned level = 0; level < levels; ++level) {
        unsigned shift = levels - 1 - level;
        t.planes_.push_back(make_plane(order, shift));
        std::vector<std::size_t> bucket_starts(std::size_t(2) << level, 0);
        for (uint16_t c : order) {
            std::size_t prefix = static_cast<std::size_t>(c) >> shift;
            if (prefix + 1 < bucket_starts.size()) ++bucket_starts[prefix + 1];
        }
        for (std::size_t b = 1; b < bucket_starts.size(); ++b) bucket_starts[b] += bucket_starts[b - 1];
        for (uint16_t c : order) {
            std::size_t prefix = static_cast<std::size_t>(c) >> shift;
            next[bucket_starts[prefix]++] = c;
        }
        order.swap(next);
    }
    return t;
}

std::size_t BinaryWaveletTree::rank(uint16_t sym, std::size_t i, QueryStats* stats) const {
    if (sym >= sigma_) throw std::invalid_argument("symbol out of alphabet range");
    if (i > n_) throw std::out_of_range("rank position out of range");
    std::size_t start = 0;
    std::size_t size = n_;
    for (unsigned level = 0; level < planes_.size(); ++level) {
        const RsBitVector& p = planes_[level];
        if (stats != nullptr) ++stats->plane_visits;
        std::size_t before = p.rank1(start);
        std::size_t position = p.rank1(start + i) - before;
        std::size_t in = p.rank1(start + size) - before;
        if ((sym >> (planes_.size() - 1 - level)) & 1u) {
            start = start + (size - in);
            size = in;
            i = position;
        } else {
            size = size - in;
            i = i - position;
        }
    }
    return i;
}

} // namespace qwt
