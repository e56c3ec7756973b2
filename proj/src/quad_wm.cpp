#include "qwt/quad_wm.hpp"

#include <stdexcept>

#include "qwt/common.hpp"
#include "qwt/predictor.hpp"
#include "qwt/serialize.hpp"

namespace qwt {

QuadWaveletMatrix::QuadWaveletMatrix() = default;
QuadWaveletMatrix::~QuadWaveletMatrix() = default;
QuadWaveletMatrix::QuadWaveletMatrix(QuadWaveletMatrix&&) noexcept = default;
QuadWaveletMatrix& QuadWaveletMatrix::operator=(QuadWaveletMatrix&&) noexcept = default;

unsigned QuadWaveletMatrix::quad_at_level(uint16_t sym, unsigned k) const {
    // codes are consumed two MSBs at a time; on odd widths the leftover
    // least significant bit goes to the tail plane
    unsigned shift = bit_width_ - 2 * (k + 1);
    return (static_cast<unsigned>(sym) >> shift) & 3u;
}

QuadWaveletMatrix QuadWaveletMatrix::build(std::span<const uint16_t> text, uint32_t sigma,
                                           Geometry g) {
    if (sigma < 2) throw std::invalid_argument("alphabet size must be at least 2");
    if (sigma > (uint32_t(1) << 16)) throw std::invalid_argument("alphabet size above 2^16 unsupported");
    for (uint16_t c : text) {
        if (c >= sigma) throw std::invalid_argument("symbol out of alphabet range");
    }

    QuadWaveletMatrix m;
    m.n_ = text.size();
    m.sigma_ = sigma;
    m.bit_width_ = std::max(1u, ceil_log2(sigma));
    m.geometry_ = g;
    unsigned n_quad_levels = m.bit_width_ / 2;
    bool tail = (m.bit_width_ & 1u) != 0;

    std::vector<uint16_t> order(text.begin(), text.end());
    std::vector<uint16_t> next(order.size());
    std::vector<uint8_t> quads(order.size());

    for (unsigned k = 0; k < n_quad_levels; ++k) {
        for (std::size_t i = 0; i < order.size(); ++i)
            quads[i] = static_cast<uint8_t>(m.quad_at_level(order[i], k));
        m.qplanes_.push_back(RsQuadVector::build(quads, g));

        const RsQuadVector& plane = m.qplanes_.back();
        std::array<std::size_t, 4> offs;
        std::size_t acc = 0;
        for (unsigned q : kLevelOrder) {
            offs[q] = acc;
            acc += plane.count(q);
        }
        m.offsets_.push_back(offs);

        std::array<std::size_t, 4> cursor = offs;
        for (std::size_t i = 0; i < order.size(); ++i) next[cursor[quads[i]]++] = order[i];
        order.swap(next);
    }

    if (tail) {
        std::vector<bool> bits(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) bits[i] = order[i] & 1u;
        m.tail_.emplace(RsBitVector::build(bits));
    }
    return m;
}

std::size_t QuadWaveletMatrix::rank(uint16_t sym, std::size_t i, QueryStats* stats) const {
    if (sym >= sigma_) throw std::invalid_argument("symbol out of alphabet range");
    if (i > n_) throw std::out_of_range("rank position out of range");
    std::size_t lo = 0;
    std::size_t hi = i;
    for (unsigned k = 0; k < qplanes_.size(); ++k) {
        if (stats != nullptr) ++stats->plane_visits;
        unsigned q = quad_at_level(sym, k);
        std::size_t off = offsets_[k][q];
        lo = qplanes_[k].rank(q, lo) + off;
        hi = qplanes_[k].rank(q, hi) + off;
    }
    if (tail_) {
        if (stats != nullptr) ++stats->plane_visits;
        if (tail_bit(sym)) {
            std::size_t z = tail_->zeros();
            lo = z + tail_->rank1(lo);
            hi = z + tail_->rank1(hi);
        } else {
            lo = tail_->rank0(lo);
            hi = tail_->rank0(hi);
        }
    }
    return hi - lo;
}

QuadWaveletMatrix::RankChain QuadWaveletMatrix::rank_chain(uint16_t sym, std::size_t i) const {
    if (sym >= sigma_) throw std::invalid_argument("symbol out of alphabet range");
    if (i > n_) throw std::out_of_range("rank position out of range");
    RankChain chain;
    std::size_t lo = 0;
    std::size_t hi = i;
    for (unsigned k = 0; k < qplanes_.size(); ++k) {
        unsigned q = quad_at_level(sym, k);
        std::size_t off = offsets_[k][q];
        lo = qplanes_[k].rank(q, lo) + off;
        hi = qplanes_[k].rank(q, hi) + off;
        chain.lo.push_back(lo);
        chain.hi.push_back(hi);
    }
    if (tail_) {
        if (tail_bit(sym)) {
            std::size_t z = tail_->zeros();
            lo = z + tail_->rank1(lo);
            hi = z + tail_->rank1(hi);
        } else {
            lo = tail_->rank0(lo);
            hi = tail_->rank0(hi);
        }
        chain.lo.push_back(lo);
        chain.hi.push_back(hi);
    }
    return chain;
}

uint16_t QuadWaveletMatrix::access(std::size_t i) const {
    if (i >= n_) throw std::out_of_range("access position out of range");
    unsigned sym = 0;
    for (unsigned k = 0; k < qplanes_.size(); ++k) {
        unsigned q = qplanes_[k].access(i);
        sym = (sym << 2) | q;
        i = qplanes_[k].rank(q, i) + offsets_[k][q];
    }
    if (tail_) {
        bool bit = tail_->access(i);
        sym = (sym << 1) | static_cast<unsigned>(bit);
    }
    return static_cast<uint16_t>(sym);
}

std::size_t QuadWaveletMatrix::select(uint16_t sym, std::size_t j) const {
    if (sym >= sigma_) throw std::invalid_argument("symbol out of alphabet range");
    std::size_t occ = rank(sym, n_);
    if (j == 0 || j > occ) throw std::out_of_range("select occurrence out of range");

    std::size_t lo = 0;
    for (unsigned k = 0; k < qplanes_.size(); ++k) {
        unsigned q = quad_at_level(sym, k);
        lo = qplanes_[k].rank(q, lo) + offsets_[k][q];
    }
    if (tail_) {
        lo = tail_bit(sym) ? tail_->zeros() + tail_->rank1(lo) : tail_->rank0(lo);
    }

    std::size_t pos = lo + j - 1;
    if (tail_) {
        if (tail_bit(sym))
            pos = tail_->select1(pos - tail_->zeros() + 1) - 1;
        else
            pos = tail_->select0(pos + 1) - 1;
    }
    for (unsigned k = static_cast<unsigned>(qplanes_.size()); k-- > 0;) {
        unsigned q = quad_at_level(sym, k);
        pos = qplanes_[k].select(q, pos - offsets_[k][q] + 1) - 1;
    }
    return pos + 1;
}

std::array<std::size_t, 4> QuadWaveletMatrix::cumulative_level_offsets(unsigned k) const {
    std::array<std::size_t, 4> cum;
    for (unsigned idx = 0; idx < 4; ++idx) {
        unsigned q = kLevelOrder[idx];
        cum[idx] = offsets_[k][q] + qplanes_[k].count(q);
    }
    return cum;
}

void QuadWaveletMatrix::attach_predictor(std::unique_ptr<WaveletPredictor> p) {
    predictor_ = std::move(p);
}

std::size_t QuadWaveletMatrix::rank_prefetch(uint16_t sym, std::size_t i) const {
    if (predictor_ != nullptr && sym < sigma_ && i <= n_) predictor_->issue_hints(*this, sym, i);
    return rank(sym, i);
}

SpaceReport QuadWaveletMatrix::space_report() const {
    SpaceReport total;
    for (const RsQuadVector& p : qplanes_) {
        SpaceReport r = p.space_report();
        total.data_bits += r.data_bits;
        total.counter_bits += r.counter_bits;
        total.select_sample_bits += r.select_sample_bits;
    }
    if (tail_) {
        total.data_bits += tail_->size();
        total.counter_bits += tail_->directory_bits();
    }
    return total;
}

void QuadWaveletMatrix::save(std::ostream& os) const {
    io::put_u8(os, static_cast<uint8_t>(qplanes_.size()));
    for (const RsQuadVector& p : qplanes_) p.save(os);
    io::put_u8(os, tail_ ? 1 : 0);
    if (tail_) tail_->save(os);
    for (const std::array<std::size_t, 4>& offs : offsets_) {
        for (std::size_t v : offs) io::put_u64(os, v);
    }
}

QuadWaveletMatrix QuadWaveletMatrix::load(std::istream& is, uint32_t sigma, std::size_t n,
                                          unsigned bit_width, Geometry g) {
    QuadWaveletMatrix m;
    m.sigma_ = sigma;
    m.n_ = n;
    m.bit_width_ = bit_width;
    m.geometry_ = g;
    unsigned n_levels = io::get_u8(is);
    if (n_levels != bit_width / 2) throw IoError("level count does not match code width");
    for (unsigned k = 0; k < n_levels; ++k) {
        m.qplanes_.push_back(RsQuadVector::load(is));
        if (m.qplanes_.back().size() != n) throw IoError("plane length mismatch");
    }
    bool tail = io::get_u8(is) != 0;
    if (tail != ((bit_width & 1u) != 0)) throw IoError("tail plane flag does not match code width");
    if (tail) {
        m.tail_.emplace(RsBitVector::load(is));
        if (m.tail_->size() != n) throw IoError("tail plane length mismatch");
    }
    for (unsigned k = 0; k < n_levels; ++k) {
        std::array<std::size_t, 4> offs;
        for (std::size_t& v : offs) v = io::get_u64(is);
        m.offsets_.push_back(offs);
    }
    return m;
}

} // namespace qwt
