#include "qwt/fm_index.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qwt {

FmCountIndex FmCountIndex::build(std::span<const uint8_t> text, Geometry g) {
    if (text.empty()) throw std::invalid_argument("cannot index empty text");
    if (text.size() > kMaxInputBytes)
        throw std::invalid_argument("input exceeds the 64 MiB suffix-sort cap");

    FmCountIndex ix;
    ix.byte_code_.fill(-1);
    std::array<uint64_t, 256> hist{};
    for (uint8_t b : text) ++hist[b];
    uint16_t next_code = 1; // 0 is the sentinel
    for (unsigned b = 0; b < 256; ++b) {
        if (hist[b] > 0) ix.byte_code_[b] = static_cast<int16_t>(next_code++);
    }
    uint32_t sigma = next_code;

    const std::size_t n = text.size();
    std::vector<uint16_t> coded(n + 1);
    for (std::size_t i = 0; i < n; ++i) coded[i] = static_cast<uint16_t>(ix.byte_code_[text[i]]);
    coded[n] = 0;

    // naive suffix sort; the sentinel terminates every comparison
    std::vector<uint32_t> sa(n + 1);
    std::iota(sa.begin(), sa.end(), 0u);
    std::sort(sa.begin(), sa.end(), [&](uint32_t a, uint32_t b) {
        while (coded[a] == coded[b]) { ++a; ++b; }
        return coded[a] < coded[b];
    });

    std::vector<uint16_t> bwt(n + 1);
    for (std::size_t i = 0; i <= n; ++i) bwt[i] = coded[sa[i] == 0 ? n : sa[i] - 1];

    ix.wm_ = QuadWaveletMatrix::build(bwt, std::max<uint32_t>(2, sigma), g);

    ix.prefix_.assign(sigma + 1, 0);
    std::array<uint64_t, 257> counts{};
    counts[0] = 1; // sentinel
    for (unsigned b = 0; b < 256; ++b) {
        if (ix.byte_code_[b] >= 0) counts[ix.byte_code_[b]] = hist[b];
    }
    uint64_t acc = 0;
    for (uint32_t c = 0; c < sigma; ++c) {
        ix.prefix_[c] = acc;
        acc += counts[c];
    }
    ix.prefix_[sigma] = acc;
    return ix;
}

FmCountIndex FmCountIndex::from_parts(QuadWaveletMatrix wm, std::vector<uint64_t> prefix,
                                      std::array<int16_t, 256> byte_code) {
    FmCountIndex ix;
    ix.wm_ = std::move(wm);
    ix.prefix_ = std::move(prefix);
    ix.byte_code_ = byte_code;
    return ix;
}

FmCountIndex::Interval FmCountIndex::backward_search(std::span<const uint8_t> pattern) const {
    if (pattern.empty()) throw std::invalid_argument("pattern must be nonempty");
    const std::size_t m = wm_.size(); // BWT length, rows are 1..m
    Interval iv{1, m};
    for (std::size_t p = pattern.size(); p-- > 0;) {
        int16_t code = byte_code_[pattern[p]];
        if (code < 0) return Interval{1, 0};
        uint16_t c = static_cast<uint16_t>(code);
        // the loop runs on 1-based closed intervals; exclusive rank at a
        // 0-based position asks for the count within the first (first-1)
        // rows, which is exactly rank(c, first-1) here
        iv.first = prefix_[c] + wm_.rank(c, iv.first - 1) + 1;
        iv.last = prefix_[c] + wm_.rank(c, iv.last);
        if (iv.empty()) return Interval{1, 0};
    }
    return iv;
}

std::size_t FmCountIndex::count(std::span<const uint8_t> pattern) const {
    return backward_search(pattern).count();
}

} // namespace qwt
