#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qwt/quad_wm.hpp"

namespace qwt {

// Pattern counting over the Burrows-Wheeler transform: a 4-ary wavelet
// matrix over the BWT plus the exclusive prefix sum of the symbol
// histogram. A sentinel smaller than every input byte is appended
// internally and mapped to code 0; input bytes are shifted up by one
// dense code.
class FmCountIndex {
public:
    static constexpr std::size_t kMaxInputBytes = std::size_t(64) << 20;

    FmCountIndex() = default;

    static FmCountIndex build(std::span<const uint8_t> text,
                              Geometry g = Geometry::sb2048_b256);

    std::size_t bwt_size() const { return wm_.size(); }
    std::size_t text_size() const { return wm_.size() - 1; }

    // matching half-open row range mapped to the 1-based closed interval
    // convention of the search loop
    struct Interval {
        std::size_t first = 1;
        std::size_t last = 0;
        std::size_t count() const { return last + 1 >= first ? last - first + 1 : 0; }
        bool empty() const { return last < first; }
    };

    Interval backward_search(std::span<const uint8_t> pattern) const;
    std::size_t count(std::span<const uint8_t> pattern) const;

    const QuadWaveletMatrix& wm() const { return wm_; }
    const std::vector<uint64_t>& prefix_sums() const { return prefix_; }

    // components for index files: matrix plus the appended prefix table
    static FmCountIndex from_parts(QuadWaveletMatrix wm, std::vector<uint64_t> prefix,
                                   std::array<int16_t, 256> byte_code);
    const std::array<int16_t, 256>& byte_codes() const { return byte_code_; }
    QuadWaveletMatrix release_wm() && { return std::move(wm_); }

private:
    QuadWaveletMatrix wm_;
    std::vector<uint64_t> prefix_;          // exclusive histogram prefix sums, C
    std::array<int16_t, 256> byte_code_{};  // byte -> dense code, -1 if absent
};

} // namespace qwt
