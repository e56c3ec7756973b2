#pragma once

#include <cstdint>

namespace qwt {

// One 128-bit counter group: a 44-bit absolute superblock counter plus
// seven 12-bit block counters relative to the superblock. The first block
// of each superblock has an implicit zero counter and is not stored.
// Field j (1..7) sits at bit offset 44 + 12*(j-1).
struct CounterGroup {
    uint64_t lo = 0;
    uint64_t hi = 0;

    static constexpr uint64_t kSuperMask = (uint64_t(1) << 44) - 1;
    static constexpr unsigned kBlockBits = 12;
    static constexpr uint64_t kBlockMask = (uint64_t(1) << kBlockBits) - 1;

    uint64_t super() const { return lo & kSuperMask; }

    uint32_t block(unsigned j) const {
        if (j == 0) return 0;
        unsigned off = 44 + kBlockBits * (j - 1);
        uint64_t v;
        if (off + kBlockBits <= 64) {
            v = lo >> off;
        } else if (off >= 64) {
            v = hi >> (off - 64);
        } else {
            v = (lo >> off) | (hi << (64 - off));
        }
        return static_cast<uint32_t>(v & kBlockMask);
    }

    void set_super(uint64_t v) { lo = (lo & ~kSuperMask) | (v & kSuperMask); }

    void set_block(unsigned j, uint32_t v) {
        unsigned off = 44 + kBlockBits * (j - 1);
        uint64_t val = v & kBlockMask;
        if (off + kBlockBits <= 64) {
            lo = (lo & ~(kBlockMask << off)) | (val << off);
        } else if (off >= 64) {
            unsigned o = off - 64;
            hi = (hi & ~(kBlockMask << o)) | (val << o);
        } else {
            unsigned lo_bits = 64 - off;
            lo = (lo & ~(kBlockMask << off)) | (val << off);
            uint64_t hi_mask = kBlockMask >> lo_bits;
            hi = (hi & ~hi_mask) | (val >> lo_bits);
        }
    }
};

static_assert(sizeof(CounterGroup) == 16);

} // namespace qwt
