#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>

namespace qwt::kernels {

// Quad payload packing: 32 two-bit lanes per 64-bit word, lane i occupies
// bits [2i, 2i+2). A lane equals symbol s iff (word ^ pattern(s)) has both
// lane bits clear, so occurrences are counted with an xor, one shift-or to
// collapse each lane into its low bit, a mask, and a popcount.

inline constexpr uint64_t kLaneLowBits = 0x5555555555555555ULL;

inline uint64_t quad_pattern(unsigned sym) {
    return kLaneLowBits * (sym & 1u) | (kLaneLowBits << 1) * ((sym >> 1) & 1u);
}

// Lanes equal to sym among the first n_lanes of one word (n_lanes <= 32).
inline std::size_t quad_count_word_prefix(uint64_t word, unsigned sym, unsigned n_lanes) {
    if (n_lanes == 0) return 0;
    uint64_t x = word ^ quad_pattern(sym);
    uint64_t diff = (x | (x >> 1)) & kLaneLowBits;
    uint64_t mask = n_lanes >= 32 ? ~uint64_t(0) : (uint64_t(1) << (2 * n_lanes)) - 1;
    return n_lanes - std::popcount(diff & mask);
}

// Lane index of the nth (1-based) occurrence of sym in one word; 32 if the
// word holds fewer than nth occurrences.
inline unsigned quad_nth_in_word(uint64_t word, unsigned sym, std::size_t nth) {
    uint64_t x = word ^ quad_pattern(sym);
    uint64_t eq = ~(x | (x >> 1)) & kLaneLowBits; // low lane bit set iff lane == sym
    while (eq != 0) {
        if (--nth == 0) return static_cast<unsigned>(std::countr_zero(eq)) / 2;
        eq &= eq - 1;
    }
    return 32;
}

inline std::size_t bit_count_word_prefix(uint64_t word, unsigned n_bits) {
    if (n_bits == 0) return 0;
    uint64_t mask = n_bits >= 64 ? ~uint64_t(0) : (uint64_t(1) << n_bits) - 1;
    return std::popcount(word & mask);
}

inline unsigned bit_nth_in_word(uint64_t word, std::size_t nth) {
    while (word != 0) {
        if (--nth == 0) return static_cast<unsigned>(std::countr_zero(word));
        word &= word - 1;
    }
    return 64;
}

// Scalar reference kernels.
std::size_t quad_count_scalar(const uint64_t* words, std::size_t n_words, unsigned sym);
std::size_t bit_count_scalar(const uint64_t* words, std::size_t n_words);

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define QWT_HAVE_AVX2_KERNELS 1
std::size_t quad_count_avx2(const uint64_t* words, std::size_t n_words, unsigned sym);
std::size_t bit_count_avx2(const uint64_t* words, std::size_t n_words);
#endif

// Dispatched entry points; the implementation is picked once at startup
// from CPU features and can be pinned to scalar with QWT_FORCE_SCALAR=1
// or force_scalar(true).
std::size_t quad_count(const uint64_t* words, std::size_t n_words, unsigned sym);
std::size_t bit_count(const uint64_t* words, std::size_t n_words);

bool simd_active();
void force_scalar(bool on);

} // namespace qwt::kernels
