#include "qwt/kernels.hpp"

#include <atomic>
#include <bit>
#include <cstdlib>

#if defined(QWT_HAVE_AVX2_KERNELS)
#include <immintrin.h>
#endif

namespace qwt::kernels {

std::size_t quad_count_scalar(const uint64_t* words, std::size_t n_words, unsigned sym) {
    uint64_t pat = quad_pattern(sym);
    std::size_t mismatched = 0;
    for (std::size_t w = 0; w < n_words; ++w) {
        uint64_t x = words[w] ^ pat;
        mismatched += std::popcount((x | (x >> 1)) & kLaneLowBits);
    }
    return n_words * 32 - mismatched;
}

std::size_t bit_count_scalar(const uint64_t* words, std::size_t n_words) {
    std::size_t c = 0;
    for (std::size_t w = 0; w < n_words; ++w) c += std::popcount(words[w]);
    return c;
}

#if defined(QWT_HAVE_AVX2_KERNELS)

namespace {

// Byte-wise popcount of a 256-bit register via a nibble lookup table,
// accumulated with psadbw into four 64-bit lanes.
__attribute__((target("avx2"))) inline __m256i popcount_bytes(__m256i v) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_nibble = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low_nibble);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_nibble);
    return _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
}

__attribute__((target("avx2"))) inline uint64_t hsum_epi64(__m256i v) {
    __m128i lo = _mm256_castsi256_si128(v);
    __m128i hi = _mm256_extracti128_si256(v, 1);
    __m128i s = _mm_add_epi64(lo, hi);
    return static_cast<uint64_t>(_mm_cvtsi128_si64(s)) +
           static_cast<uint64_t>(_mm_extract_epi64(s, 1));
}

} // namespace

__attribute__((target("avx2"))) std::size_t quad_count_avx2(const uint64_t* words,
                                                            std::size_t n_words,
                                                            unsigned sym) {
    const __m256i pat = _mm256_set1_epi64x(static_cast<int64_t>(quad_pattern(sym)));
    const __m256i lanes = _mm256_set1_epi64x(static_cast<int64_t>(kLaneLowBits));
    __m256i acc = _mm256_setzero_si256();
    std::size_t w = 0;
    for (; w + 4 <= n_words; w += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + w));
        __m256i x = _mm256_xor_si256(v, pat);
        __m256i diff = _mm256_and_si256(_mm256_or_si256(x, _mm256_srli_epi64(x, 1)), lanes);
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(diff), _mm256_setzero_si256()));
    }
    std::size_t mismatched = hsum_epi64(acc);
    std::size_t matched = (w * 32) - mismatched;
    if (w < n_words) matched += quad_count_scalar(words + w, n_words - w, sym);
    return matched;
}

__attribute__((target("avx2"))) std::size_t bit_count_avx2(const uint64_t* words,
                                                           std::size_t n_words) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t w = 0;
    for (; w + 4 <= n_words; w += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + w));
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(v), _mm256_setzero_si256()));
    }
    std::size_t c = hsum_epi64(acc);
    if (w < n_words) c += bit_count_scalar(words + w, n_words - w);
    return c;
}

#endif // QWT_HAVE_AVX2_KERNELS

namespace {

using QuadCountFn = std::size_t (*)(const uint64_t*, std::size_t, unsigned);
using BitCountFn = std::size_t (*)(const uint64_t*, std::size_t);

struct Dispatch {
    QuadCountFn quad = &quad_count_scalar;
    BitCountFn bit = &bit_count_scalar;
    bool simd = false;

    Dispatch() {
        const char* force = std::getenv("QWT_FORCE_SCALAR");
        if (force != nullptr && force[0] == '1') return;
#if defined(QWT_HAVE_AVX2_KERNELS)
        if (__builtin_cpu_supports("avx2")) {
            quad = &quad_count_avx2;
            bit = &bit_count_avx2;
            simd = true;
        }
#endif
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

} // namespace

std::size_t quad_count(const uint64_t* words, std::size_t n_words, unsigned sym) {
    return dispatch().quad(words, n_words, sym);
}

std::size_t bit_count(const uint64_t* words, std::size_t n_words) {
    return dispatch().bit(words, n_words);
}

bool simd_active() { return dispatch().simd; }

void force_scalar(bool on) {
    Dispatch& d = dispatch();
    if (on) {
        d.quad = &quad_count_scalar;
        d.bit = &bit_count_scalar;
        d.simd = false;
    } else {
        d = Dispatch();
    }
}

} // namespace qwt::kernels
