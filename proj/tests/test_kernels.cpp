#include <doctest.h>

#include "oracles.hpp"
#include "qwt/kernels.hpp"

using namespace qwt;

namespace {

std::size_t count_byhand(const std::vector<uint8_t>& quads, std::size_t limit, unsigned sym) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < limit; ++i)
        if (quads[i] == sym) ++c;
    return c;
}

std::vector<uint64_t> pack(const std::vector<uint8_t>& quads) {
    std::vector<uint64_t> words((quads.size() + 31) / 32, 0);
    for (std::size_t i = 0; i < quads.size(); ++i)
        words[i >> 5] |= uint64_t(quads[i]) << (2 * (i & 31));
    return words;
}

} // namespace

TEST_CASE("quad pattern replicates the symbol across lanes") {
    CHECK(kernels::quad_pattern(0) == 0);
    CHECK(kernels::quad_pattern(1) == 0x5555555555555555ULL);
    CHECK(kernels::quad_pattern(2) == 0xaaaaaaaaaaaaaaaaULL);
    CHECK(kernels::quad_pattern(3) == ~uint64_t(0));
}

TEST_CASE("word-prefix counts match a plain loop") {
    std::vector<uint8_t> quads = test::random_quads(32, 7);
    uint64_t word = pack(quads)[0];
    for (unsigned sym = 0; sym < 4; ++sym) {
        for (unsigned k = 0; k <= 32; ++k) {
            CHECK(kernels::quad_count_word_prefix(word, sym, k) == count_byhand(quads, k, sym));
        }
    }
}

TEST_CASE("nth-occurrence search within a word") {
    std::vector<uint8_t> quads = test::random_quads(32, 11);
    uint64_t word = pack(quads)[0];
    for (unsigned sym = 0; sym < 4; ++sym) {
        std::size_t seen = 0;
        for (unsigned lane = 0; lane < 32; ++lane) {
            if (quads[lane] == sym) {
                ++seen;
                CHECK(kernels::quad_nth_in_word(word, sym, seen) == lane);
            }
        }
        CHECK(kernels::quad_nth_in_word(word, sym, seen + 1) == 32);
    }
}

TEST_CASE("scalar and dispatched quad counts agree on random buffers") {
    for (std::size_t n_words : {0, 1, 3, 4, 5, 16, 33, 127, 1024}) {
        std::vector<uint8_t> quads = test::random_quads(n_words * 32, 1000 + n_words);
        std::vector<uint64_t> words = pack(quads);
        for (unsigned sym = 0; sym < 4; ++sym) {
            std::size_t expect = count_byhand(quads, quads.size(), sym);
            CHECK(kernels::quad_count_scalar(words.data(), n_words, sym) == expect);
            CHECK(kernels::quad_count(words.data(), n_words, sym) == expect);
#if defined(QWT_HAVE_AVX2_KERNELS)
            if (kernels::simd_active())
                CHECK(kernels::quad_count_avx2(words.data(), n_words, sym) == expect);
#endif
        }
    }
}

TEST_CASE("scalar and dispatched popcounts agree on random buffers") {
    SplitMix64 rng(99);
    for (std::size_t n_words : {0, 1, 2, 4, 7, 64, 255}) {
        std::vector<uint64_t> words(n_words);
        for (uint64_t& w : words) w = rng.next();
        std::size_t expect = 0;
        for (uint64_t w : words) expect += std::popcount(w);
        CHECK(kernels::bit_count_scalar(words.data(), n_words) == expect);
        CHECK(kernels::bit_count(words.data(), n_words) == expect);
#if defined(QWT_HAVE_AVX2_KERNELS)
        if (kernels::simd_active())
            CHECK(kernels::bit_count_avx2(words.data(), n_words) == expect);
#endif
    }
}

TEST_CASE("forcing the scalar path keeps results identical") {
    std::vector<uint8_t> quads = test::random_quads(4096, 5);
    std::vector<uint64_t> words = pack(quads);
    std::vector<std::size_t> with_simd;
    for (unsigned sym = 0; sym < 4; ++sym)
        with_simd.push_back(kernels::quad_count(words.data(), words.size(), sym));
    kernels::force_scalar(true);
    CHECK_FALSE(kernels::simd_active());
    for (unsigned sym = 0; sym < 4; ++sym)
        CHECK(kernels::quad_count(words.data(), words.size(), sym) == with_simd[sym]);
    kernels::force_scalar(false);
}
