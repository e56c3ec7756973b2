#include <doctest.h>

#include "oracles.hpp"
#include "qwt/binary_wm.hpp"

using namespace qwt;

TEST_CASE("worked example: planes and zero counts") {
    std::vector<uint16_t> text = test::example_text();
    BinaryWaveletMatrix m = BinaryWaveletMatrix::build(text, 8);
    CHECK(m.levels() == 3);
    REQUIRE(m.zeros_per_level().size() == 3);
    CHECK(m.zeros_per_level()[0] == 9);
    CHECK(m.zeros_per_level()[1] == 7);
    CHECK(m.zeros_per_level()[2] == 7);

    std::vector<bool> root = test::bits_from_string("000011010101001");
    for (std::size_t i = 0; i < root.size(); ++i) CHECK(m.plane(0).access(i) == root[i]);

    CHECK(m.rank(6, 11) == 3);   // 's' occurs at 4, 5, 9
    CHECK(m.rank(6, 0) == 0);
    CHECK(m.access(0) == 0);     // 'a'
    CHECK(m.select(1, 2) == 3);  // 'c' at 1 and 2
}

TEST_CASE("worked example: tree path agrees") {
    std::vector<uint16_t> text = test::example_text();
    BinaryWaveletTree t = BinaryWaveletTree::build(text, 8);
    CHECK(t.rank(3, 13) == 3);  // 'e' occurs at 3, 10, 12
    CHECK(t.rank(3, 0) == 0);
}

TEST_CASE("constant text over a binary alphabet") {
    std::vector<uint16_t> text(100, 1);
    BinaryWaveletMatrix m = BinaryWaveletMatrix::build(text, 2);
    CHECK(m.levels() == 1);
    CHECK(m.zeros_per_level()[0] == 0);
    CHECK(m.rank(1, 100) == 100);
    CHECK(m.rank(0, 100) == 0);
    for (std::size_t i = 0; i < 100; ++i) CHECK(m.access(i) == 1);
}

TEST_CASE("access round-trips a random text") {
    std::vector<uint16_t> text = test::random_text(1024, 256, 31337);
    BinaryWaveletMatrix m = BinaryWaveletMatrix::build(text, 256);
    for (std::size_t i = 0; i < text.size(); ++i) CHECK(m.access(i) == text[i]);
}

TEST_CASE("matrix, tree, and oracle agree on random texts") {
    SplitMix64 seeds(2024);
    for (int round = 0; round < 25; ++round) {
        uint32_t sigma = static_cast<uint32_t>(2 + seeds.below(300));
        std::size_t n = seeds.below(3000);
        std::vector<uint16_t> text = test::random_text(n, sigma, seeds.next());
        test::ScanOracle oracle(text, sigma);
        BinaryWaveletMatrix m = BinaryWaveletMatrix::build(text, sigma);
        BinaryWaveletTree t = BinaryWaveletTree::build(text, sigma);
        for (int q = 0; q < 400; ++q) {
            uint16_t sym = static_cast<uint16_t>(seeds.below(sigma));
            std::size_t i = seeds.below(n + 1);
            std::size_t expect = oracle.rank(sym, i);
            CHECK(m.rank(sym, i) == expect);
            CHECK(t.rank(sym, i) == expect);
        }
        for (uint16_t sym = 0; sym < sigma; ++sym) {
            std::size_t occ = oracle.count(sym);
            for (std::size_t j = 1; j <= occ; j += 1 + seeds.below(4)) {
                std::size_t p = m.select(sym, j);
                CHECK(p == oracle.select(sym, j));
                CHECK(m.rank(sym, p) == j);
                CHECK(m.access(p - 1) == sym);
            }
        }
    }
}

TEST_CASE("every rank visits exactly ceil(log sigma) planes") {
    for (uint32_t sigma : {2u, 3u, 5u, 17u, 64u, 257u}) {
        std::vector<uint16_t> text = test::random_text(500, sigma, sigma);
        BinaryWaveletMatrix m = BinaryWaveletMatrix::build(text, sigma);
        BinaryWaveletTree t = BinaryWaveletTree::build(text, sigma);
        unsigned expect = 0;
        while ((uint64_t(1) << expect) < sigma) ++expect;
        QueryStats sm, st;
        m.rank(static_cast<uint16_t>(sigma / 2), 250, &sm);
        t.rank(static_cast<uint16_t>(sigma / 2), 250, &st);
        CHECK(sm.plane_visits == expect);
        CHECK(st.plane_visits == expect);
    }
}

TEST_CASE("argument validation") {
    std::vector<uint16_t> text = test::random_text(64, 4, 1);
    BinaryWaveletMatrix m = BinaryWaveletMatrix::build(text, 4);
    CHECK_THROWS_AS(m.rank(4, 0), std::invalid_argument);
    CHECK_THROWS_AS(m.rank(0, 65), std::out_of_range);
    CHECK_THROWS_AS(m.access(64), std::out_of_range);
    CHECK_THROWS_AS(m.select(0, 0), std::out_of_range);
    CHECK_THROWS_AS(BinaryWaveletMatrix::build(text, 1), std::invalid_argument);
    std::vector<uint16_t> bad = {0, 5};
    CHECK_THROWS_AS(BinaryWaveletMatrix::build(bad, 4), std::invalid_argument);
}
