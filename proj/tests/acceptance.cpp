// Acceptance suite: one pass/fail line per criterion. Exit code 0 iff all
// gating criteria pass. Criterion 8 is informational by design and never
// gates.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qwt/binary_wm.hpp"
#include "qwt/fm_index.hpp"
#include "qwt/kernels.hpp"
#include "qwt/predictor.hpp"
#include "qwt/quad_wm.hpp"
#include "qwt/quadvector.hpp"
#include "qwt/workload.hpp"

using namespace qwt;

namespace {

struct Outcome {
    int id;
    std::string name;
    bool pass;
    bool gating;
    std::string detail;
};

std::vector<Outcome> results;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename Fn>
void criterion(int id, const std::string& name, bool gating, Fn&& fn) {
    Outcome o{id, name, false, gating, ""};
    try {
        o.detail = fn();
        o.pass = true;
    } catch (const std::exception& e) {
        o.detail = e.what();
    }
    results.push_back(std::move(o));
    const Outcome& r = results.back();
    std::printf("%s %d %s%s%s%s\n", r.pass ? (r.gating ? "PASS" : "INFO") : "FAIL", r.id,
                r.name.c_str(), r.detail.empty() ? "" : " -- ", r.detail.c_str(),
                r.gating ? "" : " [non-gating]");
    std::fflush(stdout);
}

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::vector<uint16_t> example_text() {
    const std::string s = "accessandselect";
    const std::string alpha = "acdelnst";
    std::vector<uint16_t> t;
    for (char c : s) t.push_back(static_cast<uint16_t>(alpha.find(c)));
    return t;
}

std::vector<uint16_t> uniform_text(std::size_t n, uint32_t sigma, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<uint16_t> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<uint16_t>(rng.below(sigma));
    return t;
}

std::vector<uint16_t> bursty_text(std::size_t n, uint32_t sigma, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<uint16_t> t(n);
    uint16_t cur = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0 || rng.below(4) == 0) cur = static_cast<uint16_t>(rng.below(sigma));
        t[i] = cur;
    }
    return t;
}

bool plane_bits_equal(const RsBitVector& v, const std::string& bits) {
    if (v.size() != bits.size()) return false;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (v.access(i) != (bits[i] == '1')) return false;
    return true;
}

// ------------------------------------------------------------ criterion 1

std::string golden_quad_matrix() {
    auto t0 = std::chrono::steady_clock::now();
    QuadWaveletMatrix m = QuadWaveletMatrix::build(example_text(), 8);

    const std::string msb = "000011010101001";
    const std::string second = "000111001110101";
    if (m.quad_levels() != 1 || !m.has_tail()) fail("unexpected level structure");
    for (std::size_t i = 0; i < 15; ++i) {
        unsigned q = m.quad_plane(0).access(i);
        if (((q >> 1) & 1u) != static_cast<unsigned>(msb[i] - '0')) fail("first bit plane mismatch");
        if ((q & 1u) != static_cast<unsigned>(second[i] - '0')) fail("second bit plane mismatch");
    }
    std::array<std::size_t, 4> cum = m.cumulative_level_offsets(0);
    if (cum != std::array<std::size_t, 4>{5, 7, 11, 15}) fail("cumulative offsets mismatch");
    if (!plane_bits_equal(*m.tail_plane(), "011011010110001")) fail("tail plane mismatch");
    if (m.tail_plane()->zeros() != 7) fail("tail zero count mismatch");

    double dt = seconds_since(t0);
    if (dt >= 1.0) fail("exceeded the 1 s budget");
    char buf[96];
    std::snprintf(buf, sizeof buf, "planes, offsets (5,7,11,15), 7-zero tail; %.3f s", dt);
    return buf;
}

// ------------------------------------------------------------ criterion 2

std::string golden_binary_matrix() {
    BinaryWaveletMatrix m = BinaryWaveletMatrix::build(example_text(), 8);
    const std::vector<std::size_t>& z = m.zeros_per_level();
    if (z != std::vector<std::size_t>{9, 7, 7}) fail("Z mismatch");
    return "Z = [9, 7, 7]";
}

// ------------------------------------------------------------ criterion 3

std::string oracle_equivalence() {
    auto t0 = std::chrono::steady_clock::now();
    const std::array<uint32_t, 9> sigmas = {2, 3, 4, 5, 16, 17, 64, 256, 257};
    const std::size_t kPairBudget = 32768;
    SplitMix64 rng(0xACCE55);
    uint64_t queries = 0;

    for (int round = 0; round < 1000; ++round) {
        uint32_t sigma = sigmas[round % sigmas.size()];
        std::size_t n = rng.below(4097);
        std::vector<uint16_t> text = uniform_text(n, sigma, rng.next());

        std::vector<std::vector<uint32_t>> pos(sigma);
        for (std::size_t i = 0; i < n; ++i) pos[text[i]].push_back(static_cast<uint32_t>(i));
        auto oracle_rank = [&](uint16_t sym, std::size_t i) {
            return static_cast<std::size_t>(
                std::lower_bound(pos[sym].begin(), pos[sym].end(), i) - pos[sym].begin());
        };

        QuadWaveletMatrix qm = QuadWaveletMatrix::build(text, sigma);
        BinaryWaveletMatrix bm = BinaryWaveletMatrix::build(text, sigma);
        BinaryWaveletTree bt = BinaryWaveletTree::build(text, sigma);

        for (std::size_t i = 0; i < n; ++i)
            if (qm.access(i) != text[i]) fail("access mismatch");
        queries += n;

        uint64_t pairs = static_cast<uint64_t>(sigma) * (n + 1);
        if (pairs <= kPairBudget) {
            for (uint16_t sym = 0; sym < sigma; ++sym) {
                for (std::size_t i = 0; i <= n; ++i) {
                    std::size_t expect = oracle_rank(sym, i);
                    if (qm.rank(sym, i) != expect) fail("quad matrix rank mismatch");
                    if (bm.rank(sym, i) != expect) fail("binary matrix rank mismatch");
                    if (bt.rank(sym, i) != expect) fail("binary tree rank mismatch");
                }
            }
            queries += 3 * pairs;
        } else {
            for (std::size_t q = 0; q < kPairBudget; ++q) {
                uint16_t sym = static_cast<uint16_t>(rng.below(sigma));
                std::size_t i = rng.below(n + 1);
                std::size_t expect = oracle_rank(sym, i);
                if (qm.rank(sym, i) != expect) fail("quad matrix rank mismatch");
                if (bm.rank(sym, i) != expect) fail("binary matrix rank mismatch");
                if (bt.rank(sym, i) != expect) fail("binary tree rank mismatch");
            }
            queries += 3 * kPairBudget;
        }

        for (uint16_t sym = 0; sym < sigma; ++sym) {
            for (std::size_t j = 1; j <= pos[sym].size(); ++j) {
                if (qm.select(sym, j) != pos[sym][j - 1] + 1) fail("quad matrix select mismatch");
            }
        }
        queries += n;

        // quad-vector rank/select against its own scan oracle
        std::vector<uint8_t> quads(n);
        std::array<std::vector<uint32_t>, 4> qpos;
        for (std::size_t i = 0; i < n; ++i) {
            quads[i] = static_cast<uint8_t>(rng.next() & 3u);
            qpos[quads[i]].push_back(static_cast<uint32_t>(i));
        }
        Geometry g = (round & 1) != 0 ? Geometry::sb4096_b512 : Geometry::sb2048_b256;
        RsQuadVector qv = RsQuadVector::build(quads, g);
        for (std::size_t q = 0; q < 2048; ++q) {
            unsigned sym = static_cast<unsigned>(rng.next() & 3u);
            std::size_t i = rng.below(n + 1);
            std::size_t expect = static_cast<std::size_t>(
                std::lower_bound(qpos[sym].begin(), qpos[sym].end(), i) - qpos[sym].begin());
            if (qv.rank(sym, i) != expect) fail("quad vector rank mismatch");
        }
        for (unsigned sym = 0; sym < 4; ++sym)
            for (std::size_t j = 1; j <= qpos[sym].size(); ++j)
                if (qv.select(sym, j) != qpos[sym][j - 1] + 1) fail("quad vector select mismatch");
        queries += 2048 + n;
    }

    double dt = seconds_since(t0);
    if (dt >= 60.0) fail("exceeded the 60 s budget");
    char buf[128];
    std::snprintf(buf, sizeof buf, "1000 texts, %llu checks, zero mismatches; %.1f s",
                  static_cast<unsigned long long>(queries), dt);
    return buf;
}

// ------------------------------------------------------------ criterion 4

std::string space_laws() {
    const std::size_t n22 = std::size_t(1) << 22;
    SplitMix64 rng(0x5AFE);
    std::vector<uint8_t> quads(n22);
    std::array<uint64_t, 4> occ{};
    for (std::size_t i = 0; i < n22; ++i) {
        quads[i] = static_cast<uint8_t>(rng.next() & 3u);
        ++occ[quads[i]];
    }

    SpaceReport big = RsQuadVector::build(quads, Geometry::sb4096_b512).space_report();
    if (std::abs(big.counter_overhead_pct() - 6.25) > 0.05) fail("6.25% law violated");
    SpaceReport small = RsQuadVector::build(quads, Geometry::sb2048_b256).space_report();
    if (std::abs(small.counter_overhead_pct() - 12.5) > 0.05) fail("12.5% law violated");

    // select samples: one 32-bit superblock hint per 8192 occurrences per
    // symbol; the 4*32/8192 budget is an upper bound on the measured rate
    uint64_t expected_bits = 0;
    for (unsigned sym = 0; sym < 4; ++sym) expected_bits += occ[sym] / 8192 * 32;
    if (big.select_sample_bits != expected_bits) fail("select sample accounting mismatch");
    if (big.select_overhead_pct() > 1.5625) fail("select samples exceed the stated budget");

    const std::size_t n24 = std::size_t(1) << 24;
    std::vector<uint16_t> text = uniform_text(n24, 256, 7);
    QuadWaveletMatrix m = QuadWaveletMatrix::build(text, 256);
    if (m.quad_levels() != 4) fail("expected four levels at sigma 256");
    WaveletPredictor p = WaveletPredictor::build(m, 2048);
    double formula = 5.0 * 4.0 * static_cast<double>(n24) / 2048.0;
    double measured = static_cast<double>(p.space_bits());
    if (std::abs(measured - formula) / formula > 0.05) fail("predictor space off the 5ln/2048 budget");

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "counters %.4f%%/%.4f%%; select %.4f%% (<= 1.5625%%, exact law); predictor "
                  "%.0f vs %.0f bits",
                  big.counter_overhead_pct(), small.counter_overhead_pct(),
                  big.select_overhead_pct(), measured, formula);
    return buf;
}

// ------------------------------------------------------------ criterion 5

std::string predictor_bounds() {
    const std::size_t n = std::size_t(1) << 24;
    SplitMix64 rng(0xE7707);
    std::vector<uint8_t> quads(n);
    for (std::size_t i = 0; i < n; ++i) quads[i] = static_cast<uint8_t>(rng.next() & 3u);
    RsQuadVector qv = RsQuadVector::build(quads);

    for (uint64_t eps : {16u, 256u, 2048u}) {
        ApproxRankIndex p = ApproxRankIndex::with_error(qv, eps);
        for (std::size_t q = 0; q < 1000000; ++q) {
            unsigned sym = static_cast<unsigned>(rng.next() & 3u);
            std::size_t i = rng.below(n + 1);
            std::size_t exact = qv.rank(sym, i);
            std::size_t approx = p.approx_rank(sym, i);
            if (approx > exact) fail("estimate overshoots at eps " + std::to_string(eps));
            if (exact - approx >= eps) fail("estimate error reaches eps " + std::to_string(eps));
        }
    }

    // corrected chain: per-level error within eps; the ablation without
    // the correction must show the errors compounding past eps
    const uint64_t eps = 64;
    std::vector<uint16_t> text = bursty_text(std::size_t(1) << 20, 256, 0xD157);
    QuadWaveletMatrix m = QuadWaveletMatrix::build(text, 256);
    DiscriminantTable d = DiscriminantTable::build(m, eps);
    uint64_t ablation_worst = 0;
    for (std::size_t q = 0; q < 100000; ++q) {
        uint16_t sym = text[rng.below(text.size())];
        std::size_t i = rng.below(text.size() + 1);
        QuadWaveletMatrix::RankChain exact = m.rank_chain(sym, i);
        std::vector<std::size_t> corrected = d.corrected_chain(m, sym, i);
        for (unsigned k = 0; k < corrected.size(); ++k) {
            if (corrected[k] > exact.hi[k]) fail("corrected chain overshoots");
            if (exact.hi[k] - corrected[k] > eps) fail("corrected chain error above eps");
        }
        std::vector<std::size_t> plain = d.uncorrected_chain(m, sym, i);
        for (unsigned k = 1; k < plain.size(); ++k) {
            if (exact.hi[k] >= plain[k])
                ablation_worst = std::max<uint64_t>(ablation_worst, exact.hi[k] - plain[k]);
        }
    }
    if (ablation_worst <= eps) fail("uncorrected ablation never exceeded eps");

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "3M estimates within budget at eps 16/256/2048; corrected chain <= %llu "
                  "everywhere, uncorrected reached %llu",
                  static_cast<unsigned long long>(eps),
                  static_cast<unsigned long long>(ablation_worst));
    return buf;
}

// --------------------------------------------------- criteria 6 and 8

std::string prefetch_transparency(double* speed_ratio, std::string* hw) {
    const std::size_t n = std::size_t(256) << 20;
    std::vector<uint16_t> text = bursty_text(n, 256, 0xB16C0);
    QuadWaveletMatrix m = QuadWaveletMatrix::build(text, 256);
    m.attach_predictor(std::make_unique<WaveletPredictor>(WaveletPredictor::build(m)));

    QueryWorkload w = gen_queries(text, QueryKind::rank, 100000, 0xFE7C, false);
    text.clear();
    text.shrink_to_fit();

    BenchReport plain = run_bench("qwm/rank", w, 1, [&](uint64_t raw, uint16_t sym) {
        return static_cast<uint64_t>(m.rank(sym, raw % (n + 1)));
    });
    BenchReport pf = run_bench("qwm/rank+prefetch", w, 1, [&](uint64_t raw, uint16_t sym) {
        return static_cast<uint64_t>(m.rank_prefetch(sym, raw % (n + 1)));
    });
    verify_checksum(plain, pf); // throws on divergence

    // a second, longer pass for the informational latency comparison
    QueryWorkload w2 = gen_queries_fn(
        n, [&](uint64_t p) { return m.access(p); }, [](uint16_t) { return uint64_t(1); },
        QueryKind::rank, 1000000, 0xFE7D, false);
    BenchReport plain2 = run_bench("qwm/rank", w2, 2, [&](uint64_t raw, uint16_t sym) {
        return static_cast<uint64_t>(m.rank(sym, raw % (n + 1)));
    });
    BenchReport pf2 = run_bench("qwm/rank+prefetch", w2, 2, [&](uint64_t raw, uint16_t sym) {
        return static_cast<uint64_t>(m.rank_prefetch(sym, raw % (n + 1)));
    });
    verify_checksum(plain2, pf2);
    *speed_ratio = plain2.ns_per_query / pf2.ns_per_query;
    *hw = plain2.hardware;

    char buf[128];
    std::snprintf(buf, sizeof buf, "100000 queries on a 256 MiB corpus, checksums %016llx equal",
                  static_cast<unsigned long long>(plain.checksum));
    return buf;
}

// ------------------------------------------------------------ criterion 7

std::string backward_search() {
    auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = std::size_t(1) << 20;
    SplitMix64 rng(0xB52);
    static const char alpha[] = "aaaabbccddeefghij klmnop";
    std::string text(n, ' ');
    for (std::size_t i = 0; i < n; ++i) text[i] = alpha[rng.below(sizeof(alpha) - 1)];

    FmCountIndex ix = FmCountIndex::build(std::vector<uint8_t>(text.begin(), text.end()));
    for (int q = 0; q < 100; ++q) {
        std::size_t len = 1 + rng.below(32);
        std::string pat;
        if (q % 2 == 0) {
            std::size_t at = rng.below(text.size() - len);
            pat = text.substr(at, len);
        } else {
            for (std::size_t c = 0; c < len; ++c) pat.push_back(alpha[rng.below(sizeof(alpha) - 1)]);
        }
        std::size_t naive = 0;
        for (std::size_t i = 0; i + pat.size() <= text.size(); ++i)
            if (text.compare(i, pat.size(), pat) == 0) ++naive;
        std::vector<uint8_t> p(pat.begin(), pat.end());
        if (ix.count(p) != naive) fail("count mismatch on pattern of length " + std::to_string(len));
    }
    double dt = seconds_since(t0);
    if (dt >= 30.0) fail("exceeded the 30 s budget");
    char buf[96];
    std::snprintf(buf, sizeof buf, "100 patterns over 1 MiB, all counts exact; %.1f s", dt);
    return buf;
}

} // namespace

int main() {
    std::printf("acceptance suite (kernels: %s)\n", kernels::simd_active() ? "avx2" : "scalar");

    criterion(1, "golden 4-ary wavelet matrix reproduction", true, golden_quad_matrix);
    criterion(2, "golden binary wavelet matrix zero counts", true, golden_binary_matrix);
    criterion(3, "oracle equivalence on 1000 random texts", true, oracle_equivalence);
    criterion(4, "space laws (counters, select samples, predictor)", true, space_laws);
    criterion(5, "additive approximation error bounds", true, predictor_bounds);

    double ratio = 0.0;
    std::string hw;
    criterion(6, "prefetch transparency on a 256 MiB corpus", true,
              [&] { return prefetch_transparency(&ratio, &hw); });
    criterion(7, "backward search vs naive counting", true, backward_search);
    criterion(8, "prefetch on/off latency comparison", false, [&]() -> std::string {
        if (ratio == 0.0) fail("skipped: transparency run did not complete");
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "plain/prefetch latency ratio %.2f on a 256 MiB corpus [hardware: %s]; "
                      "memory-bound behaviour needs >= 1 GiB inputs and a real LLC, see README",
                      ratio, hw.c_str());
        return buf;
    });

    int failed = 0;
    for (const Outcome& o : results)
        if (o.gating && !o.pass) ++failed;
    int gating_total = 0;
    for (const Outcome& o : results)
        if (o.gating) ++gating_total;
    std::printf("%d/%d gating criteria passed\n", gating_total - failed, gating_total);
    return failed == 0 ? 0 : 1;
}
