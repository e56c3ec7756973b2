#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "qwt/binary_wm.hpp"
#include "qwt/fm_index.hpp"
#include "qwt/index_io.hpp"
#include "qwt/kernels.hpp"
#include "qwt/predictor.hpp"
#include "qwt/quad_wm.hpp"
#include "qwt/serialize.hpp"
#include "qwt/workload.hpp"

using nlohmann::json;
using namespace qwt;

namespace {

Geometry parse_geometry(const std::string& s) {
    if (s == "512") return Geometry::sb4096_b512;
    if (s == "256") return Geometry::sb2048_b256;
    throw CLI::ValidationError("--geometry", "expected 256 or 512");
}

uint16_t parse_symbol(const std::string& s) {
    if (s.size() == 1 && (s[0] < '0' || s[0] > '9'))
        return static_cast<uint16_t>(static_cast<unsigned char>(s[0]));
    int v = std::stoi(s);
    if (v < 0 || v > 0xffff) throw std::invalid_argument("symbol value out of range");
    return static_cast<uint16_t>(v);
}

std::vector<uint8_t> read_file_prefix(const std::string& path, std::size_t limit) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "'");
    std::vector<uint8_t> bytes;
    std::vector<char> buf(1 << 20);
    while (limit == 0 || bytes.size() < limit) {
        std::size_t want = buf.size();
        if (limit != 0) want = std::min(want, limit - bytes.size());
        is.read(buf.data(), static_cast<std::streamsize>(want));
        std::size_t got = static_cast<std::size_t>(is.gcount());
        if (got == 0) break;
        bytes.insert(bytes.end(), buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(got));
    }
    if (is.bad()) throw IoError("read from '" + path + "' failed");
    return bytes;
}

std::vector<uint16_t> decode_table_from_codes(const std::array<int16_t, 256>& byte_code) {
    uint16_t max_code = 0;
    for (int16_t c : byte_code) max_code = std::max<uint16_t>(max_code, c < 0 ? 0 : c);
    std::vector<uint16_t> decode(max_code + 1, 0);
    for (unsigned b = 0; b < 256; ++b)
        if (byte_code[b] >= 0) decode[byte_code[b]] = static_cast<uint16_t>(b);
    return decode;
}

int cmd_build(const std::string& input, const std::string& output, const std::string& geometry,
              bool prefetch, uint64_t epsilon, uint64_t limit, bool fm) {
    Geometry g = parse_geometry(geometry);
    IndexFile ix;
    if (fm) {
        std::vector<uint8_t> bytes = read_file_prefix(input, limit);
        if (bytes.empty()) throw std::invalid_argument("input file is empty");
        FmCountIndex index = FmCountIndex::build(bytes, g);
        ix.decode = decode_table_from_codes(index.byte_codes());
        ix.fm_prefix = index.prefix_sums();
        ix.wm = std::move(index).release_wm();
    } else {
        IngestResult in = ingest(input, limit);
        ix.decode = in.decode;
        ix.wm = QuadWaveletMatrix::build(in.text, std::max<uint32_t>(2, in.sigma), g);
    }
    if (prefetch)
        ix.wm.attach_predictor(
            std::make_unique<WaveletPredictor>(WaveletPredictor::build(ix.wm, epsilon)));
    save_index(output, ix);
    std::cerr << "built index over " << ix.wm.size() << " symbols (sigma " << ix.wm.sigma()
              << ", " << ix.wm.levels() << " levels)\n";
    return 0;
}

int cmd_query(const std::string& path, const std::string& kind_s, uint64_t pos,
              const std::string& sym_s) {
    IndexFile ix = load_index(path);
    QueryKind kind = query_kind_from_string(kind_s);
    if (kind == QueryKind::access) {
        uint16_t code = ix.wm.access(pos);
        std::cout << (code < ix.decode.size() ? ix.decode[code] : code) << "\n";
        return 0;
    }
    if (sym_s.empty()) throw std::invalid_argument("--sym is required for rank and select");
    uint16_t original = parse_symbol(sym_s);
    int32_t code = -1;
    for (std::size_t c = 0; c < ix.decode.size(); ++c)
        if (ix.decode[c] == original) code = static_cast<int32_t>(c);
    if (kind == QueryKind::rank) {
        std::cout << (code < 0 ? 0 : ix.wm.rank(static_cast<uint16_t>(code), pos)) << "\n";
    } else {
        if (code < 0) throw std::invalid_argument("symbol does not occur in the indexed text");
        std::cout << ix.wm.select(static_cast<uint16_t>(code), pos) << "\n";
    }
    return 0;
}

json report_to_json(const BenchReport& r) {
    return json{{"structure", r.structure},
                {"kind", r.kind},
                {"count", r.count},
                {"reps", r.reps},
                {"chained", r.chained},
                {"total_ms", r.total_ms},
                {"ns_per_query", r.ns_per_query},
                {"queries_per_s", r.queries_per_s},
                {"checksum", r.checksum},
                {"space", {{"data_bits", r.space_data_bits},
                           {"counter_bits", r.space_counter_bits},
                           {"select_sample_bits", r.space_select_bits},
                           {"predictor_bits", r.space_predictor_bits}}},
                {"hardware", r.hardware}};
}

void print_csv(const std::vector<BenchReport>& reports) {
    std::cout << "structure,kind,count,reps,chained,total_ms,ns_per_query,queries_per_s,"
                 "checksum,data_bits,counter_bits,select_sample_bits,predictor_bits,hardware\n";
    for (const BenchReport& r : reports) {
        std::cout << r.structure << ',' << r.kind << ',' << r.count << ',' << r.reps << ','
                  << (r.chained ? 1 : 0) << ',' << r.total_ms << ',' << r.ns_per_query << ','
                  << r.queries_per_s << ',' << r.checksum << ',' << r.space_data_bits << ','
                  << r.space_counter_bits << ',' << r.space_select_bits << ','
                  << r.space_predictor_bits << ",\"" << r.hardware << "\"\n";
    }
}

void fill_space(BenchReport& r, const QuadWaveletMatrix& wm) {
    SpaceReport s = wm.space_report();
    r.space_data_bits = s.data_bits;
    r.space_counter_bits = s.counter_bits;
    r.space_select_bits = s.select_sample_bits;
    r.space_predictor_bits = wm.predictor() != nullptr ? wm.predictor()->space_bits() : 0;
}

int cmd_bench(const std::string& path, const std::string& kind_s, uint64_t count, uint64_t seed,
              bool chained, unsigned reps, const std::string& format) {
    IndexFile ix = load_index(path);
    const QuadWaveletMatrix& wm = ix.wm;
    const std::size_t n = wm.size();
    QueryKind kind = query_kind_from_string(kind_s);

    std::vector<uint64_t> occ(wm.sigma(), 0);
    if (kind == QueryKind::select)
        for (uint16_t c = 0; c < wm.sigma(); ++c) occ[c] = wm.rank(c, n);

    QueryWorkload w = gen_queries_fn(
        n, [&](uint64_t p) { return wm.access(p); }, [&](uint16_t c) { return occ[c]; }, kind,
        count, seed, chained);

    std::vector<BenchReport> reports;
    switch (kind) {
        case QueryKind::access:
            reports.push_back(run_bench("qwm/access", w, reps, [&](uint64_t raw, uint16_t) {
                return static_cast<uint64_t>(wm.access(raw % n));
            }));
            break;
        case QueryKind::select:
            reports.push_back(run_bench("qwm/select", w, reps, [&](uint64_t raw, uint16_t sym) {
                return static_cast<uint64_t>(wm.select(sym, raw % occ[sym] + 1));
            }));
            break;
        case QueryKind::rank:
            reports.push_back(run_bench("qwm/rank", w, reps, [&](uint64_t raw, uint16_t sym) {
                return static_cast<uint64_t>(wm.rank(sym, raw % (n + 1)));
            }));
            if (wm.predictor() != nullptr) {
                reports.push_back(
                    run_bench("qwm/rank+prefetch", w, reps, [&](uint64_t raw, uint16_t sym) {
                        return static_cast<uint64_t>(wm.rank_prefetch(sym, raw % (n + 1)));
                    }));
                verify_checksum(reports[0], reports[1]);
            }
            break;
    }
    for (BenchReport& r : reports) fill_space(r, wm);

    if (format == "csv") {
        print_csv(reports);
    } else {
        json out = json::array();
        for (const BenchReport& r : reports) out.push_back(report_to_json(r));
        std::cout << out.dump(2) << "\n";
    }
    return 0;
}

int cmd_stats(const std::string& path) {
    IndexFile ix = load_index(path);
    SpaceReport s = ix.wm.space_report();
    json out{{"sigma", ix.wm.sigma()},
             {"n", ix.wm.size()},
             {"bit_width", ix.wm.bit_width()},
             {"levels", ix.wm.levels()},
             {"quad_levels", ix.wm.quad_levels()},
             {"tail_plane", ix.wm.has_tail()},
             {"geometry", ix.wm.geometry() == Geometry::sb4096_b512 ? "512" : "256"},
             {"pattern_counting", ix.has_fm()},
             {"space",
              {{"data_bits", s.data_bits},
               {"counter_bits", s.counter_bits},
               {"select_sample_bits", s.select_sample_bits},
               {"counter_overhead_pct", s.counter_overhead_pct()},
               {"select_overhead_pct", s.select_overhead_pct()}}},
             {"simd_kernels", kernels::simd_active() ? "avx2" : "scalar"}};
    if (ix.wm.predictor() != nullptr) {
        out["predictor"] = {{"block", ix.wm.predictor()->block_size()},
                            {"bits", ix.wm.predictor()->space_bits()}};
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_search(const std::string& path, const std::string& pattern) {
    IndexFile ix = load_index(path);
    FmCountIndex fm = std::move(ix).to_fm_index();
    std::vector<uint8_t> pat(pattern.begin(), pattern.end());
    std::cout << fm.count(pat) << "\n";
    return 0;
}

// compact oracle suites over fresh random inputs
int cmd_selftest() {
    SplitMix64 seeds(0xC0FFEE);
    auto fail = [](const std::string& what) {
        std::cerr << "selftest FAILED: " << what << "\n";
        return 1;
    };

    for (uint32_t sigma : {2u, 4u, 5u, 17u, 256u}) {
        std::size_t n = 1 + seeds.below(6000);
        std::vector<uint16_t> text(n);
        for (uint16_t& c : text) c = static_cast<uint16_t>(seeds.below(sigma));
        std::vector<std::vector<uint32_t>> pos(sigma);
        for (std::size_t i = 0; i < n; ++i) pos[text[i]].push_back(static_cast<uint32_t>(i));

        QuadWaveletMatrix qm = QuadWaveletMatrix::build(text, sigma);
        BinaryWaveletMatrix bm = BinaryWaveletMatrix::build(text, sigma);
        BinaryWaveletTree bt = BinaryWaveletTree::build(text, sigma);
        for (int q = 0; q < 2000; ++q) {
            uint16_t sym = static_cast<uint16_t>(seeds.below(sigma));
            std::size_t i = seeds.below(n + 1);
            std::size_t expect =
                std::lower_bound(pos[sym].begin(), pos[sym].end(), i) - pos[sym].begin();
            if (qm.rank(sym, i) != expect) return fail("quad wavelet matrix rank");
            if (bm.rank(sym, i) != expect) return fail("binary wavelet matrix rank");
            if (bt.rank(sym, i) != expect) return fail("binary wavelet tree rank");
        }
        for (std::size_t i = 0; i < n; ++i)
            if (qm.access(i) != text[i]) return fail("access round-trip");
        for (uint16_t sym = 0; sym < sigma; ++sym)
            for (std::size_t j = 1; j <= pos[sym].size(); j += 1 + seeds.below(8))
                if (qm.select(sym, j) != pos[sym][j - 1] + 1) return fail("select");
        std::cerr << "selftest sigma=" << sigma << ": ok\n";
    }

    {
        std::vector<uint8_t> quads(1 << 16);
        for (uint8_t& q : quads) q = static_cast<uint8_t>(seeds.next() & 3);
        RsQuadVector qv = RsQuadVector::build(quads);
        ApproxRankIndex pred = ApproxRankIndex::with_error(qv, 256);
        for (int q = 0; q < 20000; ++q) {
            unsigned sym = static_cast<unsigned>(seeds.next() & 3);
            std::size_t i = seeds.below(quads.size() + 1);
            std::size_t exact = qv.rank(sym, i);
            std::size_t approx = pred.approx_rank(sym, i);
            if (approx > exact || exact - approx >= 256) return fail("approximate rank bound");
        }
        std::cerr << "selftest predictor: ok\n";
    }

    {
        std::string t;
        static const char alpha[] = "abcdefg ";
        for (int i = 0; i < 40000; ++i) t.push_back(alpha[seeds.below(8)]);
        FmCountIndex fm = FmCountIndex::build(std::vector<uint8_t>(t.begin(), t.end()));
        for (int q = 0; q < 30; ++q) {
            std::size_t len = 1 + seeds.below(6);
            std::size_t at = seeds.below(t.size() - len);
            std::string pat = t.substr(at, len);
            std::size_t naive = 0;
            for (std::size_t i = 0; i + pat.size() <= t.size(); ++i)
                if (t.compare(i, pat.size(), pat) == 0) ++naive;
            std::vector<uint8_t> p(pat.begin(), pat.end());
            if (fm.count(p) != naive) return fail("backward search count");
        }
        std::cerr << "selftest backward search: ok\n";
    }

    std::cerr << "selftest: all suites ok\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"succinct-sequence toolkit: 4-ary wavelet matrices over rank/select quad vectors"};
    app.require_subcommand(1);

    std::string input, output, index_path, kind = "rank", sym, pattern, geometry = "256",
                             format = "json";
    uint64_t epsilon = WaveletPredictor::kDefaultBlock;
    uint64_t limit = 0, pos = 0, count = 1000000, seed = 42;
    unsigned reps = 10;
    bool prefetch = false, chained = false, fm = false;

    CLI::App* build = app.add_subcommand("build", "build an index from a file");
    build->add_option("input", input)->required();
    build->add_option("-o,--output", output)->required();
    build->add_option("--geometry", geometry, "counter geometry: 256 or 512 symbols per block");
    build->add_flag("--prefetch", prefetch, "attach the rank-prefetch predictor");
    build->add_option("--epsilon", epsilon, "predictor bitmap granularity in symbols");
    build->add_option("--limit", limit, "read at most this many bytes");
    build->add_flag("--fm", fm, "index the Burrows-Wheeler transform for pattern counting");

    CLI::App* query = app.add_subcommand("query", "answer a single query");
    query->add_option("index", index_path)->required();
    query->add_option("--kind", kind)->required();
    query->add_option("--pos", pos)->required();
    query->add_option("--sym", sym);

    CLI::App* bench = app.add_subcommand("bench", "run a reproducible query workload");
    bench->add_option("index", index_path)->required();
    bench->add_option("--kind", kind)->required();
    bench->add_option("--count", count);
    bench->add_option("--seed", seed);
    bench->add_flag("--chained", chained, "feed each answer into the next position");
    bench->add_option("--reps", reps);
    bench->add_option("--format", format, "json or csv");

    CLI::App* stats = app.add_subcommand("stats", "print index statistics");
    stats->add_option("index", index_path)->required();

    CLI::App* search = app.add_subcommand("search", "count pattern occurrences");
    search->add_option("index", index_path)->required();
    search->add_option("--pattern", pattern)->required();

    app.add_subcommand("selftest", "run the built-in oracle suites");

    try {
        app.parse(argc, argv);
        if (build->parsed()) return cmd_build(input, output, geometry, prefetch, epsilon, limit, fm);
        if (query->parsed()) return cmd_query(index_path, kind, pos, sym);
        if (bench->parsed()) return cmd_bench(index_path, kind, count, seed, chained, reps, format);
        if (stats->parsed()) return cmd_stats(index_path);
        if (search->parsed()) return cmd_search(index_path, pattern);
        return cmd_selftest();
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
