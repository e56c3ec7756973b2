#include "qwt/index_io.hpp"

#include <fstream>

#include "qwt/predictor.hpp"
#include "qwt/serialize.hpp"

namespace qwt {

namespace {
constexpr char kMagic[4] = {'Q', 'W', 'T', 'K'};
constexpr char kFmMagic[4] = {'F', 'M', 'C', 'T'};
constexpr uint16_t kVersion = 1;
} // namespace

void save_index(const std::string& path, const IndexFile& ix) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");

    io::put_bytes(os, kMagic, 4);
    io::put_u16(os, kVersion);
    io::put_u32(os, ix.wm.sigma());
    io::put_u64(os, ix.wm.size());
    io::put_u8(os, static_cast<uint8_t>(ix.wm.bit_width()));
    io::put_u8(os, static_cast<uint8_t>(ix.wm.geometry()));
    io::put_u8(os, ix.wm.predictor() != nullptr ? 1 : 0);

    ix.wm.save(os);

    io::put_u32(os, static_cast<uint32_t>(ix.decode.size()));
    for (uint16_t v : ix.decode) io::put_u16(os, v);

    if (ix.wm.predictor() != nullptr) ix.wm.predictor()->save(os);

    if (ix.fm_prefix) {
        io::put_bytes(os, kFmMagic, 4);
        io::put_vec_le<uint64_t>(os, *ix.fm_prefix);
    }
    os.flush();
    if (!os) throw IoError("write to '" + path + "' failed");
}

IndexFile load_index(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "'");

    char magic[4];
    io::get_bytes(is, magic, 4);
    if (std::string_view(magic, 4) != std::string_view(kMagic, 4))
        throw IoError("'" + path + "' is not an index file");
    uint16_t version = io::get_u16(is);
    if (version != kVersion) throw IoError("unsupported index format version");

    uint32_t sigma = io::get_u32(is);
    uint64_t n = io::get_u64(is);
    unsigned bit_width = io::get_u8(is);
    uint8_t geom = io::get_u8(is);
    if (geom > 1) throw IoError("bad geometry tag");
    bool has_predictor = io::get_u8(is) != 0;

    IndexFile ix;
    ix.wm = QuadWaveletMatrix::load(is, sigma, n, bit_width, static_cast<Geometry>(geom));

    uint32_t decode_count = io::get_u32(is);
    ix.decode.resize(decode_count);
    for (uint16_t& v : ix.decode) v = io::get_u16(is);

    if (has_predictor)
        ix.wm.attach_predictor(std::make_unique<WaveletPredictor>(WaveletPredictor::load(is)));

    char fm_magic[4];
    is.read(fm_magic, 4);
    if (is.gcount() == 4 && std::string_view(fm_magic, 4) == std::string_view(kFmMagic, 4)) {
        ix.fm_prefix = io::get_vec_le<uint64_t>(is);
    }
    return ix;
}

FmCountIndex IndexFile::to_fm_index() && {
    if (!fm_prefix) throw std::invalid_argument("index has no pattern-counting section");
    std::array<int16_t, 256> byte_code;
    byte_code.fill(-1);
    // dense codes 1..sigma-1 decode to original bytes; invert the table
    for (std::size_t code = 1; code < decode.size(); ++code) {
        if (decode[code] < 256) byte_code[decode[code]] = static_cast<int16_t>(code);
    }
    return FmCountIndex::from_parts(std::move(wm), std::move(*fm_prefix), byte_code);
}

IngestResult recode(std::span<const uint8_t> bytes) {
    std::array<int32_t, 256> code;
    code.fill(-1);
    std::array<uint64_t, 256> hist{};
    for (uint8_t b : bytes) ++hist[b];
    IngestResult r;
    uint16_t next = 0;
    for (unsigned b = 0; b < 256; ++b) {
        if (hist[b] > 0) {
            code[b] = next;
            r.decode.push_back(static_cast<uint16_t>(b));
            ++next;
        }
    }
    r.sigma = next;
    r.text.resize(bytes.size());
    for (std::size_t i = 0; i < bytes.size(); ++i)
        r.text[i] = static_cast<uint16_t>(code[bytes[i]]);
    return r;
}

IngestResult ingest(const std::string& path, std::size_t limit_bytes) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "'");
    std::vector<uint8_t> bytes;
    constexpr std::size_t kChunk = 1 << 20;
    std::vector<char> buf(kChunk);
    while (limit_bytes == 0 || bytes.size() < limit_bytes) {
        std::size_t want = kChunk;
        if (limit_bytes != 0) want = std::min(want, limit_bytes - bytes.size());
        is.read(buf.data(), static_cast<std::streamsize>(want));
        std::size_t got = static_cast<std::size_t>(is.gcount());
        if (got == 0) break;
        bytes.insert(bytes.end(), buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(got));
    }
    if (is.bad()) throw IoError("read from '" + path + "' failed");
    if (bytes.empty()) throw std::invalid_argument("input file is empty");
    return recode(bytes);
}

} // namespace qwt
