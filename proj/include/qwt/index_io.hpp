#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qwt/fm_index.hpp"
#include "qwt/quad_wm.hpp"

namespace qwt {

// Index file layout (all little-endian):
//   magic "QWTK", format version (u16), sigma (u32), n (u64),
//   bit width (u8), geometry tag (u8), predictor flag (u8),
//   wavelet-matrix payload (planes, tail plane, offset tables),
//   decode table (u32 count, u16 entries), optional predictor.
// A pattern-counting index appends a "FMCT" section holding the
// exclusive prefix sums of the symbol histogram.
struct IndexFile {
    QuadWaveletMatrix wm;
    std::vector<uint16_t> decode; // dense code -> original symbol
    std::optional<std::vector<uint64_t>> fm_prefix;

    bool has_fm() const { return fm_prefix.has_value(); }
    FmCountIndex to_fm_index() &&;
};

void save_index(const std::string& path, const IndexFile& ix);
IndexFile load_index(const std::string& path);

// Reads a file prefix of at most limit bytes (0 = no limit) and densely
// recodes it: distinct bytes in ascending order get codes 0..sigma-1.
struct IngestResult {
    std::vector<uint16_t> text;
    std::vector<uint16_t> decode;
    uint32_t sigma = 0; // effective alphabet size (at least 2 for building)
};

IngestResult ingest(const std::string& path, std::size_t limit_bytes);
IngestResult recode(std::span<const uint8_t> bytes);

} // namespace qwt
