#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwt {

// I/O failure distinct from validation errors; the CLI maps it to exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace io {

inline void put_bytes(std::ostream& os, const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!os) throw IoError("write failed");
}

inline void get_bytes(std::istream& is, void* p, std::size_t n) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!is) throw IoError("unexpected end of stream");
}

template <typename T>
void put_le(std::ostream& os, T v) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    put_bytes(os, buf, sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
    unsigned char buf[sizeof(T)];
    get_bytes(is, buf, sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
    return v;
}

inline void put_u8(std::ostream& os, uint8_t v) { put_le<uint8_t>(os, v); }
inline void put_u16(std::ostream& os, uint16_t v) { put_le<uint16_t>(os, v); }
inline void put_u32(std::ostream& os, uint32_t v) { put_le<uint32_t>(os, v); }
inline void put_u64(std::ostream& os, uint64_t v) { put_le<uint64_t>(os, v); }
inline uint8_t get_u8(std::istream& is) { return get_le<uint8_t>(is); }
inline uint16_t get_u16(std::istream& is) { return get_le<uint16_t>(is); }
inline uint32_t get_u32(std::istream& is) { return get_le<uint32_t>(is); }
inline uint64_t get_u64(std::istream& is) { return get_le<uint64_t>(is); }

template <typename T>
void put_vec_le(std::ostream& os, const std::vector<T>& v) {
    put_u64(os, v.size());
    for (T x : v) put_le<T>(os, x);
}

template <typename T>
std::vector<T> get_vec_le(std::istream& is) {
    uint64_t n = get_u64(is);
    std::vector<T> v(n);
    for (uint64_t i = 0; i < n; ++i) v[i] = get_le<T>(is);
    return v;
}

} // namespace io
} // namespace qwt
