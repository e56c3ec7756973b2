#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <new>

namespace qwt {

// One cache line in bits; data blocks of the small-block geometry span
// exactly one line when the payload is line-aligned.
inline constexpr std::size_t kCacheLineBytes = 64;
inline constexpr std::size_t kCacheLineBits = kCacheLineBytes * 8;

inline void prefetch_read(const void* p) {
#if defined(__GNUC__) || defined(__clang__)
    __builtin_prefetch(p, 0, 3);
#else
    (void)p;
#endif
}

// 64-bit word buffer aligned to cache-line boundaries, zero-initialized.
class AlignedWords {
public:
    AlignedWords() = default;
    explicit AlignedWords(std::size_t n_words) { resize(n_words); }

    void resize(std::size_t n_words) {
        if (n_words == 0) {
            data_.reset();
            size_ = 0;
            return;
        }
        std::size_t bytes = (n_words * 8 + kCacheLineBytes - 1) / kCacheLineBytes * kCacheLineBytes;
        void* p = std::aligned_alloc(kCacheLineBytes, bytes);
        if (p == nullptr) throw std::bad_alloc();
        data_.reset(static_cast<uint64_t*>(p));
        size_ = n_words;
        for (std::size_t i = 0; i < bytes / 8; ++i) data_.get()[i] = 0;
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    uint64_t* data() { return data_.get(); }
    const uint64_t* data() const { return data_.get(); }
    uint64_t& operator[](std::size_t i) { return data_.get()[i]; }
    uint64_t operator[](std::size_t i) const { return data_.get()[i]; }

private:
    struct Free {
        void operator()(uint64_t* p) const { std::free(p); }
    };
    std::unique_ptr<uint64_t, Free> data_;
    std::size_t size_ = 0;
};

inline unsigned ceil_log2(uint64_t x) {
    unsigned b = 0;
    while ((uint64_t(1) << b) < x) ++b;
    return b;
}

} // namespace qwt
