#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dirand {

// Fixed-length bit string. Position 0 is the first round of a block (or the
// first bit of an extractor input). Storage is little-endian within 64-bit
// words; unused tail bits are always zero so word-level kernels can run over
// the whole buffer.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t size, bool value = false);

    static BitVector from_words(std::vector<std::uint64_t> words, std::size_t size);
    // MSB-first hex: position 0 is the high bit of the first digit. Accepts an
    // optional "0x" prefix; digits beyond `size` bits must be zero.
    static BitVector from_hex(std::string_view hex, std::size_t size);
    // "0101..." with position 0 first.
    static BitVector from_string(std::string_view bits);

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    bool operator[](std::size_t i) const noexcept {
        return (words_[i >> 6] >> (i & 63)) & 1U;
    }
    bool at(std::size_t i) const;
    void set(std::size_t i, bool value) noexcept {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value) words_[i >> 6] |= mask;
        else words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::span<std::uint64_t> mutable_words() noexcept { return words_; }
    // Clears bits past size(); call after writing whole words.
    void clear_tail() noexcept;

    std::size_t count() const noexcept;
    bool all_zero() const noexcept;

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    BitVector operator~() const;

    void append(const BitVector& tail);
    BitVector slice(std::size_t offset, std::size_t length) const;

    std::string to_hex() const;
    std::string to_string() const;

    friend bool operator==(const BitVector&, const BitVector&) = default;
    friend auto operator<=>(const BitVector& a, const BitVector& b) {
        // Lexicographic in position order (position 0 most significant).
        if (auto c = a.size_ <=> b.size_; c != 0) return c;
        for (std::size_t i = 0; i < a.size_; ++i)
            if (a[i] != b[i]) return a[i] <=> b[i];
        return std::strong_ordering::equal;
    }

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

// Number of positions where a and b differ; sizes must match.
std::size_t hamming_distance(const BitVector& a, const BitVector& b);

inline double relative_hamming_distance(const BitVector& a, const BitVector& b) {
    return a.empty() ? 0.0
                     : static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.size());
}

} // namespace dirand
