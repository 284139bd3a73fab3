#include "dirand/bitvec.hpp"

#include "dirand/kernels.hpp"

#include <stdexcept>

namespace dirand {

BitVector::BitVector(std::size_t size, bool value)
    : words_(kernels::words_for_bits(size), value ? ~std::uint64_t{0} : 0), size_(size) {
    clear_tail();
}

BitVector BitVector::from_words(std::vector<std::uint64_t> words, std::size_t size) {
    if (words.size() != kernels::words_for_bits(size))
        throw std::invalid_argument("BitVector::from_words: word count does not match size");
    BitVector v;
    v.words_ = std::move(words);
    v.size_ = size;
    v.clear_tail();
    return v;
}

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

BitVector BitVector::from_hex(std::string_view hex, std::size_t size) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() != (size + 3) / 4)
        throw std::invalid_argument("hex string has " + std::to_string(hex.size()) +
                                    " digits, expected " + std::to_string((size + 3) / 4) +
                                    " for " + std::to_string(size) + " bits");
    BitVector v(size);
    for (std::size_t d = 0; d < hex.size(); ++d) {
        const int value = hex_value(hex[d]);
        if (value < 0) throw std::invalid_argument("invalid hex digit in bit string");
        for (int b = 0; b < 4; ++b) {
            const bool bit = (value >> (3 - b)) & 1;
            const std::size_t pos = d * 4 + static_cast<std::size_t>(b);
            if (pos < size) v.set(pos, bit);
            else if (bit) throw std::invalid_argument("hex string has nonzero padding bits");
        }
    }
    return v;
}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') v.set(i, true);
        else if (bits[i] != '0') throw std::invalid_argument("bit string must contain only 0/1");
    }
    return v;
}

bool BitVector::at(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("BitVector index out of range");
    return (*this)[i];
}

void BitVector::clear_tail() noexcept {
    if (size_ % 64 != 0 && !words_.empty())
        words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
}

std::size_t BitVector::count() const noexcept {
    return static_cast<std::size_t>(kernels::popcount(words_));
}

bool BitVector::all_zero() const noexcept {
    for (auto w : words_)
        if (w != 0) return false;
    return true;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (other.size_ != size_) throw std::invalid_argument("BitVector xor: size mismatch");
    kernels::active().xor_words(words_.data(), words_.data(), other.words_.data(), words_.size());
    return *this;
}

BitVector BitVector::operator~() const {
    BitVector v = *this;
    for (auto& w : v.words_) w = ~w;
    v.clear_tail();
    return v;
}

void BitVector::append(const BitVector& tail) {
    const std::size_t old = size_;
    size_ += tail.size_;
    words_.resize(kernels::words_for_bits(size_), 0);
    if (old % 64 == 0) {
        std::copy(tail.words_.begin(), tail.words_.end(), words_.begin() + static_cast<std::ptrdiff_t>(old / 64));
        return;
    }
    for (std::size_t i = 0; i < tail.size_; ++i)
        if (tail[i]) set(old + i, true);
}

BitVector BitVector::slice(std::size_t offset, std::size_t length) const {
    if (offset + length > size_) throw std::out_of_range("BitVector::slice out of range");
    BitVector v(length);
    for (std::size_t i = 0; i < length; ++i)
        if ((*this)[offset + i]) v.set(i, true);
    return v;
}

std::string BitVector::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out((size_ + 3) / 4, '0');
    for (std::size_t d = 0; d < out.size(); ++d) {
        int value = 0;
        for (int b = 0; b < 4; ++b) {
            const std::size_t pos = d * 4 + static_cast<std::size_t>(b);
            if (pos < size_ && (*this)[pos]) value |= 1 << (3 - b);
        }
        out[d] = digits[value];
    }
    return out;
}

std::string BitVector::to_string() const {
    std::string out(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if ((*this)[i]) out[i] = '1';
    return out;
}

std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: size mismatch");
    return static_cast<std::size_t>(kernels::xor_popcount(a.words(), b.words()));
}

} // namespace dirand
