#include "dirand/kernels.hpp"

#include <bit>

namespace dirand::kernels {
namespace {

std::uint64_t popcount_scalar(const std::uint64_t* w, std::size_t n) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) total += std::popcount(w[i]);
    return total;
}

std::uint64_t xor_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t n) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) total += std::popcount(a[i] ^ b[i]);
    return total;
}

void xor_words_scalar(std::uint64_t* out, const std::uint64_t* a,
                      const std::uint64_t* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] ^ b[i];
}

void threshold_bits_scalar(const double* u, double p, std::size_t n,
                           std::uint64_t* out) {
    const std::size_t words = words_for_bits(n);
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t acc = 0;
        const std::size_t base = w * 64;
        const std::size_t lim = (n - base < 64) ? n - base : 64;
        for (std::size_t j = 0; j < lim; ++j)
            acc |= static_cast<std::uint64_t>(u[base + j] >= p) << j;
        out[w] = acc;
    }
}

void select_threshold_bits_scalar(const double* u, const std::uint64_t* select,
                                  double p0, double p1, std::size_t n,
                                  std::uint64_t* out) {
    const std::size_t words = words_for_bits(n);
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t acc = 0;
        const std::size_t base = w * 64;
        const std::size_t lim = (n - base < 64) ? n - base : 64;
        for (std::size_t j = 0; j < lim; ++j) {
            const double p = ((select[w] >> j) & 1U) ? p1 : p0;
            acc |= static_cast<std::uint64_t>(u[base + j] >= p) << j;
        }
        out[w] = acc;
    }
}

constexpr KernelTable kScalar{
    "scalar",
    &popcount_scalar,
    &xor_popcount_scalar,
    &xor_words_scalar,
    &threshold_bits_scalar,
    &select_threshold_bits_scalar,
};

} // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

} // namespace dirand::kernels
