#include "dirand/kernels.hpp"

#include <immintrin.h>

#include <bit>

namespace dirand::kernels {
namespace {

// Nibble-lookup popcount (Mula, Kurz, Lemire), one 256-bit lane at a time,
// horizontal sums via SAD against zero.
inline __m256i popcount_bytes(__m256i v) {
    const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                            0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    return _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
}

inline std::uint64_t hsum_epi64(__m256i v) {
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
    return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

std::uint64_t popcount_avx2(const std::uint64_t* w, std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(w + i));
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(v), _mm256_setzero_si256()));
    }
    std::uint64_t total = hsum_epi64(acc);
    for (; i < n; ++i) total += std::popcount(w[i]);
    return total;
}

std::uint64_t xor_popcount_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const __m256i x = _mm256_xor_si256(va, vb);
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(x), _mm256_setzero_si256()));
    }
    std::uint64_t total = hsum_epi64(acc);
    for (; i < n; ++i) total += std::popcount(a[i] ^ b[i]);
    return total;
}

void xor_words_avx2(std::uint64_t* out, const std::uint64_t* a, const std::uint64_t* b,
                    std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_xor_si256(va, vb));
    }
    for (; i < n; ++i) out[i] = a[i] ^ b[i];
}

inline std::uint64_t tail_bits(const double* u, std::size_t count, double p) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < count; ++j)
        acc |= static_cast<std::uint64_t>(u[j] >= p) << j;
    return acc;
}

void threshold_bits_avx2(const double* u, double p, std::size_t n, std::uint64_t* out) {
    const __m256d pv = _mm256_set1_pd(p);
    const std::size_t full = n / 64;
    for (std::size_t w = 0; w < full; ++w) {
        const double* src = u + w * 64;
        std::uint64_t acc = 0;
        for (int g = 0; g < 16; ++g) {
            const __m256d v = _mm256_loadu_pd(src + 4 * g);
            const int mask = _mm256_movemask_pd(_mm256_cmp_pd(v, pv, _CMP_GE_OQ));
            acc |= static_cast<std::uint64_t>(mask) << (4 * g);
        }
        out[w] = acc;
    }
    if (n % 64 != 0) out[full] = tail_bits(u + full * 64, n % 64, p);
}

void select_threshold_bits_avx2(const double* u, const std::uint64_t* select, double p0,
                                double p1, std::size_t n, std::uint64_t* out) {
    const __m256d p0v = _mm256_set1_pd(p0);
    const __m256d p1v = _mm256_set1_pd(p1);
    const __m256i lane_bits = _mm256_setr_epi64x(1, 2, 4, 8);
    const std::size_t full = n / 64;
    for (std::size_t w = 0; w < full; ++w) {
        const double* src = u + w * 64;
        const std::uint64_t sel = select[w];
        std::uint64_t acc = 0;
        for (int g = 0; g < 16; ++g) {
            const auto nibble = static_cast<long long>((sel >> (4 * g)) & 0xF);
            const __m256i m = _mm256_cmpeq_epi64(
                _mm256_and_si256(_mm256_set1_epi64x(nibble), lane_bits), lane_bits);
            const __m256d thr = _mm256_blendv_pd(p0v, p1v, _mm256_castsi256_pd(m));
            const __m256d v = _mm256_loadu_pd(src + 4 * g);
            const int mask = _mm256_movemask_pd(_mm256_cmp_pd(v, thr, _CMP_GE_OQ));
            acc |= static_cast<std::uint64_t>(mask) << (4 * g);
        }
        out[w] = acc;
    }
    if (n % 64 != 0) {
        const double* src = u + full * 64;
        const std::uint64_t sel = select[full];
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < n % 64; ++j) {
            const double p = ((sel >> j) & 1U) ? p1 : p0;
            acc |= static_cast<std::uint64_t>(src[j] >= p) << j;
        }
        out[full] = acc;
    }
}

constexpr KernelTable kAvx2{
    "avx2",
    &popcount_avx2,
    &xor_popcount_avx2,
    &xor_words_avx2,
    &threshold_bits_avx2,
    &select_threshold_bits_avx2,
};

} // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

} // namespace dirand::kernels
