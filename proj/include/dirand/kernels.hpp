#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

// Bit-vector inner loops. Every routine has a portable scalar reference and,
// on x86-64, an AVX2 variant; the variant is picked once at startup from
// CPUID and can be pinned for equivalence tests. Both variants must produce
// bit-identical results.
namespace dirand::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
    const char* name;
    std::uint64_t (*popcount)(const std::uint64_t* words, std::size_t n);
    std::uint64_t (*xor_popcount)(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t n);
    void (*xor_words)(std::uint64_t* out, const std::uint64_t* a,
                      const std::uint64_t* b, std::size_t n);
    // Bit i of out = (u[i] >= p). Writes ceil(n/64) words, tail bits cleared.
    void (*threshold_bits)(const double* u, double p, std::size_t n,
                           std::uint64_t* out);
    // Same, with a per-element threshold: p1 where bit i of select is set,
    // p0 otherwise.
    void (*select_threshold_bits)(const double* u, const std::uint64_t* select,
                                  double p0, double p1, std::size_t n,
                                  std::uint64_t* out);
};

const KernelTable& scalar_table() noexcept;
#if defined(DIRAND_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

bool isa_supported(Isa isa) noexcept;

// Table for a specific ISA; throws std::invalid_argument if the CPU or the
// build lacks it.
const KernelTable& table(Isa isa);

const KernelTable& active() noexcept;
Isa active_isa() noexcept;

// Pins the dispatched variant. Not thread-safe against concurrent kernel use.
void force_isa(Isa isa);
// Restores CPUID-based selection.
void reset_isa() noexcept;

inline std::size_t words_for_bits(std::size_t bits) noexcept { return (bits + 63) / 64; }

inline std::uint64_t popcount(std::span<const std::uint64_t> w) noexcept {
    return active().popcount(w.data(), w.size());
}

std::uint64_t xor_popcount(std::span<const std::uint64_t> a,
                           std::span<const std::uint64_t> b);

} // namespace dirand::kernels
