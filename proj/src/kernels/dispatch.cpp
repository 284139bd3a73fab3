#include "dirand/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace dirand::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(DIRAND_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
    return false;
#endif
}

Isa detect() noexcept { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

std::atomic<Isa>& current() noexcept {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

} // namespace

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!isa_supported(isa)) throw std::invalid_argument("kernel ISA not supported on this CPU/build");
#if defined(DIRAND_HAVE_AVX2)
    if (isa == Isa::avx2) return avx2_table();
#endif
    return scalar_table();
}

const KernelTable& active() noexcept {
#if defined(DIRAND_HAVE_AVX2)
    if (current().load(std::memory_order_relaxed) == Isa::avx2) return avx2_table();
#endif
    return scalar_table();
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (!isa_supported(isa)) throw std::invalid_argument("kernel ISA not supported on this CPU/build");
    current().store(isa, std::memory_order_relaxed);
}

void reset_isa() noexcept { current().store(detect(), std::memory_order_relaxed); }

std::uint64_t xor_popcount(std::span<const std::uint64_t> a,
                           std::span<const std::uint64_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("xor_popcount: length mismatch");
    return active().xor_popcount(a.data(), b.data(), a.size());
}

} // namespace dirand::kernels
