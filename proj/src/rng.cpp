#include "dirand/rng.hpp"

namespace dirand {

std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t index) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    SplitMix64 a(master);
    SplitMix64 b(h);
    SplitMix64 c(index ^ 0xD1B54A32D192ED03ULL);
    SplitMix64 mix(a() ^ (b() * 3) ^ (c() * 7));
    return mix();
}

bool BitSource::bernoulli(double p) noexcept {
    if (!(p > 0.0)) return false;
    if (p >= 1.0) return true;
    // Walk the binary expansions of U and p until they differ. A double has a
    // finite expansion, so once p runs out of bits U >= p.
    double rest = p;
    while (rest > 0.0) {
        rest *= 2.0;
        const bool p_bit = rest >= 1.0;
        if (p_bit) rest -= 1.0;
        const bool u_bit = next_bit();
        if (u_bit != p_bit) return p_bit;  // U < p iff U has the 0 where p has the 1
    }
    return false;
}

} // namespace dirand
