#include "dirand/bitvec.hpp"
#include "dirand/kernels.hpp"
#include "dirand/rng.hpp"

#include <doctest.h>

#include <bit>
#include <stdexcept>
#include <vector>

using namespace dirand;
using kernels::Isa;

namespace {

std::vector<std::uint64_t> random_words(std::size_t n, Xoshiro256& rng) {
    std::vector<std::uint64_t> w(n);
    for (auto& x : w) x = rng();
    return w;
}

// Lengths straddling every vector-width boundary.
const std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 31, 33, 63, 64, 65, 127, 128, 129, 1000, 4099};

} // namespace

TEST_CASE("scalar popcount matches std::popcount") {
    Xoshiro256 rng(11);
    const auto& s = kernels::scalar_table();
    for (std::size_t n : kLengths) {
        auto w = random_words(n, rng);
        std::uint64_t expect = 0;
        for (auto x : w) expect += static_cast<std::uint64_t>(std::popcount(x));
        CHECK(s.popcount(w.data(), n) == expect);
    }
}

TEST_CASE("avx2 kernels are bit-identical to scalar") {
    if (!kernels::isa_supported(Isa::avx2)) {
        MESSAGE("avx2 unavailable; equivalence skipped");
        return;
    }
    const auto& s = kernels::scalar_table();
    const auto& v = kernels::table(Isa::avx2);
    Xoshiro256 rng(12);
    for (std::size_t n : kLengths) {
        auto a = random_words(n, rng);
        auto b = random_words(n, rng);
        CHECK(v.popcount(a.data(), n) == s.popcount(a.data(), n));
        CHECK(v.xor_popcount(a.data(), b.data(), n) == s.xor_popcount(a.data(), b.data(), n));
        std::vector<std::uint64_t> o1(n), o2(n);
        s.xor_words(o1.data(), a.data(), b.data(), n);
        v.xor_words(o2.data(), a.data(), b.data(), n);
        CHECK(o1 == o2);
    }
    for (std::size_t bits : kLengths) {
        std::vector<double> u(bits);
        rng.fill_uniform(u);
        // Exact ties against the threshold.
        for (std::size_t i = 0; i < bits; i += 7) u[i] = 0.25;
        const std::size_t nw = kernels::words_for_bits(bits);
        for (double p : {0.0, 0.25, 0.5, 0.853, 1.0}) {
            std::vector<std::uint64_t> o1(nw + 1, ~0ULL), o2(nw + 1, ~0ULL);
            s.threshold_bits(u.data(), p, bits, o1.data());
            v.threshold_bits(u.data(), p, bits, o2.data());
            CHECK(o1 == o2);
            CHECK(o1[nw] == ~0ULL);  // no write past the last word
            auto sel = random_words(nw, rng);
            s.select_threshold_bits(u.data(), sel.data(), p, 1.0 - p, bits, o1.data());
            v.select_threshold_bits(u.data(), sel.data(), p, 1.0 - p, bits, o2.data());
            CHECK(o1 == o2);
        }
    }
}

TEST_CASE("threshold_bits semantics and tail clearing") {
    const double u[] = {0.1, 0.5, 0.49, 0.9, 0.5};
    std::uint64_t out = ~0ULL;
    kernels::scalar_table().threshold_bits(u, 0.5, 5, &out);
    CHECK(out == 0b11010ULL);
}

TEST_CASE("dispatch can be pinned and reset") {
    kernels::force_isa(Isa::scalar);
    CHECK(kernels::active_isa() == Isa::scalar);
    const auto v = BitVector::from_string("1011001110");
    CHECK(v.count() == 6);
    kernels::reset_isa();
    CHECK(v.count() == 6);
    if (!kernels::isa_supported(Isa::avx2)) CHECK_THROWS_AS(kernels::table(Isa::avx2), std::invalid_argument);
}
