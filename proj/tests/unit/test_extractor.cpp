#include "dirand/analysis.hpp"
#include "dirand/extractor.hpp"
#include "dirand/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

using namespace dirand;
using namespace dirand::extractor;

namespace {

void check_design(const WeakDesign& d) {
    REQUIRE(d.sets.size() == d.r);
    for (std::size_t j = 0; j < d.r; ++j) {
        CHECK(d.sets[j].size() == d.set_size);
        CHECK(std::set<std::uint32_t>(d.sets[j].begin(), d.sets[j].end()).size() == d.set_size);
        for (auto e : d.sets[j]) CHECK(e < d.s);
        CHECK(oracle::overlap_sum(d.sets, j) <= d.rho * static_cast<double>(d.r - 1));
    }
}

std::uint64_t seed_bits(const BitVector& seed) {
    std::uint64_t v = 0;
    for (std::size_t p = 0; p < seed.size(); ++p) v |= static_cast<std::uint64_t>(seed[p]) << p;
    return v;
}

BitVector bits_of(std::uint64_t v, std::size_t n) {
    BitVector out(n);
    for (std::size_t i = 0; i < n; ++i) out.set(i, (v >> i) & 1U);
    return out;
}

} // namespace

TEST_CASE("weak designs") {
    const auto one = build_weak_design(1, 5, 1.25, 5);
    check_design(one);
    const auto two = build_weak_design(2, 4, 1.25, 32);
    check_design(two);
    CHECK(oracle::overlap_sum(two.sets, 1) == 1.0);
    for (auto [r, size, s] : {std::tuple{16, 8, 256}, {16, 8, 128}, {32, 6, 100}, {64, 6, 200}, {128, 4, 200}}) {
        const auto d = build_weak_design(r, size, 1.25, s);
        check_design(d);
        CHECK_FALSE(find_design_violation(d));
        CHECK(design_from_json(to_json(d)).sets == d.sets);
    }
    try {
        build_weak_design(16, 8, 1.25, 64);
        FAIL("expected a construction failure");
    } catch (const DesignConstructionError& e) {
        CHECK(e.violating_set() > 0);
        CHECK(e.violating_set() < 16);
    }
    CHECK_THROWS_AS(build_weak_design(4, 8, 1.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(build_weak_design(4, 8, 1.25, 7), std::invalid_argument);
}

TEST_CASE("tampered design is rejected on load") {
    auto d = build_weak_design(4, 3, 1.25, 12);
    auto j = to_json(d);
    j["sets"][1] = j["sets"][0];
    j["sets"][2] = j["sets"][0];
    j["sets"][3] = j["sets"][0];
    CHECK_THROWS_AS(design_from_json(j), std::invalid_argument);
}

TEST_CASE("t-XOR bits") {
    const auto x = BitVector::from_string("1010");
    const std::uint32_t i02[] = {0, 2}, i11[] = {1, 1}, i33[] = {3, 3};
    CHECK_FALSE(txor_bit(x, i02));
    CHECK_FALSE(txor_bit(x, i11));
    CHECK_FALSE(txor_bit(x, i33));
    const std::uint32_t bad[] = {4};
    CHECK_THROWS_AS(txor_bit(x, bad), std::out_of_range);
    // All 15 pairs of a 6-bit string against the direct encoding.
    const auto y = BitVector::from_string("110100");
    const auto subsets = all_t_subsets(6, 2);
    CHECK(subsets.size() == 15);
    for (const auto& sub : subsets) CHECK(txor_bit(y, sub) == ((y[sub[0]] + y[sub[1]]) % 2 == 1));
}

TEST_CASE("seed decoding") {
    ExtractorParams p;
    p.m = 4;
    p.t = 1;
    p.r = 1;
    p.design = build_weak_design(1, 2, 1.25, 2);
    auto seed = BitVector::from_string("10");  // b1 b0 = 1 0
    CHECK(seed_to_subsets(seed, p)[0] == std::vector<std::uint32_t>{2});

    const auto q = make_extractor_params(8, 2, 4, 24);
    for (const auto& sub : seed_to_subsets(BitVector(q.seed_length()), q))
        CHECK(sub == std::vector<std::uint32_t>{0, 0});
    Xoshiro256 rng(3);
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t v = rng() & ((1ULL << q.seed_length()) - 1);
        const auto got = seed_to_subsets(bits_of(v, q.seed_length()), q);
        for (std::size_t j = 0; j < q.r; ++j)
            for (std::size_t c = 0; c < q.t; ++c) CHECK(got[j][c] == oracle::chunk_index(v, q.design.sets[j], c, 3));
    }
    CHECK_THROWS(seed_to_subsets(BitVector(3), q));
}

TEST_CASE("distinct subsets") {
    CHECK(distinct_subset(std::vector<std::uint32_t>{3, 3}, 8) == std::vector<std::uint32_t>{3, 4});
    CHECK(distinct_subset(std::vector<std::uint32_t>{7, 7, 0}, 8) == std::vector<std::uint32_t>{7, 0, 1});
    CHECK(distinct_subset(std::vector<std::uint32_t>{1, 5}, 8) == std::vector<std::uint32_t>{1, 5});
}

TEST_CASE("extract matches the brute-force evaluator on the full table") {
    const auto p = make_extractor_params(8, 2, 2, 12);
    REQUIRE(p.seed_length() == 12);
    std::size_t rows = 0;
    for (std::uint64_t sv = 0; sv < (1ULL << 12); ++sv) {
        const auto seed = bits_of(sv, 12);
        for (std::uint32_t x = 0; x < 256; ++x) {
            const auto out = extract(bits_of(x, 8), seed, p);
            const std::uint32_t want = oracle::extract_bits(x, sv, p.design.sets, 8, 2);
            if (out[0] != static_cast<bool>(want & 1U) || out[1] != static_cast<bool>(want & 2U)) {
                FAIL("mismatch at x=" << x << " seed=" << sv);
            }
            ++rows;
        }
    }
    CHECK(rows == 256 * 4096);
}

TEST_CASE("extract is linear in x") {
    const auto p = make_extractor_params(16, 3, 8, 96);
    Xoshiro256 rng(4);
    BitVector seed(p.seed_length());
    for (std::size_t i = 0; i < seed.size(); ++i) seed.set(i, rng() >> 63);
    CHECK(extract(BitVector(16), seed, p).all_zero());
    const auto subsets = seed_to_subsets(seed, p);
    for (int trial = 0; trial < 50; ++trial) {
        BitVector x(16);
        for (std::size_t i = 0; i < 16; ++i) x.set(i, rng() >> 63);
        const std::uint32_t pos = rng() % 16;
        auto y = x;
        y.flip(pos);
        const auto diff = extract(x, seed, p) ^ extract(y, seed, p);
        for (std::size_t j = 0; j < p.r; ++j) {
            const auto sub = distinct_subset(subsets[j], 16);
            CHECK(diff[j] == (std::count(sub.begin(), sub.end(), pos) % 2 == 1));
        }
    }
}

TEST_CASE("strong extractor distance") {
    const auto p = make_extractor_params(8, 2, 2, 12);
    CHECK(strong_extractor_distance(analysis::Distribution::point_mass("10110010"), p) >= 0.5);
    const auto one = make_extractor_params(8, 2, 1, 12);
    CHECK(strong_extractor_distance(analysis::Distribution::uniform(8), one) == 0.0);

    // Affine subspace: position 0 fixed to 1, position 1 fixed to 0.
    std::vector<std::string> labels;
    std::vector<std::pair<std::uint32_t, double>> pairs;
    for (std::uint32_t v = 0; v < 64; ++v) {
        const std::uint32_t x = 1U | (v << 2);
        std::string s(8, '0');
        for (int i = 0; i < 8; ++i) s[i] = ((x >> i) & 1U) ? '1' : '0';
        labels.push_back(s);
        pairs.emplace_back(x, 1.0 / 64);
    }
    const analysis::Distribution affine(labels, std::vector<double>(64, 1.0 / 64));
    const double got = strong_extractor_distance(affine, p);
    CHECK(got == doctest::Approx(oracle::extractor_distance(pairs, p.design.sets, 12, 8, 2)).epsilon(1e-12));
    // Frozen from the first computation.
    CHECK(got == 0.07061767578125);
}

TEST_CASE("list decoding") {
    Xoshiro256 rng(10);
    const auto subsets = all_t_subsets(8, 2);
    const auto xstar = BitVector::from_string("10011010");
    TxorPredictions exact;
    for (const auto& s : subsets) exact[s] = txor_bit(xstar, s);
    const auto r = list_decode_txor(exact, 0.4, 8, 2);
    CHECK(std::find(r.matches.begin(), r.matches.end(), xstar) != r.matches.end());
    CHECK(r.delta == doctest::Approx(std::log(2 / 0.4) / 2));
    CHECK(r.list_bound == doctest::Approx(25.0));

    for (int inst = 0; inst < 200; ++inst) {
        std::uint32_t xv = static_cast<std::uint32_t>(rng() & 255U);
        const auto x = bits_of(xv, 8);
        TxorPredictions pred;
        for (const auto& s : subsets) pred[s] = txor_bit(x, s);
        // Corrupt 3 of the 28 parities.
        std::vector<std::size_t> order(subsets.size());
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = 0; i < 3; ++i) {
            std::swap(order[i], order[i + rng() % (order.size() - i)]);
            pred[subsets[order[i]]] = !pred[subsets[order[i]]];
        }
        const auto res = list_decode_txor(pred, 0.3, 8, 2);
        // Reference: every string with agreement >= 0.8 of the 28.
        std::vector<BitVector> want;
        for (std::uint32_t v = 0; v < 256; ++v) {
            int agree = 0;
            for (const auto& [s, bit] : pred) agree += (((v >> s[0]) ^ (v >> s[1])) & 1U) == (bit ? 1U : 0U);
            if (agree >= 0.8 * 28 - 1e-9) want.push_back(bits_of(v, 8));
        }
        std::sort(want.begin(), want.end());
        CHECK(res.matches == want);
        CHECK(std::find(res.matches.begin(), res.matches.end(), x) != res.matches.end());
        const bool near = std::any_of(res.candidates.begin(), res.candidates.end(), [&](const BitVector& c) {
            return relative_hamming_distance(c, x) <= res.delta;
        });
        CHECK(near);
        CHECK(static_cast<double>(res.candidates.size()) <= res.list_bound);
        for (const auto& m : res.matches)
            CHECK(std::any_of(res.candidates.begin(), res.candidates.end(), [&](const BitVector& c) {
                return relative_hamming_distance(c, m) <= res.delta;
            }));
    }
    CHECK_THROWS_AS(list_decode_txor(exact, 0.6, 8, 2), std::invalid_argument);
    CHECK_THROWS_AS(list_decode_txor(exact, 0.01, 8, 2), std::invalid_argument);
}
