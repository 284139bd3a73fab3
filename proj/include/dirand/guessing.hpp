#pragma once

#include "dirand/analysis.hpp"
#include "dirand/bitvec.hpp"
#include "dirand/devices.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>

// The single-block guessing game: Bob holds a secret bit y and feeds it to
// box B; Alice feeds a random x to box A and claims y = 0 iff her output is
// within the decision radius of the block b0 that B favours on input 0. Any
// success rate above 1/2 exposes signaling between the boxes.
namespace dirand::guessing {

// Success lower bound 1/2 + (1/4 - 2 beta - gamma) for boxes whose B output
// equals b0 w.p. >= 1 - gamma on y = 0 and whose CHSH block rule fails
// w.p. <= beta. Throws std::invalid_argument for negative arguments.
double lemma3_bound(double gamma, double beta);

struct GuessingGameConfig {
    std::size_t k = 20;
    std::uint64_t trials = 100000;
    // Fixed b0; when absent it is calibrated from `calibration_samples`
    // preparatory blocks with y = 0.
    std::optional<BitVector> b0;
    std::size_t calibration_samples = 1000;
    double decision_radius = 0.2;
    unsigned threads = 1;

    // Throws std::invalid_argument; the radius must lie in (0.16, 0.34).
    void validate() const;
};

struct GuessingGameResult {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double estimate = 0.0;
    analysis::WilsonInterval wilson_ci;
    std::optional<double> bound;
    BitVector b0;
    // Per secret bit: trials and successes.
    std::array<std::uint64_t, 2> trials_by_y{};
    std::array<std::uint64_t, 2> successes_by_y{};
};

using PairFactory = std::function<devices::DevicePair(std::uint64_t seed)>;

// Modal B output over `samples` blocks with inputs (0, 0); ties go to the
// lexicographically smallest block.
BitVector calibrate_b0(devices::DevicePair& pair, std::size_t k, std::size_t samples);

// Each trial builds a fresh pair from the factory, seeded from
// (master_seed, trial), so the result does not depend on thread count.
GuessingGameResult run_guessing_game(const PairFactory& make_pair, const GuessingGameConfig& config,
                                     std::uint64_t master_seed);

// The triangle-inequality step: d(a0,b) <= 0.16 and d(a1,b) >= 0.84 force
// d(a0,a1) >= 0.68. Returns false only if the premises hold and the
// conclusion fails.
bool triangle_core_holds(const BitVector& a0, const BitVector& a1, const BitVector& b);

nlohmann::ordered_json to_json(const GuessingGameResult& r);

} // namespace dirand::guessing
