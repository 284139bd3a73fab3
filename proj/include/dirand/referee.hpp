#pragma once

#include "dirand/bitvec.hpp"
#include "dirand/devices.hpp"
#include "dirand/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

// Runs the two certification protocols against a device pair: Bell-block
// selection, per-block threshold checks, abort on first failure, and
// accounting of the referee's randomness.
namespace dirand::referee {

// ceil(10 * log2(ell)^2)
std::size_t default_block_length(std::uint64_t ell);

// ceil(fraction * k), robust to the fraction's binary representation.
std::size_t mismatch_threshold(double fraction, std::size_t k);

// Binary entropy in bits.
double binary_entropy(double p) noexcept;

struct ProtocolAParams {
    std::uint64_t ell = 100;
    std::uint64_t delta = 5;
    std::optional<std::size_t> k_override;
    std::optional<double> bell_probability;  // default 1/ell
    double mismatch_threshold_fraction = 0.16;
    std::uint64_t seed = 0;

    std::size_t k() const { return k_override ? *k_override : default_block_length(ell); }
    std::size_t m() const { return static_cast<std::size_t>(delta * ell); }
    double bell_p() const { return bell_probability ? *bell_probability : 1.0 / static_cast<double>(ell); }
    std::size_t threshold() const { return mismatch_threshold(mismatch_threshold_fraction, k()); }
    // Throws std::invalid_argument.
    void validate() const;
};

// (ell, delta) for target output n and error eps: delta = 1000 * ceil(log2(1/eps)),
// ell = C * n.
ProtocolAParams asymptotic_preset_a(std::uint64_t n, double eps, double c, std::uint64_t seed);

struct ProtocolBParams {
    std::uint64_t ell = 100;
    std::uint64_t c = 1;
    std::optional<std::size_t> k_override;
    std::optional<std::size_t> m_override;
    std::optional<double> bell_probability;  // default 1/ell
    double window_low = 0.49;
    double window_high = 0.51;
    double mismatch_threshold_fraction = 0.16;
    std::uint64_t seed = 0;

    std::size_t k() const { return k_override ? *k_override : default_block_length(ell); }
    // ceil(C * ell * log2(ell)^2) unless overridden.
    std::size_t m() const;
    double bell_p() const { return bell_probability ? *bell_probability : 1.0 / static_cast<double>(ell); }
    void validate() const;
};

using ProtocolParams = std::variant<ProtocolAParams, ProtocolBParams>;

struct BlockRecord {
    std::size_t index = 0;
    bool is_bell = false;
    devices::InputSymbol x;
    devices::InputSymbol y;
    BitVector a;
    BitVector b;
    // A: positions where a xor b differs from x and y. B: d_H(a, b) in positions.
    std::size_t mismatch_count = 0;
    bool passed = false;
};

struct RandomnessCost {
    double shannon_bits = 0.0;
    std::uint64_t raw_bits_drawn = 0;
};

struct Transcript {
    ProtocolParams params;
    std::string strategy;
    std::vector<std::size_t> bell_set;  // every selected position in [0, m), executed or not
    std::vector<BlockRecord> blocks;    // executed blocks, in order
    bool accepted = false;
    std::optional<std::size_t> first_failure;
    RandomnessCost randomness;

    bool is_protocol_a() const noexcept { return std::holds_alternative<ProtocolAParams>(params); }
    std::size_t k() const;
    std::size_t m() const;
    std::uint64_t rounds_played() const { return static_cast<std::uint64_t>(blocks.size()) * k(); }
};

// Independent Bernoulli(p) per position from the referee's bit source.
std::vector<std::size_t> select_bell_blocks(std::size_t m, double p, BitSource& source);

struct BlockVerdict {
    std::size_t mismatch_count = 0;
    bool passed = false;
};

BlockVerdict judge_block_a(const ProtocolAParams& params, devices::InputSymbol x, devices::InputSymbol y,
                           const BitVector& a, const BitVector& b);
BlockVerdict judge_block_b(const ProtocolBParams& params, devices::InputSymbol x, devices::InputSymbol y,
                           const BitVector& a, const BitVector& b);

// Throws devices::GameKindError if the pair plays the wrong game.
Transcript run_protocol_a(const ProtocolAParams& params, devices::DevicePair& pair);
Transcript run_protocol_b(const ProtocolBParams& params, devices::DevicePair& pair);

// Shannon cost m*h(p) + 2 per executed Bell block; raw count as recorded.
RandomnessCost randomness_accounting(const Transcript& transcript);

// Re-derives every verdict from the stored inputs and outputs and checks the
// structural invariants. Empty result means the transcript is consistent.
std::vector<std::string> verify_transcript(const Transcript& transcript);

} // namespace dirand::referee
