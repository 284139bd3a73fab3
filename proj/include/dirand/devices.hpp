#pragma once

#include "dirand/bitvec.hpp"
#include "dirand/quantum_sim.hpp"
#include "dirand/rng.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dirand::devices {

enum class GameKind { chsh, extended };

std::string_view to_string(GameKind kind) noexcept;

// Extended game inputs, (A,0) (A,1) (B,0) (B,1).
enum class Extended : std::uint8_t { a0 = 0, a1 = 1, b0 = 2, b1 = 3 };

// One input to one box: a CHSH bit, or an extended-game symbol.
struct InputSymbol {
    GameKind kind = GameKind::chsh;
    std::uint8_t value = 0;

    static constexpr InputSymbol chsh(int bit) noexcept {
        return {GameKind::chsh, static_cast<std::uint8_t>(bit & 1)};
    }
    static constexpr InputSymbol extended(Extended e) noexcept {
        return {GameKind::extended, static_cast<std::uint8_t>(e)};
    }
    // Number of symbols in the alphabet of `kind`.
    static constexpr std::size_t alphabet_size(GameKind kind) noexcept {
        return kind == GameKind::chsh ? 2 : 4;
    }

    // "0"/"1" for CHSH, "A0" "A1" "B0" "B1" for extended.
    std::string name() const;
    static InputSymbol parse(std::string_view text);

    friend constexpr bool operator==(InputSymbol, InputSymbol) = default;
};

class GameKindError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Rounds were not driven in lockstep (one side answered twice, or block
// lengths disagreed).
class LockstepError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// One box. An endpoint sees only its own inputs, its own local randomness and
// whatever hidden state it was given when the pair was built; there is no
// way to pass it the other side's input or output.
class Endpoint {
public:
    explicit Endpoint(GameKind kind) noexcept : kind_(kind) {}
    virtual ~Endpoint() = default;
    Endpoint(const Endpoint&) = delete;
    Endpoint& operator=(const Endpoint&) = delete;

    GameKind kind() const noexcept { return kind_; }

    // Answers k consecutive rounds that all carry the same input.
    BitVector respond_block(InputSymbol input, std::size_t k);
    bool respond(InputSymbol input) { return respond_block(input, 1)[0]; }

protected:
    virtual BitVector do_respond(InputSymbol input, std::size_t k) = 0;

private:
    GameKind kind_;
};

class DevicePair {
public:
    DevicePair(std::string name, GameKind kind, bool signaling, std::unique_ptr<Endpoint> a,
               std::unique_ptr<Endpoint> b);

    const std::string& name() const noexcept { return name_; }
    GameKind kind() const noexcept { return kind_; }
    // True only for the adversarial demo pairs.
    bool signaling() const noexcept { return signaling_; }

    Endpoint& a() noexcept { return *a_; }
    Endpoint& b() noexcept { return *b_; }

    // One lockstep block: B's box answers, then A's. Order is irrelevant for
    // non-signaling pairs; signaling pairs rely on it.
    std::pair<BitVector, BitVector> play_block(InputSymbol x, InputSymbol y, std::size_t k);

private:
    std::string name_;
    GameKind kind_;
    bool signaling_;
    std::unique_ptr<Endpoint> a_;
    std::unique_ptr<Endpoint> b_;
};

// Measurement angles of the honest strategies.
quantum::MeasurementAngle honest_chsh_angle_a(int x) noexcept;
quantum::MeasurementAngle honest_chsh_angle_b(int y) noexcept;
quantum::MeasurementAngle honest_extended_angle(Extended input) noexcept;

DevicePair honest_chsh_pair(std::uint64_t seed);
DevicePair honest_extended_pair(std::uint64_t seed);

// Truth tables over the game's input alphabet (size 2 or 4), entries 0/1.
DevicePair classical_deterministic_pair(GameKind kind, std::vector<int> truth_a,
                                        std::vector<int> truth_b);
DevicePair all_zeros_pair(GameKind kind);

// Classical pair sharing one random bit per round: a = b = shared bit.
DevicePair shared_random_bit_pair(GameKind kind, std::uint64_t seed);

// The fixed block B favours, derived from b0_seed.
BitVector cheating_b0(std::uint64_t b0_seed, std::size_t k);

// Openly signaling pair for the guessing game. B ignores its input and emits
// b0 with probability 1 - gamma, a uniformly perturbed block otherwise. A
// reads (y, b) over the side channel and answers b xor (x and y) repeated,
// so every block satisfies the CHSH rule exactly.
DevicePair cheating_low_entropy_pair(double gamma, std::uint64_t b0_seed, std::uint64_t seed);

// Name + parameters of a built-in strategy.
struct StrategySpec {
    std::string name = "honest_chsh";
    GameKind kind = GameKind::chsh;  // for deterministic / all_zeros / shared_random_bit
    std::vector<int> truth_a;        // deterministic
    std::vector<int> truth_b;
    double gamma = 0.0;              // cheating
    std::uint64_t b0_seed = 0;       // cheating
};

// Known names: honest_chsh, honest_extended, deterministic, all_zeros,
// shared_random_bit, cheating. Throws std::invalid_argument otherwise.
DevicePair make_pair(const StrategySpec& spec, std::uint64_t seed);
std::vector<std::string> strategy_names();

} // namespace dirand::devices
