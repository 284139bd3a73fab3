#include "dirand/devices.hpp"

#include "dirand/kernels.hpp"

#include <array>
#include <numbers>
#include <stdexcept>

namespace dirand::devices {

using quantum::MeasurementAngle;
using quantum::Qubit;

std::string_view to_string(GameKind kind) noexcept {
    return kind == GameKind::chsh ? "chsh" : "extended";
}

std::string InputSymbol::name() const {
    if (kind == GameKind::chsh) return value ? "1" : "0";
    static constexpr std::array<const char*, 4> names{"A0", "A1", "B0", "B1"};
    return names[value & 3U];
}

InputSymbol InputSymbol::parse(std::string_view text) {
    if (text == "0") return chsh(0);
    if (text == "1") return chsh(1);
    if (text == "A0") return extended(Extended::a0);
    if (text == "A1") return extended(Extended::a1);
    if (text == "B0") return extended(Extended::b0);
    if (text == "B1") return extended(Extended::b1);
    throw std::invalid_argument("unknown input symbol '" + std::string(text) + "'");
}

BitVector Endpoint::respond_block(InputSymbol input, std::size_t k) {
    if (input.kind != kind_)
        throw GameKindError("input symbol of kind " + std::string(to_string(input.kind)) +
                            " sent to a " + std::string(to_string(kind_)) + " box");
    if (k == 0) throw std::invalid_argument("block length must be positive");
    return do_respond(input, k);
}

DevicePair::DevicePair(std::string name, GameKind kind, bool signaling, std::unique_ptr<Endpoint> a,
                       std::unique_ptr<Endpoint> b)
    : name_(std::move(name)), kind_(kind), signaling_(signaling), a_(std::move(a)), b_(std::move(b)) {
    if (!a_ || !b_) throw std::invalid_argument("device pair needs two endpoints");
    if (a_->kind() != kind || b_->kind() != kind)
        throw GameKindError("endpoint game kind does not match the pair");
}

std::pair<BitVector, BitVector> DevicePair::play_block(InputSymbol x, InputSymbol y, std::size_t k) {
    BitVector b = b_->respond_block(y, k);
    BitVector a = a_->respond_block(x, k);
    return {std::move(a), std::move(b)};
}

MeasurementAngle honest_chsh_angle_a(int x) noexcept {
    return MeasurementAngle(x ? std::numbers::pi / 4 : 0.0);
}

// y=1 uses -pi/8 rather than 3pi/8: same basis with outcome labels swapped,
// which keeps the success probability at cos^2(pi/8) on every input pair
// under this outcome convention.
MeasurementAngle honest_chsh_angle_b(int y) noexcept {
    return MeasurementAngle(y ? -std::numbers::pi / 8 : std::numbers::pi / 8);
}

MeasurementAngle honest_extended_angle(Extended input) noexcept {
    switch (input) {
    case Extended::a0: return MeasurementAngle(0.0);
    case Extended::a1: return MeasurementAngle(std::numbers::pi / 4);
    case Extended::b0: return MeasurementAngle(std::numbers::pi / 8);
    case Extended::b1: return MeasurementAngle(-std::numbers::pi / 8);
    }
    return MeasurementAngle(0.0);
}

namespace {

// The k EPR pairs of the current block. Whichever box measures first draws
// fresh pairs and leaves the other qubits collapsed; the second box measures
// those. This is the only state the two honest boxes share.
class EprLink {
public:
    BitVector measure(Qubit side, MeasurementAngle theta, std::size_t k, Xoshiro256& local,
                      std::vector<double>& scratch) {
        scratch.resize(k);
        local.fill_uniform(scratch);
        BitVector out(k);
        auto words = out.mutable_words();
        const auto& kt = kernels::active();
        if (!pending_) {
            const auto collapse = quantum::measure_qubit(quantum::epr_pair(), side, theta);
            kt.threshold_bits(scratch.data(), collapse.p0, k, words.data());
            pending_ = Pending{side, k, collapse, out};
            return out;
        }
        if (pending_->side == side)
            throw LockstepError("box answered twice in one round without its partner");
        if (pending_->k != k)
            throw LockstepError("partner boxes were driven with different block lengths");
        const double q0 = quantum::probability_zero(pending_->collapse.remaining[0], theta);
        const double q1 = quantum::probability_zero(pending_->collapse.remaining[1], theta);
        kt.select_threshold_bits(scratch.data(), pending_->outcomes.words().data(), q0, q1, k,
                                 words.data());
        pending_.reset();
        return out;
    }

private:
    struct Pending {
        Qubit side;
        std::size_t k;
        quantum::Collapse collapse;
        BitVector outcomes;
    };
    std::optional<Pending> pending_;
};

class QuantumEndpoint final : public Endpoint {
public:
    QuantumEndpoint(GameKind kind, Qubit side, std::shared_ptr<EprLink> link, Xoshiro256 local)
        : Endpoint(kind), side_(side), link_(std::move(link)), local_(local) {}

protected:
    BitVector do_respond(InputSymbol input, std::size_t k) override {
        return link_->measure(side_, angle(input), k, local_, scratch_);
    }

private:
    MeasurementAngle angle(InputSymbol input) const noexcept {
        if (kind() == GameKind::extended) return honest_extended_angle(static_cast<Extended>(input.value));
        return side_ == Qubit::a ? honest_chsh_angle_a(input.value) : honest_chsh_angle_b(input.value);
    }

    Qubit side_;
    std::shared_ptr<EprLink> link_;
    Xoshiro256 local_;
    std::vector<double> scratch_;
};

DevicePair make_quantum_pair(std::string name, GameKind kind, std::uint64_t seed) {
    auto link = std::make_shared<EprLink>();
    return DevicePair(std::move(name), kind, false,
                      std::make_unique<QuantumEndpoint>(kind, Qubit::a, link, make_stream(seed, "endpoint.a")),
                      std::make_unique<QuantumEndpoint>(kind, Qubit::b, link, make_stream(seed, "endpoint.b")));
}

class DeterministicEndpoint final : public Endpoint {
public:
    DeterministicEndpoint(GameKind kind, std::vector<int> truth) : Endpoint(kind), truth_(std::move(truth)) {}

protected:
    BitVector do_respond(InputSymbol input, std::size_t k) override {
        return BitVector(k, truth_.at(input.value) != 0);
    }

private:
    std::vector<int> truth_;
};

void check_truth_table(GameKind kind, const std::vector<int>& truth) {
    if (truth.size() != InputSymbol::alphabet_size(kind))
        throw std::invalid_argument("deterministic strategy needs one output per input symbol (" +
                                    std::to_string(InputSymbol::alphabet_size(kind)) + ")");
    for (int v : truth)
        if (v != 0 && v != 1) throw std::invalid_argument("deterministic strategy outputs must be 0 or 1");
}

// Each box holds its own copy of the shared stream and advances it in step.
class SharedBitEndpoint final : public Endpoint {
public:
    SharedBitEndpoint(GameKind kind, Xoshiro256 shared) : Endpoint(kind), shared_(shared) {}

protected:
    BitVector do_respond(InputSymbol, std::size_t k) override {
        std::vector<std::uint64_t> words(kernels::words_for_bits(k));
        for (auto& w : words) w = shared_();
        return BitVector::from_words(std::move(words), k);
    }

private:
    Xoshiro256 shared_;
};

BitVector random_block(Xoshiro256& rng, std::size_t k) {
    std::vector<std::uint64_t> words(kernels::words_for_bits(k));
    for (auto& w : words) w = rng();
    return BitVector::from_words(std::move(words), k);
}

// Out-of-band wire from B to A; exists only in the signaling demo pair.
struct SideChannel {
    std::optional<std::pair<InputSymbol, BitVector>> posted;
};

class CheatingBobEndpoint final : public Endpoint {
public:
    CheatingBobEndpoint(double gamma, std::uint64_t b0_seed, std::shared_ptr<SideChannel> wire, Xoshiro256 local)
        : Endpoint(GameKind::chsh), gamma_(gamma), b0_seed_(b0_seed), wire_(std::move(wire)), local_(local) {}

protected:
    BitVector do_respond(InputSymbol input, std::size_t k) override {
        if (wire_->posted) throw LockstepError("cheating box B answered twice before A");
        if (b0_.size() != k) b0_ = cheating_b0(b0_seed_, k);
        BitVector out = b0_;
        if (local_.uniform01() < gamma_) out ^= random_block(local_, k);
        wire_->posted.emplace(input, out);
        return out;
    }

private:
    double gamma_;
    std::uint64_t b0_seed_;
    std::shared_ptr<SideChannel> wire_;
    Xoshiro256 local_;
    BitVector b0_;
};

class CheatingAliceEndpoint final : public Endpoint {
public:
    explicit CheatingAliceEndpoint(std::shared_ptr<SideChannel> wire)
        : Endpoint(GameKind::chsh), wire_(std::move(wire)) {}

protected:
    BitVector do_respond(InputSymbol input, std::size_t k) override {
        if (!wire_->posted) throw LockstepError("cheating box A needs B to answer first");
        auto [y, b] = std::move(*wire_->posted);
        wire_->posted.reset();
        if (b.size() != k) throw LockstepError("partner boxes were driven with different block lengths");
        if (input.value && y.value) b = ~b;
        return b;
    }

private:
    std::shared_ptr<SideChannel> wire_;
};

} // namespace

DevicePair honest_chsh_pair(std::uint64_t seed) {
    return make_quantum_pair("honest_chsh", GameKind::chsh, seed);
}

DevicePair honest_extended_pair(std::uint64_t seed) {
    return make_quantum_pair("honest_extended", GameKind::extended, seed);
}

DevicePair classical_deterministic_pair(GameKind kind, std::vector<int> truth_a, std::vector<int> truth_b) {
    check_truth_table(kind, truth_a);
    check_truth_table(kind, truth_b);
    return DevicePair("deterministic", kind, false,
                      std::make_unique<DeterministicEndpoint>(kind, std::move(truth_a)),
                      std::make_unique<DeterministicEndpoint>(kind, std::move(truth_b)));
}

DevicePair all_zeros_pair(GameKind kind) {
    const std::vector<int> zeros(InputSymbol::alphabet_size(kind), 0);
    return DevicePair("all_zeros", kind, false, std::make_unique<DeterministicEndpoint>(kind, zeros),
                      std::make_unique<DeterministicEndpoint>(kind, zeros));
}

DevicePair shared_random_bit_pair(GameKind kind, std::uint64_t seed) {
    const Xoshiro256 shared = make_stream(seed, "endpoint.shared");
    return DevicePair("shared_random_bit", kind, false, std::make_unique<SharedBitEndpoint>(kind, shared),
                      std::make_unique<SharedBitEndpoint>(kind, shared));
}

BitVector cheating_b0(std::uint64_t b0_seed, std::size_t k) {
    Xoshiro256 rng = make_stream(b0_seed, "cheating.b0");
    return random_block(rng, k);
}

DevicePair cheating_low_entropy_pair(double gamma, std::uint64_t b0_seed, std::uint64_t seed) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("cheating pair needs 0 <= gamma < 1");
    auto wire = std::make_shared<SideChannel>();
    return DevicePair("cheating", GameKind::chsh, true, std::make_unique<CheatingAliceEndpoint>(wire),
                      std::make_unique<CheatingBobEndpoint>(gamma, b0_seed, wire, make_stream(seed, "endpoint.b")));
}

DevicePair make_pair(const StrategySpec& spec, std::uint64_t seed) {
    if (spec.name == "honest_chsh") return honest_chsh_pair(seed);
    if (spec.name == "honest_extended") return honest_extended_pair(seed);
    if (spec.name == "deterministic") return classical_deterministic_pair(spec.kind, spec.truth_a, spec.truth_b);
    if (spec.name == "all_zeros") return all_zeros_pair(spec.kind);
    if (spec.name == "shared_random_bit") return shared_random_bit_pair(spec.kind, seed);
    if (spec.name == "cheating") return cheating_low_entropy_pair(spec.gamma, spec.b0_seed, seed);
    throw std::invalid_argument("unknown strategy '" + spec.name + "'");
}

std::vector<std::string> strategy_names() {
    return {"honest_chsh", "honest_extended", "deterministic", "all_zeros", "shared_random_bit", "cheating"};
}

} // namespace dirand::devices
