#include "dirand/referee.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dirand::referee {

using devices::Extended;
using devices::GameKind;
using devices::InputSymbol;

namespace {

// Slack for comparing integer counts against real multiples of k.
constexpr double kCountSlack = 1e-9;

double log2_squared(std::uint64_t ell) {
    const double l = std::log2(static_cast<double>(ell));
    return l * l;
}

} // namespace

std::size_t default_block_length(std::uint64_t ell) {
    if (ell < 2) throw std::invalid_argument("ell must be at least 2");
    return static_cast<std::size_t>(std::ceil(10.0 * log2_squared(ell) - kCountSlack));
}

std::size_t mismatch_threshold(double fraction, std::size_t k) {
    return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(k) - kCountSlack));
}

double binary_entropy(double p) noexcept {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

void ProtocolAParams::validate() const {
    if (ell < 2) throw std::invalid_argument("protocol A: ell must be at least 2");
    if (delta < 1) throw std::invalid_argument("protocol A: delta must be positive");
    if (k_override && *k_override == 0) throw std::invalid_argument("protocol A: k must be positive");
    const double p = bell_p();
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("protocol A: bell probability must be in (0, 1]");
    if (!(mismatch_threshold_fraction > 0.0 && mismatch_threshold_fraction < 0.25))
        throw std::invalid_argument("protocol A: mismatch threshold fraction must be in (0, 1/4)");
}

ProtocolAParams asymptotic_preset_a(std::uint64_t n, double eps, double c, std::uint64_t seed) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("preset: eps must be in (0, 1)");
    if (!(c > 1.0)) throw std::invalid_argument("preset: C must exceed 1");
    ProtocolAParams p;
    p.delta = 1000 * static_cast<std::uint64_t>(std::ceil(std::log2(1.0 / eps) - kCountSlack));
    p.ell = static_cast<std::uint64_t>(std::ceil(c * static_cast<double>(n)));
    p.seed = seed;
    return p;
}

std::size_t ProtocolBParams::m() const {
    if (m_override) return *m_override;
    return static_cast<std::size_t>(
        std::ceil(static_cast<double>(c) * static_cast<double>(ell) * log2_squared(ell) - kCountSlack));
}

void ProtocolBParams::validate() const {
    if (ell < 2) throw std::invalid_argument("protocol B: ell must be at least 2");
    if (c < 1 && !m_override) throw std::invalid_argument("protocol B: C must be positive");
    if (k_override && *k_override == 0) throw std::invalid_argument("protocol B: k must be positive");
    if (m_override && *m_override == 0) throw std::invalid_argument("protocol B: m must be positive");
    const double p = bell_p();
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("protocol B: bell probability must be in (0, 1]");
    if (!(window_low >= 0.0 && window_low < 0.5 && window_high > 0.5 && window_high <= 1.0))
        throw std::invalid_argument("protocol B: window must satisfy 0 <= low < 0.5 < high <= 1");
    if (!(mismatch_threshold_fraction > 0.0 && mismatch_threshold_fraction < 0.25))
        throw std::invalid_argument("protocol B: mismatch threshold fraction must be in (0, 1/4)");
}

std::size_t Transcript::k() const {
    return std::visit([](const auto& p) { return p.k(); }, params);
}

std::size_t Transcript::m() const {
    return std::visit([](const auto& p) { return p.m(); }, params);
}

std::vector<std::size_t> select_bell_blocks(std::size_t m, double p, BitSource& source) {
    std::vector<std::size_t> bell;
    for (std::size_t i = 0; i < m; ++i)
        if (source.bernoulli(p)) bell.push_back(i);
    return bell;
}

BlockVerdict judge_block_a(const ProtocolAParams& params, InputSymbol x, InputSymbol y, const BitVector& a,
                           const BitVector& b) {
    const std::size_t k = params.k();
    if (a.size() != k || b.size() != k) throw std::invalid_argument("block outputs must have k bits");
    std::size_t mismatches = hamming_distance(a, b);
    if (x.value && y.value) mismatches = k - mismatches;
    return {mismatches, mismatches <= params.threshold()};
}

BlockVerdict judge_block_b(const ProtocolBParams& params, InputSymbol x, InputSymbol y, const BitVector& a,
                           const BitVector& b) {
    const std::size_t k = params.k();
    if (a.size() != k || b.size() != k) throw std::invalid_argument("block outputs must have k bits");
    const std::size_t d = hamming_distance(a, b);
    const double kd = static_cast<double>(k);
    const double count = static_cast<double>(d);
    const bool equal_rule = d == 0 && x == y;
    const bool b0_rule = count <= params.mismatch_threshold_fraction * kd + kCountSlack &&
                         y == InputSymbol::extended(Extended::b0);
    const bool window_rule = count >= params.window_low * kd - kCountSlack &&
                             count <= params.window_high * kd + kCountSlack &&
                             x == InputSymbol::extended(Extended::a1) && y == InputSymbol::extended(Extended::a0);
    return {d, equal_rule || b0_rule || window_rule};
}

namespace {

template <class Params, class PickInputs, class Judge>
Transcript run_blocks(const Params& params, devices::DevicePair& pair, GameKind kind, PickInputs pick,
                      Judge judge) {
    params.validate();
    if (pair.kind() != kind)
        throw devices::GameKindError("protocol needs a " + std::string(devices::to_string(kind)) +
                                     " device pair, got " + std::string(devices::to_string(pair.kind())));
    Transcript t;
    t.params = params;
    t.strategy = pair.name();
    BitSource source(make_stream(params.seed, "referee"));
    const std::size_t m = params.m();
    const std::size_t k = params.k();
    t.bell_set = select_bell_blocks(m, params.bell_p(), source);

    std::size_t next_bell = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const bool is_bell = next_bell < t.bell_set.size() && t.bell_set[next_bell] == i;
        if (is_bell) ++next_bell;
        const auto [x, y] = pick(is_bell, source);
        auto [a, b] = pair.play_block(x, y, k);
        const BlockVerdict v = judge(params, x, y, a, b);
        t.blocks.push_back(BlockRecord{i, is_bell, x, y, std::move(a), std::move(b), v.mismatch_count, v.passed});
        if (!v.passed) {
            t.first_failure = i;
            break;
        }
    }
    t.accepted = !t.first_failure.has_value();
    t.randomness.raw_bits_drawn = source.bits_drawn();
    t.randomness.shannon_bits = randomness_accounting(t).shannon_bits;
    return t;
}

} // namespace

Transcript run_protocol_a(const ProtocolAParams& params, devices::DevicePair& pair) {
    const auto pick = [](bool is_bell, BitSource& source) {
        if (!is_bell) return std::pair{InputSymbol::chsh(0), InputSymbol::chsh(0)};
        const int x = source.next_bit();
        const int y = source.next_bit();
        return std::pair{InputSymbol::chsh(x), InputSymbol::chsh(y)};
    };
    return run_blocks(params, pair, GameKind::chsh, pick, judge_block_a);
}

Transcript run_protocol_b(const ProtocolBParams& params, devices::DevicePair& pair) {
    const auto pick = [](bool is_bell, BitSource& source) {
        const auto a0 = InputSymbol::extended(Extended::a0);
        if (!is_bell) return std::pair{a0, a0};
        const bool xbit = source.next_bit();
        const bool ybit = source.next_bit();
        return std::pair{xbit ? InputSymbol::extended(Extended::a1) : a0,
                         ybit ? InputSymbol::extended(Extended::b0) : a0};
    };
    return run_blocks(params, pair, GameKind::extended, pick, judge_block_b);
}

RandomnessCost randomness_accounting(const Transcript& transcript) {
    const double p = std::visit([](const auto& params) { return params.bell_p(); }, transcript.params);
    const auto executed_bell = static_cast<double>(
        std::count_if(transcript.blocks.begin(), transcript.blocks.end(), [](const BlockRecord& r) { return r.is_bell; }));
    RandomnessCost cost;
    cost.shannon_bits = static_cast<double>(transcript.m()) * binary_entropy(p) + 2.0 * executed_bell;
    cost.raw_bits_drawn = transcript.randomness.raw_bits_drawn;
    return cost;
}

std::vector<std::string> verify_transcript(const Transcript& t) {
    std::vector<std::string> issues;
    const auto note = [&](std::string s) { issues.push_back(std::move(s)); };
    const std::size_t m = t.m();
    const std::size_t k = t.k();
    const bool is_a = t.is_protocol_a();

    if (!std::is_sorted(t.bell_set.begin(), t.bell_set.end()) ||
        std::adjacent_find(t.bell_set.begin(), t.bell_set.end()) != t.bell_set.end())
        note("bell set is not strictly increasing");
    if (!t.bell_set.empty() && t.bell_set.back() >= m) note("bell set contains an index >= m");
    if (t.blocks.size() > m) note("more block records than blocks");

    bool all_passed = true;
    for (std::size_t i = 0; i < t.blocks.size(); ++i) {
        const BlockRecord& r = t.blocks[i];
        const std::string where = "block " + std::to_string(i) + ": ";
        if (r.index != i) note(where + "index out of sequence");
        const bool in_t = std::binary_search(t.bell_set.begin(), t.bell_set.end(), r.index);
        if (in_t != r.is_bell) note(where + "bell flag disagrees with bell set");
        if (r.a.size() != k || r.b.size() != k) {
            note(where + "outputs do not have k bits");
            continue;
        }
        const GameKind kind = is_a ? GameKind::chsh : GameKind::extended;
        if (r.x.kind != kind || r.y.kind != kind) note(where + "input symbols of the wrong game kind");
        if (is_a) {
            if (!r.is_bell && (r.x.value != 0 || r.y.value != 0)) note(where + "non-Bell block with inputs other than (0,0)");
        } else {
            const auto a0 = InputSymbol::extended(Extended::a0);
            const auto a1 = InputSymbol::extended(Extended::a1);
            const auto b0 = InputSymbol::extended(Extended::b0);
            if (!r.is_bell && (r.x != a0 || r.y != a0)) note(where + "non-Bell block with inputs other than (A0,A0)");
            if (r.is_bell && ((r.x != a0 && r.x != a1) || (r.y != a0 && r.y != b0)))
                note(where + "Bell block inputs outside {A0,A1} x {A0,B0}");
        }
        const BlockVerdict v = is_a ? judge_block_a(std::get<ProtocolAParams>(t.params), r.x, r.y, r.a, r.b)
                                    : judge_block_b(std::get<ProtocolBParams>(t.params), r.x, r.y, r.a, r.b);
        if (v.mismatch_count != r.mismatch_count) note(where + "stored mismatch count disagrees with outputs");
        if (v.passed != r.passed) note(where + "stored verdict disagrees with outputs");
        if (!r.passed) {
            all_passed = false;
            if (i + 1 != t.blocks.size()) note(where + "records continue after a failed block");
            if (t.first_failure != r.index) note(where + "first_failure does not point at the failed block");
        }
    }
    if (all_passed && t.first_failure) note("first_failure set but every block passed");
    if (t.accepted != (all_passed && t.blocks.size() == m)) note("accepted flag disagrees with block verdicts");
    const RandomnessCost cost = randomness_accounting(t);
    if (std::abs(cost.shannon_bits - t.randomness.shannon_bits) > 1e-6 * std::max(1.0, cost.shannon_bits))
        note("shannon randomness cost disagrees with params and blocks");
    if (static_cast<double>(t.randomness.raw_bits_drawn) + 1e-9 < t.randomness.shannon_bits)
        note("raw bits drawn below the shannon cost");
    return issues;
}

} // namespace dirand::referee
