#include "dirand/guessing.hpp"

#include "dirand/parallel.hpp"
#include "dirand/rng.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace dirand::guessing {

using devices::InputSymbol;

double lemma3_bound(double gamma, double beta) {
    if (gamma < 0.0 || beta < 0.0) throw std::invalid_argument("lemma3_bound: gamma and beta must be nonnegative");
    return 0.5 + (0.25 - 2.0 * beta - gamma);
}

void GuessingGameConfig::validate() const {
    if (k == 0) throw std::invalid_argument("guessing game: k must be positive");
    if (trials == 0) throw std::invalid_argument("guessing game: trials must be positive");
    if (!(decision_radius > 0.16 && decision_radius < 0.34))
        throw std::invalid_argument("guessing game: decision radius must lie in (0.16, 0.34)");
    if (b0 && b0->size() != k) throw std::invalid_argument("guessing game: b0 must have k bits");
    if (!b0 && calibration_samples == 0) throw std::invalid_argument("guessing game: calibration needs samples");
}

BitVector calibrate_b0(devices::DevicePair& pair, std::size_t k, std::size_t samples) {
    if (samples == 0) throw std::invalid_argument("calibrate_b0: samples must be positive");
    std::map<BitVector, std::size_t> counts;
    for (std::size_t i = 0; i < samples; ++i) {
        auto [a, b] = pair.play_block(InputSymbol::chsh(0), InputSymbol::chsh(0), k);
        ++counts[std::move(b)];
    }
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it)
        if (it->second > best->second) best = it;
    return best->first;
}

GuessingGameResult run_guessing_game(const PairFactory& make_pair, const GuessingGameConfig& config,
                                     std::uint64_t master_seed) {
    config.validate();
    GuessingGameResult result;
    if (config.b0) {
        result.b0 = *config.b0;
    } else {
        auto pair = make_pair(derive_seed(master_seed, "guess.calibrate"));
        result.b0 = calibrate_b0(pair, config.k, config.calibration_samples);
    }

    struct Outcome {
        std::uint8_t y = 0;
        std::uint8_t success = 0;
    };
    std::vector<Outcome> outcomes(config.trials);
    const BitVector& b0 = result.b0;
    parallel_for(config.trials, config.threads, [&](std::size_t trial) {
        auto pair = make_pair(derive_seed(master_seed, "guess.pair", trial));
        Xoshiro256 coins = make_stream(master_seed, "guess.trial", trial);
        const std::uint64_t draw = coins();
        const int y = static_cast<int>(draw & 1U);
        const int x = static_cast<int>((draw >> 1) & 1U);
        auto [a, b] = pair.play_block(InputSymbol::chsh(x), InputSymbol::chsh(y), config.k);
        const int claim = relative_hamming_distance(a, b0) < config.decision_radius ? 0 : 1;
        outcomes[trial] = Outcome{static_cast<std::uint8_t>(y), static_cast<std::uint8_t>(claim == y)};
    });

    for (const auto& o : outcomes) {
        result.trials_by_y[o.y] += 1;
        result.successes_by_y[o.y] += o.success;
        result.successes += o.success;
    }
    result.trials = config.trials;
    result.estimate = static_cast<double>(result.successes) / static_cast<double>(result.trials);
    result.wilson_ci = analysis::wilson_interval(result.successes, result.trials);
    return result;
}

bool triangle_core_holds(const BitVector& a0, const BitVector& a1, const BitVector& b) {
    const double d0 = relative_hamming_distance(a0, b);
    const double d1 = relative_hamming_distance(a1, b);
    if (!(d0 <= 0.16 && d1 >= 0.84)) return true;
    return relative_hamming_distance(a0, a1) >= 0.68 - 1e-12;
}

nlohmann::ordered_json to_json(const GuessingGameResult& r) {
    nlohmann::ordered_json j;
    j["trials"] = r.trials;
    j["successes"] = r.successes;
    j["estimate"] = r.estimate;
    j["wilson95"] = {r.wilson_ci.low, r.wilson_ci.high};
    if (r.bound) j["bound"] = *r.bound;
    else j["bound"] = nullptr;
    j["b0"] = r.b0.to_hex();
    j["trials_by_y"] = r.trials_by_y;
    j["successes_by_y"] = r.successes_by_y;
    return j;
}

} // namespace dirand::guessing
