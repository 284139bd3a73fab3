#pragma once

#include "dirand/referee.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dirand::analysis {

// Explicit finite distribution over equal-length bit strings.
class Distribution {
public:
    Distribution() = default;
    // Throws std::invalid_argument unless labels are distinct equal-length
    // 0/1 strings and the probabilities are nonnegative and sum to 1 within
    // 1e-12. An empty support is representable but carries no entropy.
    Distribution(std::vector<std::string> support, std::vector<double> probabilities);

    // Labels are the binary expansions of 0..n-1, zero-padded.
    static Distribution from_probabilities(std::vector<double> probabilities);
    static Distribution uniform(std::size_t bits);
    static Distribution point_mass(std::string label);

    std::size_t size() const noexcept { return probabilities_.size(); }
    bool empty() const noexcept { return probabilities_.empty(); }
    std::span<const std::string> support() const noexcept { return support_; }
    std::span<const double> probabilities() const noexcept { return probabilities_; }
    // 0 for labels outside the support.
    double probability(const std::string& label) const noexcept;

private:
    std::vector<std::string> support_;
    std::vector<double> probabilities_;
};

// -log2 max_x p(x). Throws std::invalid_argument on an empty support.
double min_entropy(const Distribution& d);

// Half the l1 distance, over the union of supports.
double statistical_distance(const Distribution& p, const Distribution& q);

// Smallest cap lambda with sum_x max(p(x) - lambda, 0) <= eps. The mass
// above the cap can be moved onto fresh symbols each below the cap, so this
// is the best achievable max-probability within statistical distance eps.
double smoothing_cap(const Distribution& d, double eps);

// -log2 smoothing_cap(d, eps). Throws std::invalid_argument unless
// 0 <= eps < 1 and the support is nonempty.
double smooth_min_entropy(const Distribution& d, double eps);

struct SmoothcapWitness {
    std::vector<std::string> members;
    double mass = 0.0;
};

// When smooth_min_entropy(d, eps) <= alpha: the set {x : p(x) >= 2^-alpha},
// whose mass is at least eps. Absent otherwise.
std::optional<SmoothcapWitness> smoothcap_witness(const Distribution& d, double eps, double alpha);

// CHSH success under uniform inputs for deterministic truth tables
// f(0), f(1) on each side.
double chsh_success(const std::array<int, 2>& truth_a, const std::array<int, 2>& truth_b) noexcept;

struct ClassicalOptimum {
    double value = 0.0;
    // Every (truth_a, truth_b) reaching the optimum.
    std::vector<std::pair<std::array<int, 2>, std::array<int, 2>>> argmax;
};

// Exhaustive over the 16 deterministic strategy pairs.
ClassicalOptimum classical_chsh_optimum();

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

inline constexpr double kWilsonZ95 = 1.959963984540054;

// Wilson score interval; [0, 1] when trials == 0.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kWilsonZ95) noexcept;

struct InputPairStats {
    bool bell = false;
    std::string x;
    std::string y;
    std::size_t blocks = 0;
    std::size_t passed_blocks = 0;
    std::uint64_t rounds = 0;
    std::uint64_t mismatches = 0;
    double mismatch_rate = 0.0;
    WilsonInterval ci;
};

struct TranscriptStats {
    std::string protocol;
    std::size_t blocks_executed = 0;
    std::size_t bell_blocks = 0;
    std::size_t non_bell_blocks = 0;
    std::size_t passed_blocks = 0;
    bool accepted = false;
    // Sorted by (bell, x, y).
    std::vector<InputPairStats> rows;
};

// Mismatches are the stored per-block counts: against x and y for protocol
// A, d_H(a, b) for protocol B.
TranscriptStats transcript_stats(const referee::Transcript& t);

nlohmann::ordered_json to_json(const TranscriptStats& s);
// bell,x,y,blocks,passed_blocks,rounds,mismatches,mismatch_rate,ci_low,ci_high
std::string stats_csv(const TranscriptStats& s);

} // namespace dirand::analysis
