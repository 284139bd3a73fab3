#pragma once

#include "dirand/analysis.hpp"
#include "dirand/bitvec.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

// The t-XOR extractor: each output bit is the parity of t input positions,
// the positions being read off the seed through a weak design.
namespace dirand::extractor {

// r subsets of [s], each of size set_size, with
// sum_{i<j} 2^{|S_i cap S_j|} <= rho (r - 1) for every j.
struct WeakDesign {
    std::size_t s = 0;
    std::size_t set_size = 0;
    std::size_t r = 0;
    double rho = 1.25;
    std::vector<std::vector<std::uint32_t>> sets;  // each sorted ascending
};

class DesignConstructionError : public std::runtime_error {
public:
    DesignConstructionError(std::size_t violating_set, std::uint64_t weight, double bound);
    std::size_t violating_set() const noexcept { return violating_set_; }

private:
    std::size_t violating_set_;
};

// sum_{i<j} 2^{|S_i cap S_j|}, saturating at UINT64_MAX.
std::uint64_t overlap_weight(const WeakDesign& design, std::size_t j);

// First j whose overlap weight exceeds rho (r - 1), or any structural defect
// (wrong set count or size, unsorted or out-of-range elements) reported as
// the offending set. Empty result means the design is valid.
std::optional<std::size_t> find_design_violation(const WeakDesign& design);

// Greedy: sets are built one element at a time, each step taking the element
// (lowest index on ties) that adds the least overlap weight against earlier
// sets. Throws DesignConstructionError naming the first set that cannot meet
// the bound within s_budget, std::invalid_argument on bad parameters.
WeakDesign build_weak_design(std::size_t r, std::size_t set_size, double rho, std::size_t s_budget);

nlohmann::ordered_json to_json(const WeakDesign& design);
// Re-checks the overlap invariant; throws std::invalid_argument if violated.
WeakDesign design_from_json(const nlohmann::ordered_json& j);

struct ExtractorParams {
    std::size_t m = 0;  // input length, a power of two
    std::size_t t = 0;  // XOR arity
    std::size_t r = 0;  // output length
    WeakDesign design;  // set_size = t log2 m

    std::size_t index_bits() const noexcept;
    std::size_t seed_length() const noexcept { return design.s; }
    void validate() const;
};

// Builds the design with rho (default 5/4) inside s_budget seed bits.
ExtractorParams make_extractor_params(std::size_t m, std::size_t t, std::size_t r, std::size_t s_budget,
                                      double rho = 1.25);

// XOR of x at the given positions, with multiplicity.
bool txor_bit(const BitVector& x, std::span<const std::uint32_t> indices);

// For each design set: the seed bits at its positions (ascending), cut into t
// chunks of log2 m bits, each read MSB-first as an index into [m]. Chunks may
// repeat.
std::vector<std::vector<std::uint32_t>> seed_to_subsets(const BitVector& seed, const ExtractorParams& params);

// Turns decoded chunk indices into a t-element subset: a repeated index moves
// to the next unused position mod m. Uses no extra seed.
std::vector<std::uint32_t> distinct_subset(std::span<const std::uint32_t> indices, std::size_t m);

// Bit i = parity of x over distinct_subset(seed_to_subsets(seed)[i]).
BitVector extract(const BitVector& x, const BitVector& seed, const ExtractorParams& params);

// Exact statistical distance between (seed, extract(x, seed)) and
// (seed, uniform), seed uniform and x drawn from `source` (labels are m-bit
// strings). Throws std::invalid_argument when m > 14 or 2^s * |support| > 2^30.
double strong_extractor_distance(const analysis::Distribution& source, const ExtractorParams& params);

// All t-element subsets of [m] in lexicographic order.
std::vector<std::vector<std::uint32_t>> all_t_subsets(std::size_t m, std::size_t t);

using TxorPredictions = std::map<std::vector<std::uint32_t>, bool>;

struct ListDecodeResult {
    // Every x whose encoding agrees with >= 1/2 + eta of the predictions,
    // in lexicographic order.
    std::vector<BitVector> matches;
    // Greedy radius-delta representatives of `matches`, highest agreement
    // first; every match lies within delta of some candidate.
    std::vector<BitVector> candidates;
    double delta = 0.0;       // min(1, ln(2/eta) / t)
    double list_bound = 0.0;  // 4 / eta^2
};

// Brute force over all 2^m strings. Requires m <= 16 and
// 2 t^2 / 2^m < eta <= 1/2; throws std::invalid_argument otherwise.
ListDecodeResult list_decode_txor(const TxorPredictions& predictions, double eta, std::size_t m, std::size_t t);

} // namespace dirand::extractor
