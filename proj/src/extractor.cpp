#include "dirand/extractor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace dirand::extractor {

namespace {

constexpr std::size_t kMaxSetSize = 62;

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) noexcept {
    return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

std::size_t intersection_size(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::size_t n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

long double weight_bound(const WeakDesign& d) {
    return static_cast<long double>(d.rho) * static_cast<long double>(d.r - 1);
}

} // namespace

DesignConstructionError::DesignConstructionError(std::size_t violating_set, std::uint64_t weight, double bound)
    : std::runtime_error("weak design construction failed at set " + std::to_string(violating_set) +
                         ": overlap weight " + std::to_string(weight) + " exceeds rho*(r-1) = " +
                         std::to_string(bound)),
      violating_set_(violating_set) {}

std::uint64_t overlap_weight(const WeakDesign& design, std::size_t j) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < j; ++i)
        total = saturating_add(total, std::uint64_t{1} << intersection_size(design.sets[i], design.sets[j]));
    return total;
}

std::optional<std::size_t> find_design_violation(const WeakDesign& design) {
    if (design.sets.size() != design.r) return 0;
    for (std::size_t j = 0; j < design.r; ++j) {
        const auto& set = design.sets[j];
        if (set.size() != design.set_size) return j;
        if (!std::is_sorted(set.begin(), set.end()) || std::adjacent_find(set.begin(), set.end()) != set.end())
            return j;
        if (!set.empty() && set.back() >= design.s) return j;
        if (static_cast<long double>(overlap_weight(design, j)) > weight_bound(design)) return j;
    }
    return std::nullopt;
}

WeakDesign build_weak_design(std::size_t r, std::size_t set_size, double rho, std::size_t s_budget) {
    if (r == 0) throw std::invalid_argument("weak design: r must be positive");
    if (set_size == 0 || set_size > kMaxSetSize)
        throw std::invalid_argument("weak design: set size must be in [1, 62]");
    if (!(rho > 1.0)) throw std::invalid_argument("weak design: rho must exceed 1");
    if (s_budget < set_size) throw std::invalid_argument("weak design: seed budget smaller than the set size");
    if (s_budget > std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument("weak design: seed budget too large");

    WeakDesign d;
    d.s = s_budget;
    d.set_size = set_size;
    d.r = r;
    d.rho = rho;
    d.sets.reserve(r);
    std::vector<std::vector<std::uint32_t>> sets_of(s_budget);  // element -> earlier sets holding it

    for (std::size_t j = 0; j < r; ++j) {
        std::vector<std::size_t> overlap(j, 0);
        std::vector<bool> taken(s_budget, false);
        std::vector<std::uint32_t> set;
        set.reserve(set_size);
        for (std::size_t step = 0; step < set_size; ++step) {
            std::uint64_t best_cost = std::numeric_limits<std::uint64_t>::max();
            std::uint32_t best = 0;
            for (std::uint32_t e = 0; e < s_budget; ++e) {
                if (taken[e]) continue;
                // Adding e doubles 2^{overlap_i} for each earlier set i holding e.
                std::uint64_t cost = 0;
                for (std::uint32_t i : sets_of[e]) cost = saturating_add(cost, std::uint64_t{1} << overlap[i]);
                if (cost < best_cost) {
                    best_cost = cost;
                    best = e;
                    if (cost == 0) break;
                }
            }
            taken[best] = true;
            set.push_back(best);
            for (std::uint32_t i : sets_of[best]) ++overlap[i];
        }
        std::sort(set.begin(), set.end());
        for (std::uint32_t e : set) sets_of[e].push_back(static_cast<std::uint32_t>(j));
        d.sets.push_back(std::move(set));
        const std::uint64_t w = overlap_weight(d, j);
        if (static_cast<long double>(w) > weight_bound(d))
            throw DesignConstructionError(j, w, static_cast<double>(weight_bound(d)));
    }
    if (find_design_violation(d)) throw std::logic_error("weak design builder produced an invalid design");
    return d;
}

nlohmann::ordered_json to_json(const WeakDesign& design) {
    nlohmann::ordered_json j;
    j["schema"] = "dirand.design";
    j["version"] = 1;
    j["s"] = design.s;
    j["set_size"] = design.set_size;
    j["r"] = design.r;
    j["rho"] = design.rho;
    j["sets"] = design.sets;
    return j;
}

WeakDesign design_from_json(const nlohmann::ordered_json& j) {
    if (j.value("schema", std::string{}) != "dirand.design") throw std::invalid_argument("not a design document");
    if (j.value("version", 0) != 1) throw std::invalid_argument("unsupported design version");
    WeakDesign d;
    d.s = j.at("s").get<std::size_t>();
    d.set_size = j.at("set_size").get<std::size_t>();
    d.r = j.at("r").get<std::size_t>();
    d.rho = j.at("rho").get<double>();
    d.sets = j.at("sets").get<std::vector<std::vector<std::uint32_t>>>();
    if (d.set_size > kMaxSetSize) throw std::invalid_argument("design set size exceeds 62");
    if (const auto bad = find_design_violation(d))
        throw std::invalid_argument("design violates the weak-design condition at set " + std::to_string(*bad));
    return d;
}

std::size_t ExtractorParams::index_bits() const noexcept {
    return m == 0 ? 0 : static_cast<std::size_t>(std::countr_zero(m));
}

void ExtractorParams::validate() const {
    if (m < 2 || !std::has_single_bit(m)) throw std::invalid_argument("extractor: m must be a power of two >= 2");
    if (t == 0 || t > m) throw std::invalid_argument("extractor: t must be in [1, m]");
    if (r == 0) throw std::invalid_argument("extractor: r must be positive");
    if (design.r != r) throw std::invalid_argument("extractor: design has the wrong number of sets");
    if (design.set_size != t * index_bits()) throw std::invalid_argument("extractor: design set size must be t*log2(m)");
    if (find_design_violation(design)) throw std::invalid_argument("extractor: design violates the overlap bound");
}

ExtractorParams make_extractor_params(std::size_t m, std::size_t t, std::size_t r, std::size_t s_budget, double rho) {
    ExtractorParams p;
    p.m = m;
    p.t = t;
    p.r = r;
    if (m < 2 || !std::has_single_bit(m)) throw std::invalid_argument("extractor: m must be a power of two >= 2");
    if (t == 0 || t > m) throw std::invalid_argument("extractor: t must be in [1, m]");
    p.design = build_weak_design(r, t * p.index_bits(), rho, s_budget);
    p.validate();
    return p;
}

bool txor_bit(const BitVector& x, std::span<const std::uint32_t> indices) {
    bool parity = false;
    for (std::uint32_t i : indices) {
        if (i >= x.size()) throw std::out_of_range("txor_bit: index " + std::to_string(i) + " outside [m]");
        parity ^= x[i];
    }
    return parity;
}

std::vector<std::vector<std::uint32_t>> seed_to_subsets(const BitVector& seed, const ExtractorParams& params) {
    if (seed.size() != params.seed_length())
        throw std::invalid_argument("seed has " + std::to_string(seed.size()) + " bits, expected " +
                                    std::to_string(params.seed_length()));
    const std::size_t width = params.index_bits();
    std::vector<std::vector<std::uint32_t>> out;
    out.reserve(params.r);
    for (const auto& positions : params.design.sets) {
        std::vector<std::uint32_t> indices(params.t, 0);
        for (std::size_t c = 0; c < params.t; ++c) {
            std::uint32_t idx = 0;
            for (std::size_t b = 0; b < width; ++b) idx = (idx << 1) | (seed[positions[c * width + b]] ? 1U : 0U);
            indices[c] = idx;
        }
        out.push_back(std::move(indices));
    }
    return out;
}

std::vector<std::uint32_t> distinct_subset(std::span<const std::uint32_t> indices, std::size_t m) {
    if (indices.size() > m) throw std::invalid_argument("distinct_subset: more indices than positions");
    std::vector<bool> used(m, false);
    std::vector<std::uint32_t> out;
    out.reserve(indices.size());
    for (std::uint32_t idx : indices) {
        if (idx >= m) throw std::out_of_range("distinct_subset: index outside [m]");
        while (used[idx]) idx = static_cast<std::uint32_t>((idx + 1) % m);
        used[idx] = true;
        out.push_back(idx);
    }
    return out;
}

BitVector extract(const BitVector& x, const BitVector& seed, const ExtractorParams& params) {
    if (x.size() != params.m)
        throw std::invalid_argument("input has " + std::to_string(x.size()) + " bits, expected " + std::to_string(params.m));
    const auto subsets = seed_to_subsets(seed, params);
    BitVector out(params.r);
    for (std::size_t i = 0; i < params.r; ++i) out.set(i, txor_bit(x, distinct_subset(subsets[i], params.m)));
    return out;
}

double strong_extractor_distance(const analysis::Distribution& source, const ExtractorParams& params) {
    params.validate();
    if (params.m > 14) throw std::invalid_argument("strong_extractor_distance: m must be at most 14");
    if (params.r > 16) throw std::invalid_argument("strong_extractor_distance: r must be at most 16");
    const std::size_t s = params.seed_length();
    if (s > 30 || (std::uint64_t{1} << s) * std::max<std::size_t>(source.size(), 1) > (std::uint64_t{1} << 30))
        throw std::invalid_argument("strong_extractor_distance: instance too large to enumerate");

    std::vector<std::uint32_t> xs;
    xs.reserve(source.size());
    for (const auto& label : source.support()) {
        if (label.size() != params.m) throw std::invalid_argument("source labels must have m bits");
        std::uint32_t v = 0;
        for (std::size_t i = 0; i < label.size(); ++i)
            if (label[i] == '1') v |= 1U << i;
        xs.push_back(v);
    }
    const auto probs = source.probabilities();
    const std::size_t outputs = std::size_t{1} << params.r;
    const double uniform = 1.0 / static_cast<double>(outputs);
    std::vector<double> hist(outputs);
    std::vector<std::uint32_t> masks(params.r);
    BitVector seed(s);
    double total = 0.0;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << s); ++v) {
        for (std::size_t p = 0; p < s; ++p) seed.set(p, (v >> p) & 1U);
        const auto subsets = seed_to_subsets(seed, params);
        for (std::size_t i = 0; i < params.r; ++i) {
            masks[i] = 0;
            for (std::uint32_t idx : distinct_subset(subsets[i], params.m)) masks[i] |= 1U << idx;
        }
        std::fill(hist.begin(), hist.end(), 0.0);
        for (std::size_t n = 0; n < xs.size(); ++n) {
            std::size_t out = 0;
            for (std::size_t i = 0; i < params.r; ++i)
                out |= static_cast<std::size_t>(std::popcount(xs[n] & masks[i]) & 1) << i;
            hist[out] += probs[n];
        }
        double sd = 0.0;
        for (double h : hist) sd += std::abs(h - uniform);
        total += 0.5 * sd;
    }
    return total / static_cast<double>(std::uint64_t{1} << s);
}

std::vector<std::vector<std::uint32_t>> all_t_subsets(std::size_t m, std::size_t t) {
    std::vector<std::vector<std::uint32_t>> out;
    if (t > m) return out;
    std::vector<std::uint32_t> cur(t);
    std::iota(cur.begin(), cur.end(), 0U);
    while (true) {
        out.push_back(cur);
        std::size_t i = t;
        while (i > 0 && cur[i - 1] == m - t + (i - 1)) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < t; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

ListDecodeResult list_decode_txor(const TxorPredictions& predictions, double eta, std::size_t m, std::size_t t) {
    if (m == 0 || m > 16) throw std::invalid_argument("list_decode_txor: m must be in [1, 16]");
    if (t == 0 || t > m) throw std::invalid_argument("list_decode_txor: t must be in [1, m]");
    const double floor = 2.0 * static_cast<double>(t * t) / std::exp2(static_cast<double>(m));
    if (!(eta > floor && eta <= 0.5))
        throw std::invalid_argument("list_decode_txor: eta must satisfy 2t^2/2^m < eta <= 1/2");
    if (predictions.empty()) throw std::invalid_argument("list_decode_txor: no predictions");

    std::vector<std::uint32_t> masks;
    std::vector<int> bits;
    for (const auto& [key, bit] : predictions) {
        if (key.size() != t) throw std::invalid_argument("list_decode_txor: prediction keys must list t indices");
        std::uint32_t mask = 0;
        for (std::uint32_t i : key) {
            if (i >= m) throw std::invalid_argument("list_decode_txor: index outside [m]");
            mask ^= 1U << i;
        }
        masks.push_back(mask);
        bits.push_back(bit ? 1 : 0);
    }
    const double needed = (0.5 + eta) * static_cast<double>(masks.size()) - 1e-9;

    struct Match {
        std::size_t agreement;
        BitVector x;
    };
    std::vector<Match> found;
    for (std::uint32_t v = 0; v < (1U << m); ++v) {
        std::size_t agree = 0;
        for (std::size_t n = 0; n < masks.size(); ++n) agree += (std::popcount(v & masks[n]) & 1) == bits[n];
        if (static_cast<double>(agree) >= needed) {
            BitVector x(m);
            for (std::size_t i = 0; i < m; ++i) x.set(i, (v >> i) & 1U);
            found.push_back({agree, std::move(x)});
        }
    }

    ListDecodeResult result;
    result.delta = std::min(1.0, std::log(2.0 / eta) / static_cast<double>(t));
    result.list_bound = 4.0 / (eta * eta);
    std::sort(found.begin(), found.end(), [](const Match& a, const Match& b) { return a.x < b.x; });
    for (const auto& f : found) result.matches.push_back(f.x);
    std::stable_sort(found.begin(), found.end(),
                     [](const Match& a, const Match& b) { return a.agreement > b.agreement; });
    for (const auto& f : found) {
        const bool covered = std::any_of(result.candidates.begin(), result.candidates.end(), [&](const BitVector& c) {
            return relative_hamming_distance(c, f.x) <= result.delta;
        });
        if (!covered) result.candidates.push_back(f.x);
    }
    return result;
}

} // namespace dirand::extractor
