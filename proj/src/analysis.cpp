#include "dirand/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <tuple>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace dirand::analysis {

Distribution::Distribution(std::vector<std::string> support, std::vector<double> probabilities)
    : support_(std::move(support)), probabilities_(std::move(probabilities)) {
    if (support_.size() != probabilities_.size())
        throw std::invalid_argument("distribution: support and probabilities differ in length");
    if (support_.empty()) return;
    const std::size_t width = support_.front().size();
    std::unordered_set<std::string> seen;
    for (const auto& s : support_) {
        if (s.size() != width) throw std::invalid_argument("distribution: labels must share one length");
        if (s.find_first_not_of("01") != std::string::npos)
            throw std::invalid_argument("distribution: labels must be bit strings");
        if (!seen.insert(s).second) throw std::invalid_argument("distribution: duplicate label " + s);
    }
    double total = 0.0;
    for (double p : probabilities_) {
        if (!(p >= 0.0)) throw std::invalid_argument("distribution: probabilities must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("distribution: probabilities must sum to 1");
}

Distribution Distribution::from_probabilities(std::vector<double> probabilities) {
    std::size_t width = 0;
    while ((std::size_t{1} << width) < probabilities.size()) ++width;
    std::vector<std::string> labels;
    labels.reserve(probabilities.size());
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        std::string s(width, '0');
        for (std::size_t b = 0; b < width; ++b)
            if ((i >> (width - 1 - b)) & 1U) s[b] = '1';
        labels.push_back(std::move(s));
    }
    return Distribution(std::move(labels), std::move(probabilities));
}

Distribution Distribution::uniform(std::size_t bits) {
    const std::size_t n = std::size_t{1} << bits;
    return from_probabilities(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(std::string label) {
    return Distribution({std::move(label)}, {1.0});
}

double Distribution::probability(const std::string& label) const noexcept {
    const auto it = std::find(support_.begin(), support_.end(), label);
    return it == support_.end() ? 0.0 : probabilities_[static_cast<std::size_t>(it - support_.begin())];
}

double min_entropy(const Distribution& d) {
    if (d.empty()) throw std::invalid_argument("min_entropy: empty support");
    const auto p = d.probabilities();
    return -std::log2(*std::max_element(p.begin(), p.end()));
}

double statistical_distance(const Distribution& p, const Distribution& q) {
    std::unordered_map<std::string, double> diff;
    for (std::size_t i = 0; i < p.size(); ++i) diff[p.support()[i]] += p.probabilities()[i];
    for (std::size_t i = 0; i < q.size(); ++i) diff[q.support()[i]] -= q.probabilities()[i];
    // Sum in label order so the result does not depend on hash layout.
    std::vector<std::pair<std::string, double>> ordered(diff.begin(), diff.end());
    std::sort(ordered.begin(), ordered.end());
    double total = 0.0;
    for (const auto& [label, v] : ordered) total += std::abs(v);
    return 0.5 * total;
}

double smoothing_cap(const Distribution& d, double eps) {
    if (d.empty()) throw std::invalid_argument("smooth min-entropy: empty support");
    if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("smooth min-entropy: eps must be in [0, 1)");
    std::vector<double> p(d.probabilities().begin(), d.probabilities().end());
    std::sort(p.begin(), p.end(), std::greater<>());
    // The excess sum_x max(p(x) - lambda, 0) is piecewise linear; on the piece
    // where exactly the top j entries exceed lambda it equals prefix_j - j*lambda.
    double prefix = 0.0;
    for (std::size_t j = 1; j <= p.size(); ++j) {
        prefix += p[j - 1];
        const double lambda = (prefix - eps) / static_cast<double>(j);
        const double next = j < p.size() ? p[j] : 0.0;
        if (lambda >= next) return lambda;
    }
    return (1.0 - eps) / static_cast<double>(p.size());
}

double smooth_min_entropy(const Distribution& d, double eps) {
    return -std::log2(smoothing_cap(d, eps));
}

std::optional<SmoothcapWitness> smoothcap_witness(const Distribution& d, double eps, double alpha) {
    if (smooth_min_entropy(d, eps) > alpha) return std::nullopt;
    const double floor = std::exp2(-alpha);
    SmoothcapWitness w;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.probabilities()[i] >= floor) {
            w.members.push_back(d.support()[i]);
            w.mass += d.probabilities()[i];
        }
    }
    return w;
}

double chsh_success(const std::array<int, 2>& truth_a, const std::array<int, 2>& truth_b) noexcept {
    int wins = 0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            wins += ((truth_a[static_cast<std::size_t>(x)] ^ truth_b[static_cast<std::size_t>(y)]) == (x & y));
    return wins / 4.0;
}

ClassicalOptimum classical_chsh_optimum() {
    ClassicalOptimum best;
    for (int fa = 0; fa < 4; ++fa) {
        for (int fb = 0; fb < 4; ++fb) {
            const std::array<int, 2> ta{fa & 1, (fa >> 1) & 1};
            const std::array<int, 2> tb{fb & 1, (fb >> 1) & 1};
            const double v = chsh_success(ta, tb);
            if (v > best.value) {
                best.value = v;
                best.argmax.clear();
            }
            if (v == best.value) best.argmax.emplace_back(ta, tb);
        }
    }
    return best;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) noexcept {
    if (trials == 0) return {};
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

TranscriptStats transcript_stats(const referee::Transcript& t) {
    TranscriptStats s;
    s.protocol = t.is_protocol_a() ? "A" : "B";
    s.accepted = t.accepted;
    s.blocks_executed = t.blocks.size();
    const std::uint64_t k = t.k();
    std::map<std::tuple<bool, std::string, std::string>, InputPairStats> rows;
    for (const auto& r : t.blocks) {
        (r.is_bell ? s.bell_blocks : s.non_bell_blocks) += 1;
        if (r.passed) ++s.passed_blocks;
        auto& row = rows[{r.is_bell, r.x.name(), r.y.name()}];
        row.bell = r.is_bell;
        row.x = r.x.name();
        row.y = r.y.name();
        row.blocks += 1;
        row.passed_blocks += r.passed ? 1 : 0;
        row.rounds += k;
        row.mismatches += r.mismatch_count;
    }
    for (auto& [key, row] : rows) {
        row.mismatch_rate = static_cast<double>(row.mismatches) / static_cast<double>(row.rounds);
        row.ci = wilson_interval(row.mismatches, row.rounds);
        s.rows.push_back(row);
    }
    return s;
}

nlohmann::ordered_json to_json(const TranscriptStats& s) {
    nlohmann::ordered_json j;
    j["protocol"] = s.protocol;
    j["accepted"] = s.accepted;
    j["blocks_executed"] = s.blocks_executed;
    j["bell_blocks"] = s.bell_blocks;
    j["non_bell_blocks"] = s.non_bell_blocks;
    j["passed_blocks"] = s.passed_blocks;
    j["block_pass_rate"] = s.blocks_executed ? static_cast<double>(s.passed_blocks) / static_cast<double>(s.blocks_executed) : 0.0;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : s.rows) {
        nlohmann::ordered_json row;
        row["bell"] = r.bell;
        row["x"] = r.x;
        row["y"] = r.y;
        row["blocks"] = r.blocks;
        row["passed_blocks"] = r.passed_blocks;
        row["rounds"] = r.rounds;
        row["mismatches"] = r.mismatches;
        row["mismatch_rate"] = r.mismatch_rate;
        row["wilson95"] = {r.ci.low, r.ci.high};
        rows.push_back(std::move(row));
    }
    j["input_pairs"] = std::move(rows);
    return j;
}

std::string stats_csv(const TranscriptStats& s) {
    std::ostringstream out;
    out.precision(10);
    out << "bell,x,y,blocks,passed_blocks,rounds,mismatches,mismatch_rate,ci_low,ci_high\n";
    for (const auto& r : s.rows)
        out << (r.bell ? 1 : 0) << ',' << r.x << ',' << r.y << ',' << r.blocks << ',' << r.passed_blocks << ','
            << r.rounds << ',' << r.mismatches << ',' << r.mismatch_rate << ',' << r.ci.low << ',' << r.ci.high
            << '\n';
    return out.str();
}

} // namespace dirand::analysis
