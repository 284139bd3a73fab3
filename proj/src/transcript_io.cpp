#include "dirand/transcript_io.hpp"

#include "dirand/version.hpp"

#include <sstream>
#include <stdexcept>

namespace dirand::referee {

using nlohmann::ordered_json;

namespace {

template <class T>
void put_optional(ordered_json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
    else j[key] = nullptr;
}

template <class T>
std::optional<T> get_optional(const ordered_json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

} // namespace

ordered_json params_to_json(const ProtocolAParams& p) {
    ordered_json j;
    j["ell"] = p.ell;
    j["delta"] = p.delta;
    put_optional(j, "k_override", p.k_override);
    put_optional(j, "bell_probability", p.bell_probability);
    j["mismatch_threshold_fraction"] = p.mismatch_threshold_fraction;
    j["seed"] = p.seed;
    return j;
}

ordered_json params_to_json(const ProtocolBParams& p) {
    ordered_json j;
    j["ell"] = p.ell;
    j["C"] = p.c;
    put_optional(j, "k_override", p.k_override);
    put_optional(j, "m_override", p.m_override);
    put_optional(j, "bell_probability", p.bell_probability);
    j["window_low"] = p.window_low;
    j["window_high"] = p.window_high;
    j["mismatch_threshold_fraction"] = p.mismatch_threshold_fraction;
    j["seed"] = p.seed;
    return j;
}

ProtocolAParams params_a_from_json(const ordered_json& j) {
    ProtocolAParams p;
    p.ell = j.value("ell", p.ell);
    p.delta = j.value("delta", p.delta);
    p.k_override = get_optional<std::size_t>(j, "k_override");
    p.bell_probability = get_optional<double>(j, "bell_probability");
    p.mismatch_threshold_fraction = j.value("mismatch_threshold_fraction", p.mismatch_threshold_fraction);
    p.seed = j.value("seed", p.seed);
    return p;
}

ProtocolBParams params_b_from_json(const ordered_json& j) {
    ProtocolBParams p;
    p.ell = j.value("ell", p.ell);
    p.c = j.value("C", p.c);
    p.k_override = get_optional<std::size_t>(j, "k_override");
    p.m_override = get_optional<std::size_t>(j, "m_override");
    p.bell_probability = get_optional<double>(j, "bell_probability");
    p.window_low = j.value("window_low", p.window_low);
    p.window_high = j.value("window_high", p.window_high);
    p.mismatch_threshold_fraction = j.value("mismatch_threshold_fraction", p.mismatch_threshold_fraction);
    p.seed = j.value("seed", p.seed);
    return p;
}

ordered_json to_json(const Transcript& t) {
    ordered_json j;
    j["schema"] = kTranscriptSchema;
    j["version"] = kTranscriptVersion;
    j["tool_version"] = kVersion;
    j["protocol"] = t.is_protocol_a() ? "A" : "B";
    j["strategy"] = t.strategy;
    j["params"] = std::visit([](const auto& p) { return params_to_json(p); }, t.params);
    ordered_json derived;
    derived["k"] = t.k();
    derived["m"] = t.m();
    if (t.is_protocol_a()) derived["mismatch_threshold"] = std::get<ProtocolAParams>(t.params).threshold();
    j["derived"] = derived;
    j["bell_set"] = t.bell_set;
    ordered_json blocks = ordered_json::array();
    for (const auto& r : t.blocks) {
        ordered_json b;
        b["index"] = r.index;
        b["bell"] = r.is_bell;
        b["x"] = r.x.name();
        b["y"] = r.y.name();
        b["a"] = r.a.to_hex();
        b["b"] = r.b.to_hex();
        b["mismatches"] = r.mismatch_count;
        b["passed"] = r.passed;
        blocks.push_back(std::move(b));
    }
    j["blocks"] = std::move(blocks);
    j["accepted"] = t.accepted;
    put_optional(j, "first_failure", t.first_failure);
    j["rounds_played"] = t.rounds_played();
    j["randomness"] = {{"shannon_bits", t.randomness.shannon_bits},
                       {"raw_bits_drawn", t.randomness.raw_bits_drawn}};
    return j;
}

Transcript transcript_from_json(const ordered_json& j) {
    if (j.value("schema", std::string{}) != kTranscriptSchema)
        throw std::invalid_argument("not a transcript document");
    if (j.value("version", 0) != kTranscriptVersion)
        throw std::invalid_argument("unsupported transcript version");
    Transcript t;
    const std::string protocol = j.at("protocol").get<std::string>();
    if (protocol == "A") t.params = params_a_from_json(j.at("params"));
    else if (protocol == "B") t.params = params_b_from_json(j.at("params"));
    else throw std::invalid_argument("unknown protocol '" + protocol + "'");
    t.strategy = j.value("strategy", std::string{});
    t.bell_set = j.at("bell_set").get<std::vector<std::size_t>>();
    const std::size_t k = t.k();
    for (const auto& b : j.at("blocks")) {
        BlockRecord r;
        r.index = b.at("index").get<std::size_t>();
        r.is_bell = b.at("bell").get<bool>();
        r.x = devices::InputSymbol::parse(b.at("x").get<std::string>());
        r.y = devices::InputSymbol::parse(b.at("y").get<std::string>());
        r.a = BitVector::from_hex(b.at("a").get<std::string>(), k);
        r.b = BitVector::from_hex(b.at("b").get<std::string>(), k);
        r.mismatch_count = b.at("mismatches").get<std::size_t>();
        r.passed = b.at("passed").get<bool>();
        t.blocks.push_back(std::move(r));
    }
    t.accepted = j.at("accepted").get<bool>();
    t.first_failure = get_optional<std::size_t>(j, "first_failure");
    t.randomness.shannon_bits = j.at("randomness").at("shannon_bits").get<double>();
    t.randomness.raw_bits_drawn = j.at("randomness").at("raw_bits_drawn").get<std::uint64_t>();
    return t;
}

std::string blocks_csv(const Transcript& t) {
    std::ostringstream out;
    out << "index,bell,x,y,mismatches,mismatch_rate,passed\n";
    const double k = static_cast<double>(t.k());
    for (const auto& r : t.blocks) {
        out << r.index << ',' << (r.is_bell ? 1 : 0) << ',' << r.x.name() << ',' << r.y.name() << ','
            << r.mismatch_count << ',' << static_cast<double>(r.mismatch_count) / k << ',' << (r.passed ? 1 : 0)
            << '\n';
    }
    return out.str();
}

} // namespace dirand::referee
