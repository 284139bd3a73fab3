#include "dirand/cli.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dirand::cli {

using nlohmann::ordered_json;

std::uint64_t ExperimentConfig::master_seed() const {
    if (!seed) throw std::invalid_argument(subcommand + ": a master seed is required (--seed or \"seed\" in the config)");
    return *seed;
}

namespace {

devices::GameKind parse_kind(const std::string& s) {
    if (s == "chsh") return devices::GameKind::chsh;
    if (s == "extended") return devices::GameKind::extended;
    throw std::invalid_argument("unknown game kind '" + s + "'");
}

devices::StrategySpec parse_strategy(const ordered_json& j) {
    devices::StrategySpec spec;
    if (j.is_string()) {
        spec.name = j.get<std::string>();
        return spec;
    }
    if (!j.is_object()) throw std::invalid_argument("strategy must be a name or an object");
    spec.name = j.value("name", spec.name);
    if (j.contains("kind")) spec.kind = parse_kind(j.at("kind").get<std::string>());
    if (j.contains("truth_a")) spec.truth_a = j.at("truth_a").get<std::vector<int>>();
    if (j.contains("truth_b")) spec.truth_b = j.at("truth_b").get<std::vector<int>>();
    if (!spec.truth_a.empty() && !j.contains("kind"))
        spec.kind = spec.truth_a.size() == 4 ? devices::GameKind::extended : devices::GameKind::chsh;
    spec.gamma = j.value("gamma", spec.gamma);
    spec.b0_seed = j.value("b0_seed", spec.b0_seed);
    return spec;
}

} // namespace

ExperimentConfig config_from_json(const ordered_json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
    ExperimentConfig c;
    c.echo = doc;
    c.subcommand = doc.value("subcommand", std::string{});
    if (doc.contains("seed") && !doc.at("seed").is_null()) {
        const auto& s = doc.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
            throw std::invalid_argument("seed must be a nonnegative 64-bit integer");
        c.seed = s.get<std::uint64_t>();
    }
    if (doc.contains("trials") && !doc.at("trials").is_null()) {
        c.trials = doc.at("trials").get<std::uint64_t>();
        if (*c.trials == 0) throw std::invalid_argument("trials must be positive");
    }
    c.threads = doc.value("threads", c.threads);
    c.format = doc.value("format", c.format);
    if (c.format != "json" && c.format != "csv") throw std::invalid_argument("format must be json or csv");
    c.out = doc.value("out", c.out);
    if (doc.contains("strategy")) c.strategy = parse_strategy(doc.at("strategy"));
    if (doc.contains("protocol")) c.protocol = doc.at("protocol");
    if (doc.contains("params")) c.params = doc.at("params");
    if (!c.protocol.is_object() || !c.params.is_object())
        throw std::invalid_argument("protocol and params must be JSON objects");
    return c;
}

ordered_json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return ordered_json::parse(buffer.str());
    } catch (const ordered_json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

} // namespace dirand::cli
