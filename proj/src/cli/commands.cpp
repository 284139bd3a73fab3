#include "dirand/cli.hpp"

#include "dirand/analysis.hpp"
#include "dirand/extractor.hpp"
#include "dirand/guessing.hpp"
#include "dirand/parallel.hpp"
#include "dirand/quantum_sim.hpp"
#include "dirand/referee.hpp"
#include "dirand/transcript_io.hpp"
#include "dirand/version.hpp"

#include <bit>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dirand::cli {

using devices::GameKind;
using devices::InputSymbol;
using nlohmann::ordered_json;

namespace {

ordered_json envelope(const ExperimentConfig& c, const char* kind) {
    ordered_json j;
    j["tool"] = "dirand";
    j["tool_version"] = kVersion;
    j["output"] = kind;
    j["config"] = c.echo;
    return j;
}

std::string csv_preamble(const ExperimentConfig& c) {
    return "# dirand " + std::string(kVersion) + " config=" + c.echo.dump() + "\n";
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void add(CommandOutput& out, std::string name, std::string content, bool primary = false) {
    if (primary || out.primary.empty()) out.primary = content;
    out.files.push_back({std::move(name), std::move(content)});
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

// ---------------------------------------------------------------- chsh-stats

std::optional<double> closed_form_success(const devices::StrategySpec& spec, int x, int y) {
    const bool want_diff = x && y;
    if (spec.name == "honest_chsh" || spec.name == "honest_extended") {
        const auto d = spec.name == "honest_chsh"
                           ? quantum::epr_joint_distribution(devices::honest_chsh_angle_a(x), devices::honest_chsh_angle_b(y))
                           : quantum::epr_joint_distribution(
                                 devices::honest_extended_angle(x ? devices::Extended::a1 : devices::Extended::a0),
                                 devices::honest_extended_angle(y ? devices::Extended::b1 : devices::Extended::b0));
        return want_diff ? 1.0 - d.agree() : d.agree();
    }
    if (spec.name == "deterministic" || spec.name == "all_zeros") {
        // Extended boxes get A-side symbols for x and B-side symbols for y.
        const std::size_t ix = static_cast<std::size_t>(x);
        const std::size_t iy = static_cast<std::size_t>(spec.kind == GameKind::extended ? 2 + y : y);
        const int a = spec.truth_a.empty() ? 0 : spec.truth_a.at(ix);
        const int b = spec.truth_b.empty() ? 0 : spec.truth_b.at(iy);
        return ((a ^ b) == (x & y)) ? 1.0 : 0.0;
    }
    if (spec.name == "shared_random_bit") return want_diff ? 0.0 : 1.0;
    if (spec.name == "cheating") return 1.0;
    return std::nullopt;
}

CommandOutput cmd_chsh_stats(const ExperimentConfig& c) {
    const std::uint64_t seed = c.master_seed();
    const std::uint64_t rounds = c.trials_or(100000);
    devices::StrategySpec spec = c.strategy;
    if (spec.name == "honest_extended") spec.kind = GameKind::extended;
    if (spec.name == "cheating") spec.kind = GameKind::chsh;

    struct Row {
        int x, y;
        std::uint64_t wins;
        std::optional<double> closed;
    };
    std::vector<Row> rows;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            auto pair = devices::make_pair(spec, derive_seed(seed, "chsh.pair", static_cast<std::uint64_t>(2 * x + y)));
            const bool extended = pair.kind() == GameKind::extended;
            const InputSymbol sx = extended ? InputSymbol::extended(x ? devices::Extended::a1 : devices::Extended::a0)
                                            : InputSymbol::chsh(x);
            const InputSymbol sy = extended ? InputSymbol::extended(y ? devices::Extended::b1 : devices::Extended::b0)
                                            : InputSymbol::chsh(y);
            auto [a, b] = pair.play_block(sx, sy, static_cast<std::size_t>(rounds));
            const std::uint64_t differ = hamming_distance(a, b);
            const std::uint64_t wins = (x && y) ? differ : rounds - differ;
            rows.push_back({x, y, wins, closed_form_success(spec, x, y)});
        }
    }
    const auto classical = analysis::classical_chsh_optimum();

    CommandOutput out;
    if (c.format == "csv") {
        std::ostringstream s;
        s << csv_preamble(c) << "x,y,rounds,successes,success_rate,ci_low,ci_high,closed_form\n";
        for (const auto& r : rows) {
            const auto ci = analysis::wilson_interval(r.wins, rounds);
            s << r.x << ',' << r.y << ',' << rounds << ',' << r.wins << ','
              << fmt(static_cast<double>(r.wins) / static_cast<double>(rounds)) << ',' << fmt(ci.low) << ','
              << fmt(ci.high) << ',' << (r.closed ? fmt(*r.closed) : std::string{}) << '\n';
        }
        s << "# classical_optimum," << fmt(classical.value) << '\n';
        add(out, "chsh_stats.csv", s.str(), true);
        return out;
    }
    ordered_json j = envelope(c, "chsh_stats");
    j["strategy"] = spec.name;
    j["rounds_per_input_pair"] = rounds;
    ordered_json table = ordered_json::array();
    double overall = 0.0;
    double overall_closed = 0.0;
    bool have_closed = true;
    for (const auto& r : rows) {
        const auto ci = analysis::wilson_interval(r.wins, rounds);
        const double rate = static_cast<double>(r.wins) / static_cast<double>(rounds);
        overall += rate / 4.0;
        ordered_json row;
        row["x"] = r.x;
        row["y"] = r.y;
        row["successes"] = r.wins;
        row["success_rate"] = rate;
        row["wilson95"] = {ci.low, ci.high};
        if (r.closed) {
            row["closed_form"] = *r.closed;
            overall_closed += *r.closed / 4.0;
        } else {
            row["closed_form"] = nullptr;
            have_closed = false;
        }
        table.push_back(std::move(row));
    }
    j["input_pairs"] = std::move(table);
    j["overall_success_rate"] = overall;
    if (have_closed) j["overall_closed_form"] = overall_closed;
    else j["overall_closed_form"] = nullptr;
    j["classical_optimum"] = classical.value;
    add(out, "chsh_stats.json", dump(j), true);
    return out;
}

// ----------------------------------------------------------------------- run

devices::StrategySpec strategy_for_kind(devices::StrategySpec spec, GameKind kind) {
    if (spec.name == "all_zeros" || spec.name == "shared_random_bit") spec.kind = kind;
    return spec;
}

CommandOutput cmd_run(const ExperimentConfig& c) {
    const std::uint64_t seed = c.master_seed();
    const std::string kind = c.protocol.value("kind", std::string("A"));
    if (kind != "A" && kind != "B") throw std::invalid_argument("protocol kind must be A or B");
    const bool is_a = kind == "A";
    referee::ProtocolAParams pa;
    referee::ProtocolBParams pb;
    if (is_a) {
        pa = referee::params_a_from_json(c.protocol);
        pa.validate();
    } else {
        pb = referee::params_b_from_json(c.protocol);
        pb.validate();
    }
    const auto spec = strategy_for_kind(c.strategy, is_a ? GameKind::chsh : GameKind::extended);
    // Fail on unknown strategies before any run.
    (void)devices::make_pair(spec, 0);

    const auto run_one = [&](std::uint64_t trial) {
        auto pair = devices::make_pair(spec, derive_seed(seed, "run.devices", trial));
        if (is_a) {
            auto p = pa;
            p.seed = derive_seed(seed, "run.referee", trial);
            return referee::run_protocol_a(p, pair);
        }
        auto p = pb;
        p.seed = derive_seed(seed, "run.referee", trial);
        return referee::run_protocol_b(p, pair);
    };

    const std::uint64_t trials = c.trials_or(1);
    CommandOutput out;
    if (trials == 1) {
        const auto t = run_one(0);
        ordered_json tj = envelope(c, "transcript");
        const ordered_json body = referee::to_json(t);
        for (const auto& [key, value] : body.items()) tj[key] = value;
        add(out, "transcript.json", dump(tj), true);
        add(out, "blocks.csv", csv_preamble(c) + referee::blocks_csv(t));
        const auto stats = analysis::transcript_stats(t);
        if (c.format == "csv") {
            add(out, "stats.csv", csv_preamble(c) + analysis::stats_csv(stats));
        } else {
            ordered_json sj = envelope(c, "transcript_stats");
            sj["stats"] = analysis::to_json(stats);
            add(out, "stats.json", dump(sj));
        }
        out.exit_code = t.accepted ? kExitOk : kExitRejected;
        return out;
    }

    struct RunRow {
        bool accepted = false;
        std::size_t blocks = 0;
        std::optional<std::size_t> first_failure;
        std::uint64_t rounds = 0;
        double shannon = 0.0;
        std::uint64_t raw = 0;
    };
    std::vector<RunRow> rows(trials);
    parallel_for(trials, c.threads, [&](std::size_t i) {
        const auto t = run_one(i);
        rows[i] = {t.accepted, t.blocks.size(), t.first_failure, t.rounds_played(), t.randomness.shannon_bits,
                   t.randomness.raw_bits_drawn};
    });
    std::uint64_t accepted = 0;
    std::ostringstream runs;
    runs << csv_preamble(c) << "trial,accepted,blocks_executed,first_failure,rounds_played,shannon_bits,raw_bits_drawn\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        accepted += r.accepted;
        runs << i << ',' << (r.accepted ? 1 : 0) << ',' << r.blocks << ','
             << (r.first_failure ? std::to_string(*r.first_failure) : std::string{}) << ',' << r.rounds << ','
             << fmt(r.shannon) << ',' << r.raw << '\n';
    }
    const auto ci = analysis::wilson_interval(accepted, trials);
    const double rate = static_cast<double>(accepted) / static_cast<double>(trials);
    if (c.format == "csv") {
        std::ostringstream s;
        s << csv_preamble(c) << "protocol,strategy,trials,accepted,acceptance_rate,ci_low,ci_high\n"
          << kind << ',' << spec.name << ',' << trials << ',' << accepted << ',' << fmt(rate) << ',' << fmt(ci.low)
          << ',' << fmt(ci.high) << '\n';
        add(out, "summary.csv", s.str(), true);
    } else {
        ordered_json j = envelope(c, "run_summary");
        j["protocol"] = kind;
        j["strategy"] = spec.name;
        j["trials"] = trials;
        j["accepted"] = accepted;
        j["acceptance_rate"] = rate;
        j["wilson95"] = {ci.low, ci.high};
        add(out, "summary.json", dump(j), true);
    }
    add(out, "runs.csv", runs.str());
    return out;
}

// --------------------------------------------------------------------- guess

CommandOutput cmd_guess(const ExperimentConfig& c) {
    const std::uint64_t seed = c.master_seed();
    guessing::GuessingGameConfig g;
    g.k = c.params.value("k", g.k);
    g.trials = c.trials_or(100000);
    g.calibration_samples = c.params.value("calibration_samples", g.calibration_samples);
    g.decision_radius = c.params.value("decision_radius", g.decision_radius);
    g.threads = c.threads;
    if (c.params.contains("b0") && !c.params.at("b0").is_null())
        g.b0 = BitVector::from_hex(c.params.at("b0").get<std::string>(), g.k);
    auto spec = strategy_for_kind(c.strategy, GameKind::chsh);
    if (devices::make_pair(spec, 0).kind() != GameKind::chsh)
        throw std::invalid_argument("guess: the strategy must play the CHSH game");
    const guessing::PairFactory factory = [spec](std::uint64_t s) { return devices::make_pair(spec, s); };
    auto result = guessing::run_guessing_game(factory, g, seed);
    if (spec.name == "cheating") result.bound = guessing::lemma3_bound(spec.gamma, 0.0);

    CommandOutput out;
    ordered_json j = envelope(c, "guessing_game");
    j["strategy"] = spec.name;
    j["k"] = g.k;
    j["decision_radius"] = g.decision_radius;
    j["result"] = guessing::to_json(result);
    add(out, "guess.json", dump(j), true);
    return out;
}

// ------------------------------------------------------------------- entropy

CommandOutput cmd_entropy(const ExperimentConfig& c) {
    const auto& p = c.params;
    if (!p.contains("probabilities")) throw std::invalid_argument("entropy: params.probabilities is required");
    auto probs = p.at("probabilities").get<std::vector<double>>();
    const analysis::Distribution d =
        p.contains("support")
            ? analysis::Distribution(p.at("support").get<std::vector<std::string>>(), std::move(probs))
            : analysis::Distribution::from_probabilities(std::move(probs));
    const double eps = p.value("eps", 0.0);

    ordered_json j = envelope(c, "entropy");
    j["support_size"] = d.size();
    j["min_entropy"] = analysis::min_entropy(d);
    j["eps"] = eps;
    j["smoothing_cap"] = analysis::smoothing_cap(d, eps);
    j["smooth_min_entropy"] = analysis::smooth_min_entropy(d, eps);
    if (p.contains("alpha")) {
        const double alpha = p.at("alpha").get<double>();
        j["alpha"] = alpha;
        if (const auto w = analysis::smoothcap_witness(d, eps, alpha)) {
            j["witness"] = {{"members", w->members}, {"mass", w->mass}};
        } else {
            j["witness"] = nullptr;
        }
    }
    if (p.contains("compare")) {
        const auto q = analysis::Distribution::from_probabilities(p.at("compare").get<std::vector<double>>());
        j["statistical_distance"] = analysis::statistical_distance(d, q);
    }
    CommandOutput out;
    add(out, "entropy.json", dump(j), true);
    return out;
}

// -------------------------------------------------------------------- design

CommandOutput cmd_design(const ExperimentConfig& c) {
    const auto& p = c.params;
    const std::size_t r = p.value("r", std::size_t{16});
    const std::size_t set_size = p.value("set_size", std::size_t{8});
    const double rho = p.value("rho", 1.25);
    const std::size_t s = p.value("s", r * set_size);
    const auto design = extractor::build_weak_design(r, set_size, rho, s);
    ordered_json j = envelope(c, "design");
    const ordered_json body = extractor::to_json(design);
    for (const auto& [key, value] : body.items()) j[key] = value;
    ordered_json weights = ordered_json::array();
    for (std::size_t i = 0; i < design.r; ++i) weights.push_back(extractor::overlap_weight(design, i));
    j["overlap_weights"] = std::move(weights);
    CommandOutput out;
    add(out, "design.json", dump(j), true);
    return out;
}

// ------------------------------------------------------------------- extract

CommandOutput cmd_extract(const ExperimentConfig& c) {
    const auto& p = c.params;
    BitVector input;
    std::string source;
    std::size_t m = p.value("m", std::size_t{0});
    if (p.contains("transcript")) {
        const std::string path = p.at("transcript").get<std::string>();
        const auto t = referee::transcript_from_json(load_json_file(path));
        BitVector all;
        for (const auto& block : t.blocks) all.append(block.b);
        if (m == 0) m = all.size() < 2 ? 2 : std::bit_floor(all.size());
        if (all.size() < m)
            throw std::invalid_argument("extract: transcript holds " + std::to_string(all.size()) + " bits of B output, need " +
                                        std::to_string(m));
        input = all.slice(0, m);
        source = "transcript";
    } else {
        if (!p.contains("input")) throw std::invalid_argument("extract: params.input (hex) or params.transcript is required");
        if (m == 0) throw std::invalid_argument("extract: params.m is required with a hex input");
        input = BitVector::from_hex(p.at("input").get<std::string>(), m);
        source = "hex";
    }
    const std::size_t t = p.value("t", std::size_t{2});
    const std::size_t r = p.value("r", std::size_t{16});
    const double rho = p.value("rho", 1.25);
    if (m < 2 || !std::has_single_bit(m)) throw std::invalid_argument("extract: m must be a power of two >= 2");
    const std::size_t width = static_cast<std::size_t>(std::countr_zero(m));
    const std::size_t s = p.value("s", r * t * width);
    const auto params = extractor::make_extractor_params(m, t, r, s, rho);

    BitVector seed_bits;
    if (p.contains("seed_hex")) {
        seed_bits = BitVector::from_hex(p.at("seed_hex").get<std::string>(), params.seed_length());
    } else {
        Xoshiro256 stream = make_stream(c.master_seed(), "extract.seed");
        seed_bits = BitVector(params.seed_length());
        for (std::size_t i = 0; i < seed_bits.size(); ++i) seed_bits.set(i, (stream() >> 63) != 0);
    }
    const BitVector output = extractor::extract(input, seed_bits, params);

    ordered_json j = envelope(c, "extract");
    j["input_source"] = source;
    j["m"] = m;
    j["t"] = t;
    j["r"] = r;
    j["s"] = params.seed_length();
    j["input"] = input.to_hex();
    j["seed"] = seed_bits.to_hex();
    j["output_hex"] = output.to_hex();
    j["design"] = extractor::to_json(params.design);
    CommandOutput out;
    add(out, "extract.json", dump(j), true);
    add(out, "output.hex", output.to_hex() + "\n");
    return out;
}

// -------------------------------------------------------------------- verify

CommandOutput cmd_verify(const ExperimentConfig& c) {
    if (!c.params.contains("file")) throw std::invalid_argument("verify: a file to check is required");
    const std::string path = c.params.at("file").get<std::string>();
    const auto doc = load_json_file(path);
    const std::string schema = doc.value("schema", std::string{});
    std::vector<std::string> issues;
    if (schema == referee::kTranscriptSchema) {
        issues = referee::verify_transcript(referee::transcript_from_json(doc));
    } else if (schema == "dirand.design") {
        try {
            (void)extractor::design_from_json(doc);
        } catch (const std::invalid_argument& e) {
            issues.emplace_back(e.what());
        }
    } else {
        throw std::invalid_argument(path + ": no verifiable schema (expected a transcript or a design)");
    }
    ordered_json j = envelope(c, "verification");
    j["file"] = path;
    j["schema"] = schema;
    j["valid"] = issues.empty();
    j["issues"] = issues;
    CommandOutput out;
    add(out, "verify.json", dump(j), true);
    out.exit_code = issues.empty() ? kExitOk : kExitError;
    return out;
}

} // namespace

std::vector<std::string> subcommand_names() {
    return {"chsh-stats", "run", "guess", "entropy", "design", "extract", "verify"};
}

CommandOutput run_command(const ExperimentConfig& config) {
    const auto& s = config.subcommand;
    if (s == "chsh-stats") return cmd_chsh_stats(config);
    if (s == "run") return cmd_run(config);
    if (s == "guess") return cmd_guess(config);
    if (s == "entropy") return cmd_entropy(config);
    if (s == "design") return cmd_design(config);
    if (s == "extract") return cmd_extract(config);
    if (s == "verify") return cmd_verify(config);
    throw std::invalid_argument("unknown subcommand '" + s + "'");
}

void write_outputs(const CommandOutput& output, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
    for (const auto& f : output.files) {
        const fs::path path = fs::path(dir) / f.name;
        std::ofstream file(path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write " + path.string());
        file << f.content;
    }
}

} // namespace dirand::cli
