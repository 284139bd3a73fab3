// dirand: command-line driver for the randomness-expansion lab.
#include "dirand/cli.hpp"
#include "dirand/kernels.hpp"
#include "dirand/version.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <memory>

namespace {

using nlohmann::ordered_json;
using Applier = std::function<void(ordered_json&)>;

// Registers an option whose value, when given, overwrites `pointer` in the
// config document.
template <class T>
CLI::Option* bind_option(CLI::App* app, std::vector<Applier>& appliers, const std::string& flag, const std::string& pointer,
          const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *value, help);
    appliers.push_back([opt, value, pointer](ordered_json& doc) {
        if (opt->count() > 0) doc[ordered_json::json_pointer(pointer)] = *value;
    });
    return opt;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dirand: device-independent randomness expansion lab"};
    app.set_version_flag("--version", dirand::kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string isa = "auto";
    std::vector<Applier> appliers;
    app.add_option("--config", config_path, "JSON experiment config");
    bind_option<std::uint64_t>(&app, appliers, "--seed", "/seed", "master seed (64-bit)");
    bind_option<std::uint64_t>(&app, appliers, "--trials", "/trials", "trials, runs or rounds per input pair");
    bind_option<std::string>(&app, appliers, "--out", "/out", "output directory");
    bind_option<std::string>(&app, appliers, "--format", "/format", "json or csv");
    bind_option<unsigned>(&app, appliers, "--threads", "/threads", "worker threads");
    app.add_option("--isa", isa, "kernel variant: auto, scalar or avx2");

    auto strategy_opts = [&](CLI::App* sub) {
        bind_option<std::string>(sub, appliers, "--strategy", "/strategy/name", "device strategy name");
        bind_option<double>(sub, appliers, "--gamma", "/strategy/gamma", "cheating pair: perturbation probability");
        bind_option<std::uint64_t>(sub, appliers, "--b0-seed", "/strategy/b0_seed", "cheating pair: seed of the favoured block");
        bind_option<std::vector<int>>(sub, appliers, "--truth-a", "/strategy/truth_a", "deterministic: A outputs per input");
        bind_option<std::vector<int>>(sub, appliers, "--truth-b", "/strategy/truth_b", "deterministic: B outputs per input");
        bind_option<std::string>(sub, appliers, "--kind", "/strategy/kind", "game kind for classical strategies");
    };

    auto* chsh = app.add_subcommand("chsh-stats", "per-input-pair CHSH success table");
    strategy_opts(chsh);

    auto* run = app.add_subcommand("run", "run protocol A or B against a device pair");
    strategy_opts(run);
    bind_option<std::string>(run, appliers, "--protocol", "/protocol/kind", "A or B");
    bind_option<std::uint64_t>(run, appliers, "--ell", "/protocol/ell", "ell");
    bind_option<std::uint64_t>(run, appliers, "--delta", "/protocol/delta", "protocol A: delta");
    bind_option<std::uint64_t>(run, appliers, "--C", "/protocol/C", "protocol B: C");
    bind_option<std::size_t>(run, appliers, "--k", "/protocol/k_override", "block length override");
    bind_option<std::size_t>(run, appliers, "--m", "/protocol/m_override", "protocol B: block count override");
    bind_option<double>(run, appliers, "--bell-p", "/protocol/bell_probability", "Bell block probability");
    bind_option<double>(run, appliers, "--threshold", "/protocol/mismatch_threshold_fraction", "mismatch threshold fraction");
    bind_option<double>(run, appliers, "--window-low", "/protocol/window_low", "protocol B: window low");
    bind_option<double>(run, appliers, "--window-high", "/protocol/window_high", "protocol B: window high");

    auto* guess = app.add_subcommand("guess", "guessing-game attack");
    strategy_opts(guess);
    bind_option<std::size_t>(guess, appliers, "--k", "/params/k", "block length");
    bind_option<double>(guess, appliers, "--radius", "/params/decision_radius", "decision radius");
    bind_option<std::size_t>(guess, appliers, "--calibration-samples", "/params/calibration_samples", "b0 calibration blocks");
    bind_option<std::string>(guess, appliers, "--b0", "/params/b0", "fixed b0 as hex");

    auto* entropy = app.add_subcommand("entropy", "min-entropy, smooth min-entropy and witness sets");
    bind_option<std::vector<double>>(entropy, appliers, "--probs", "/params/probabilities", "probabilities")->delimiter(',');
    bind_option<double>(entropy, appliers, "--eps", "/params/eps", "smoothing parameter");
    bind_option<double>(entropy, appliers, "--alpha", "/params/alpha", "witness threshold");

    auto* design = app.add_subcommand("design", "build a weak design");
    bind_option<std::size_t>(design, appliers, "--r", "/params/r", "number of sets");
    bind_option<std::size_t>(design, appliers, "--set-size", "/params/set_size", "set size");
    bind_option<double>(design, appliers, "--rho", "/params/rho", "overlap parameter");
    bind_option<std::size_t>(design, appliers, "--s", "/params/s", "seed universe size");

    auto* extract = app.add_subcommand("extract", "t-XOR extraction");
    bind_option<std::size_t>(extract, appliers, "--m", "/params/m", "input length (power of two)");
    bind_option<std::size_t>(extract, appliers, "--t", "/params/t", "XOR arity");
    bind_option<std::size_t>(extract, appliers, "--r", "/params/r", "output length");
    bind_option<std::size_t>(extract, appliers, "--s", "/params/s", "seed length budget");
    bind_option<double>(extract, appliers, "--rho", "/params/rho", "design overlap parameter");
    bind_option<std::string>(extract, appliers, "--input", "/params/input", "input as hex");
    bind_option<std::string>(extract, appliers, "--seed-hex", "/params/seed_hex", "seed as hex");
    bind_option<std::string>(extract, appliers, "--transcript", "/params/transcript", "take input from a transcript's B outputs");

    auto* verify = app.add_subcommand("verify", "re-check a transcript or design file");
    auto verify_file = std::make_shared<std::string>();
    verify->add_option("file", *verify_file, "file to check")->required();
    appliers.push_back([verify, verify_file](ordered_json& doc) {
        if (verify->parsed()) doc["params"]["file"] = *verify_file;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (isa == "scalar") dirand::kernels::force_isa(dirand::kernels::Isa::scalar);
        else if (isa == "avx2") dirand::kernels::force_isa(dirand::kernels::Isa::avx2);
        else if (isa != "auto") throw std::invalid_argument("--isa must be auto, scalar or avx2");

        ordered_json doc = config_path.empty() ? ordered_json::object() : dirand::cli::load_json_file(config_path);
        doc["subcommand"] = app.get_subcommands().front()->get_name();
        for (const auto& apply : appliers) apply(doc);

        const auto config = dirand::cli::config_from_json(doc);
        const auto output = dirand::cli::run_command(config);
        if (config.out.empty()) std::cout << output.primary;
        else dirand::cli::write_outputs(output, config.out);
        return output.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "dirand: error: " << e.what() << '\n';
        return dirand::cli::kExitError;
    }
}
