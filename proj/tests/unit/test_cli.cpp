#include "dirand/cli.hpp"
#include "dirand/bitvec.hpp"
#include "dirand/extractor.hpp"

#include <doctest.h>

#include <stdexcept>

#include <bit>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dirand;
using nlohmann::ordered_json;

namespace {

cli::CommandOutput run(const std::string& doc) {
    return cli::run_command(cli::config_from_json(ordered_json::parse(doc)));
}

const cli::OutputFile& file(const cli::CommandOutput& out, const std::string& name) {
    for (const auto& f : out.files)
        if (f.name == name) return f;
    FAIL("missing output " << name);
    throw std::logic_error("unreachable");
}

// One small config per subcommand.
const char* const kConfigs[] = {
    R"({"subcommand":"chsh-stats","seed":4,"trials":2000,"strategy":"honest_chsh"})",
    R"({"subcommand":"chsh-stats","seed":4,"trials":500,"format":"csv","strategy":"honest_extended"})",
    R"({"subcommand":"run","seed":5,"strategy":"honest_chsh","protocol":{"kind":"A","ell":16,"delta":2,"k_override":2000}})",
    R"({"subcommand":"run","seed":5,"trials":6,"threads":3,"strategy":"all_zeros","protocol":{"kind":"A","ell":16,"delta":4}})",
    R"({"subcommand":"run","seed":6,"format":"csv","strategy":"honest_extended","protocol":{"kind":"B","ell":8,"k_override":500,"m_override":10}})",
    R"({"subcommand":"guess","seed":7,"trials":500,"threads":2,"strategy":{"name":"cheating","gamma":0.1,"b0_seed":3}})",
    R"({"subcommand":"entropy","params":{"probabilities":[0.5,0.25,0.25],"eps":0.25,"alpha":1.5}})",
    R"({"subcommand":"design","params":{"r":16,"set_size":8,"s":256}})",
    R"({"subcommand":"extract","seed":8,"params":{"m":64,"t":2,"r":8,"input":"0123456789abcdef"}})",
};

} // namespace

TEST_CASE("every subcommand is byte-deterministic") {
    for (const char* doc : kConfigs) {
        const auto a = run(doc), b = run(doc);
        CHECK(a.exit_code == b.exit_code);
        CHECK(a.primary == b.primary);
        REQUIRE(a.files.size() == b.files.size());
        for (std::size_t i = 0; i < a.files.size(); ++i) {
            CHECK(a.files[i].name == b.files[i].name);
            CHECK(a.files[i].content == b.files[i].content);
        }
    }
}

TEST_CASE("thread count does not change multi-trial results") {
    const auto one = run(R"({"subcommand":"run","seed":2,"trials":8,"threads":1,"strategy":"honest_chsh","protocol":{"kind":"A","ell":16,"delta":2,"k_override":400}})");
    const auto four = run(R"({"subcommand":"run","seed":2,"trials":8,"threads":4,"strategy":"honest_chsh","protocol":{"kind":"A","ell":16,"delta":2,"k_override":400}})");
    CHECK(file(one, "runs.csv").content.substr(file(one, "runs.csv").content.find('\n')) ==
          file(four, "runs.csv").content.substr(file(four, "runs.csv").content.find('\n')));
}

TEST_CASE("chsh-stats for all-zeros devices") {
    const auto out = run(R"({"subcommand":"chsh-stats","seed":1,"trials":100,"strategy":"all_zeros"})");
    const auto j = ordered_json::parse(file(out, "chsh_stats.json").content);
    const double want[] = {1, 1, 1, 0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(j["input_pairs"][i]["success_rate"].get<double>() == want[i]);
    CHECK(j["overall_success_rate"].get<double>() == 0.75);
}

TEST_CASE("run exit codes") {
    const auto rejected = run(R"({"subcommand":"run","seed":1,"strategy":"all_zeros","protocol":{"kind":"A","ell":4,"delta":40,"k_override":8}})");
    CHECK(rejected.exit_code == cli::kExitRejected);
    const auto accepted = run(R"({"subcommand":"run","seed":1,"strategy":"honest_chsh","protocol":{"kind":"A","ell":16,"delta":1,"k_override":4000}})");
    CHECK(accepted.exit_code == cli::kExitOk);
    CHECK(file(accepted, "blocks.csv").content.rfind("# dirand", 0) == 0);
    CHECK_THROWS_AS(run(R"({"subcommand":"run","seed":1,"strategy":"honest_extended","protocol":{"kind":"B","window_low":0.6,"window_high":0.4}})"),
                    std::invalid_argument);
    CHECK_THROWS(run(R"({"subcommand":"run","strategy":"honest_chsh","protocol":{"kind":"A"}})"));
}

TEST_CASE("extract, design and verify") {
    const auto zero = run(R"({"subcommand":"extract","seed":3,"params":{"m":32,"t":2,"r":8,"input":"00000000"}})");
    CHECK(file(zero, "output.hex").content.find_first_not_of("0\n") == std::string::npos);

    const auto design = run(R"({"subcommand":"design","params":{"r":16,"set_size":8}})");
    const auto text = file(design, "design.json").content;
    const auto dj = ordered_json::parse(text);
    CHECK_FALSE(extractor::find_design_violation(extractor::design_from_json(dj)));

    const auto dir = std::filesystem::temp_directory_path() / "dirand_cli_test";
    std::filesystem::create_directories(dir);
    cli::write_outputs(design, dir.string());
    ordered_json doc = {{"subcommand", "verify"}, {"params", {{"file", (dir / "design.json").string()}}}};
    const auto ok = cli::run_command(cli::config_from_json(doc));
    CHECK(ok.exit_code == cli::kExitOk);

    auto broken = dj;
    for (std::size_t i = 1; i < broken["sets"].size(); ++i) broken["sets"][i] = broken["sets"][0];
    std::ofstream(dir / "bad.json") << broken.dump();
    doc["params"]["file"] = (dir / "bad.json").string();
    CHECK(cli::run_command(cli::config_from_json(doc)).exit_code == cli::kExitError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("extract takes box B outputs from a transcript") {
    const auto dir = std::filesystem::temp_directory_path() / "dirand_cli_pipeline";
    std::filesystem::create_directories(dir);
    const auto runout = run(R"({"subcommand":"run","seed":4,"strategy":"honest_chsh","protocol":{"kind":"A","ell":16,"delta":1,"k_override":300}})");
    cli::write_outputs(runout, dir.string());
    const auto tj = ordered_json::parse(file(runout, "transcript.json").content);
    BitVector all;
    for (const auto& b : tj["blocks"]) all.append(BitVector::from_hex(b["b"].get<std::string>(), 300));
    ordered_json doc = {{"subcommand", "extract"},
                        {"seed", 1},
                        {"params", {{"transcript", (dir / "transcript.json").string()}, {"r", 8}}}};
    const auto ex = cli::run_command(cli::config_from_json(doc));
    const auto ej = ordered_json::parse(file(ex, "extract.json").content);
    const std::size_t m = ej["m"].get<std::size_t>();
    CHECK(m == std::bit_floor(all.size()));
    CHECK(ej["input"].get<std::string>() == all.slice(0, m).to_hex());
    std::filesystem::remove_all(dir);
}

TEST_CASE("guess on honest devices hovers at one half") {
    const auto out = run(R"({"subcommand":"guess","seed":2,"trials":20000,"threads":4,"strategy":"honest_chsh"})");
    const auto j = ordered_json::parse(file(out, "guess.json").content);
    const auto ci = j["result"]["wilson95"];
    CHECK(ci[0].get<double>() <= 0.5);
    CHECK(ci[1].get<double>() >= 0.5);
}

TEST_CASE("config errors") {
    CHECK_THROWS(run(R"({"subcommand":"nope"})"));
    CHECK_THROWS(cli::config_from_json(ordered_json::parse(R"({"subcommand":"run","format":"xml"})")));
}
