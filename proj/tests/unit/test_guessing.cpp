#include "dirand/devices.hpp"
#include "dirand/guessing.hpp"
#include "dirand/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace dirand;
using namespace dirand::guessing;

TEST_CASE("guessing success lower bound") {
    CHECK(lemma3_bound(0, 0) == doctest::Approx(0.75));
    CHECK(lemma3_bound(0.02, 0.1) == doctest::Approx(0.53));
    CHECK(lemma3_bound(0.05, 0.1) == doctest::Approx(0.5));
    CHECK(lemma3_bound(0.25, 0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(lemma3_bound(-0.1, 0), std::invalid_argument);
}

TEST_CASE("b0 calibration") {
    const auto b0 = devices::cheating_b0(5, 20);
    auto exact = devices::cheating_low_entropy_pair(0.0, 5, 1);
    CHECK(calibrate_b0(exact, 20, 50) == b0);
    int hits = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        auto noisy = devices::cheating_low_entropy_pair(0.1, 5, s);
        hits += calibrate_b0(noisy, 20, 1000) == b0;
    }
    CHECK(hits >= 99);
    auto honest = devices::honest_chsh_pair(3);
    CHECK(calibrate_b0(honest, 20, 100).size() == 20);
}

TEST_CASE("guessing game success rates") {
    GuessingGameConfig cfg;
    cfg.trials = 100000;
    cfg.threads = 4;
    const auto honest = run_guessing_game([](std::uint64_t s) { return devices::honest_chsh_pair(s); }, cfg, 1);
    CHECK(std::abs(honest.estimate - 0.5) < 0.006);
    CHECK(honest.trials_by_y[0] + honest.trials_by_y[1] == cfg.trials);

    cfg.trials = 20000;
    const auto cheat = run_guessing_game(
        [](std::uint64_t s) { return devices::cheating_low_entropy_pair(0.0, 9, s); }, cfg, 2);
    CHECK(cheat.estimate >= 0.74);
    CHECK(cheat.b0 == devices::cheating_b0(9, 20));
    // y = 0 is always won, y = 1 half the time.
    CHECK(cheat.successes_by_y[0] == cheat.trials_by_y[0]);

    const auto noisy = run_guessing_game(
        [](std::uint64_t s) { return devices::cheating_low_entropy_pair(0.05, 9, s); }, cfg, 3);
    CHECK(noisy.estimate >= lemma3_bound(0.05, 0) - 0.01);
}

TEST_CASE("guessing game is independent of thread count") {
    GuessingGameConfig cfg;
    cfg.trials = 3000;
    auto factory = [](std::uint64_t s) { return devices::cheating_low_entropy_pair(0.2, 4, s); };
    cfg.threads = 1;
    const auto one = run_guessing_game(factory, cfg, 8);
    cfg.threads = 5;
    const auto five = run_guessing_game(factory, cfg, 8);
    CHECK(one.successes == five.successes);
    CHECK(one.successes_by_y == five.successes_by_y);
    CHECK(to_json(one).dump() == to_json(five).dump());
}

TEST_CASE("config validation") {
    GuessingGameConfig cfg;
    cfg.decision_radius = 0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.decision_radius = 0.2;
    cfg.b0 = BitVector(5);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("triangle step") {
    Xoshiro256 rng(6);
    int premises = 0;
    for (int i = 0; i < 20000; ++i) {
        const std::size_t k = 25;
        BitVector b(k), a0(k), a1(k);
        for (std::size_t j = 0; j < k; ++j) {
            b.set(j, rng() >> 63);
            a0.set(j, b[j] != (rng.uniform01() < 0.1));
            a1.set(j, b[j] == (rng.uniform01() < 0.1));
        }
        if (relative_hamming_distance(a0, b) <= 0.16 && relative_hamming_distance(a1, b) >= 0.84) ++premises;
        CHECK(triangle_core_holds(a0, a1, b));
    }
    CHECK(premises > 1000);
}
