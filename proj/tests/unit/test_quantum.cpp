#include "dirand/quantum_sim.hpp"
#include "dirand/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

using namespace dirand;
using namespace dirand::quantum;

namespace {

constexpr double kPi = std::numbers::pi;
const double kCos2Pi8 = std::pow(std::cos(kPi / 8), 2);

// Independent Born rule: tensor the basis vectors by hand.
double born(const TwoQubitState& s, double ta, double tb, int a, int b) {
    const double ea[2][2] = {{std::cos(ta), std::sin(ta)}, {std::sin(ta), -std::cos(ta)}};
    const double eb[2][2] = {{std::cos(tb), std::sin(tb)}, {std::sin(tb), -std::cos(tb)}};
    double amp = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) amp += ea[a][i] * eb[b][j] * s.amplitudes[2 * i + j];
    return amp * amp;
}

double sampled_agreement(double ta, double tb, int n, std::uint64_t seed) {
    Xoshiro256 rng(seed);
    int agree = 0;
    for (int i = 0; i < n; ++i) {
        const auto [a, b] = sample_joint(epr_pair(), MeasurementAngle(ta), MeasurementAngle(tb), rng);
        agree += a == b;
    }
    return agree / double(n);
}

} // namespace

TEST_CASE("epr pair") {
    const auto s = epr_pair();
    CHECK(s.amplitudes[0] == doctest::Approx(0.7071067811865476).epsilon(1e-15));
    CHECK(s.amplitudes[1] == 0.0);
    CHECK(s.amplitudes[2] == 0.0);
    CHECK(s.amplitudes[3] == doctest::Approx(0.7071067811865476).epsilon(1e-15));
    CHECK(s.is_normalized());
}

TEST_CASE("joint distribution matches an independent Born-rule evaluation") {
    Xoshiro256 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        TwoQubitState s;
        double n = 0;
        for (auto& a : s.amplitudes) {
            a = rng.uniform01() - 0.5;
            n += a * a;
        }
        for (auto& a : s.amplitudes) a /= std::sqrt(n);
        const double ta = (rng.uniform01() * 2 - 1) * kPi, tb = (rng.uniform01() * 2 - 1) * kPi;
        const auto d = joint_outcome_distribution(s, MeasurementAngle(ta), MeasurementAngle(tb));
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) CHECK(d(a, b) == doctest::Approx(born(s, ta, tb, a, b)).epsilon(1e-12));
        CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-12));
    }
    TwoQubitState bad;
    bad.amplitudes = {1, 1, 0, 0};
    CHECK_THROWS_AS(joint_outcome_distribution(bad, MeasurementAngle(0), MeasurementAngle(0)), std::invalid_argument);
}

TEST_CASE("EPR agreement closed forms") {
    auto agree = [](double ta, double tb) {
        return joint_outcome_distribution(epr_pair(), MeasurementAngle(ta), MeasurementAngle(tb)).agree();
    };
    CHECK(agree(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(agree(0, kPi / 8) == doctest::Approx(0.8535533906).epsilon(1e-10));
    CHECK(agree(kPi / 4, 0) == doctest::Approx(0.5).epsilon(1e-14));
    for (double ta : {0.0, 0.3, -1.1, 2.5})
        for (double tb : {0.0, 0.7, -2.9}) {
            const auto c = epr_joint_distribution(MeasurementAngle(ta), MeasurementAngle(tb));
            CHECK(c.agree() == doctest::Approx(agree(ta, tb)).epsilon(1e-12));
        }
}

TEST_CASE("sampling is reproducible and matches the closed form") {
    Xoshiro256 r1(77), r2(77);
    for (int i = 0; i < 50; ++i)
        CHECK(sample_joint(epr_pair(), MeasurementAngle(0), MeasurementAngle(kPi / 8), r1) ==
              sample_joint(epr_pair(), MeasurementAngle(0), MeasurementAngle(kPi / 8), r2));
    CHECK(std::abs(sampled_agreement(0, kPi / 8, 1000000, 1) - kCos2Pi8) < 0.002);
    CHECK(std::abs(sampled_agreement(kPi / 4, 0, 100000, 2) - 0.5) < 0.006);
    CHECK(sampled_agreement(0, 0, 10000, 3) == 1.0);
}

TEST_CASE("sequential measurement reproduces the joint distribution") {
    const double ta = 0.4, tb = -0.9;
    const auto col = measure_qubit(epr_pair(), Qubit::a, MeasurementAngle(ta));
    const auto d = joint_outcome_distribution(epr_pair(), MeasurementAngle(ta), MeasurementAngle(tb));
    for (int a = 0; a < 2; ++a) {
        const double pa = a == 0 ? col.p0 : 1 - col.p0;
        const double pb0 = probability_zero(col.remaining[a], MeasurementAngle(tb));
        CHECK(pa * pb0 == doctest::Approx(d(a, 0)).epsilon(1e-12));
        CHECK(pa * (1 - pb0) == doctest::Approx(d(a, 1)).epsilon(1e-12));
    }
    CHECK(probability_zero(col.remaining[0], MeasurementAngle(ta)) == 1.0);
    CHECK(probability_zero(col.remaining[1], MeasurementAngle(ta)) == 0.0);
}

TEST_CASE("angles reduce to (-pi, pi]") {
    CHECK(MeasurementAngle(3 * kPi).radians() == doctest::Approx(kPi));
    CHECK(MeasurementAngle(-kPi).radians() == doctest::Approx(kPi));
    CHECK(MeasurementAngle(kPi / 4 + 2 * kPi).radians() == doctest::Approx(kPi / 4));
}
