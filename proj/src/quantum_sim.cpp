#include "dirand/quantum_sim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dirand::quantum {
namespace {

constexpr double kSnap = 1e-12;

double snap_probability(double p) noexcept {
    if (p < kSnap) return 0.0;
    if (p > 1.0 - kSnap) return 1.0;
    return p;
}

void require_normalized(const TwoQubitState& state) {
    if (!state.is_normalized()) throw std::invalid_argument("two-qubit state is not normalized");
}

} // namespace

double TwoQubitState::norm_squared() const noexcept {
    double s = 0.0;
    for (double a : amplitudes) s += a * a;
    return s;
}

bool TwoQubitState::is_normalized(double tol) const noexcept {
    return std::abs(norm_squared() - 1.0) <= tol;
}

TwoQubitState epr_pair() noexcept {
    const double h = std::numbers::sqrt2 / 2.0;
    return TwoQubitState{{h, 0.0, 0.0, h}};
}

MeasurementAngle::MeasurementAngle(double radians) noexcept {
    double t = std::remainder(radians, 2.0 * std::numbers::pi);
    if (t <= -std::numbers::pi) t += 2.0 * std::numbers::pi;
    theta_ = t;
}

std::array<double, 2> MeasurementAngle::vector(int outcome) const noexcept {
    const double c = std::cos(theta_);
    const double s = std::sin(theta_);
    if (outcome == 0) return {c, s};
    return {s, -c};
}

JointDistribution joint_outcome_distribution(const TwoQubitState& state, MeasurementAngle theta_a,
                                             MeasurementAngle theta_b) {
    require_normalized(state);
    JointDistribution d;
    const auto& psi = state.amplitudes;
    for (int a = 0; a < 2; ++a) {
        const auto ea = theta_a.vector(a);
        for (int b = 0; b < 2; ++b) {
            const auto eb = theta_b.vector(b);
            const double amp = ea[0] * eb[0] * psi[0] + ea[0] * eb[1] * psi[1] +
                               ea[1] * eb[0] * psi[2] + ea[1] * eb[1] * psi[3];
            d.p[static_cast<std::size_t>(2 * a + b)] = amp * amp;
        }
    }
    return d;
}

JointDistribution epr_joint_distribution(MeasurementAngle theta_a, MeasurementAngle theta_b) noexcept {
    const double c = std::cos(theta_a.radians() - theta_b.radians());
    const double same = 0.5 * c * c;
    const double diff = 0.5 - same;
    return JointDistribution{{same, diff, diff, same}};
}

std::pair<int, int> sample_joint(const TwoQubitState& state, MeasurementAngle theta_a,
                                 MeasurementAngle theta_b, Xoshiro256& rng) {
    const JointDistribution d = joint_outcome_distribution(state, theta_a, theta_b);
    const double u = rng.uniform01() * d.total();
    double cumulative = 0.0;
    for (int i = 0; i < 3; ++i) {
        cumulative += d.p[static_cast<std::size_t>(i)];
        if (u < cumulative) return {i >> 1, i & 1};
    }
    return {1, 1};
}

Collapse measure_qubit(const TwoQubitState& state, Qubit which, MeasurementAngle theta) {
    require_normalized(state);
    const auto& psi = state.amplitudes;
    // Rows: measured qubit value; columns: other qubit value.
    const std::array<std::array<double, 2>, 2> m =
        which == Qubit::a ? std::array<std::array<double, 2>, 2>{{{psi[0], psi[1]}, {psi[2], psi[3]}}}
                          : std::array<std::array<double, 2>, 2>{{{psi[0], psi[2]}, {psi[1], psi[3]}}};
    Collapse out;
    double p[2];
    for (int outcome = 0; outcome < 2; ++outcome) {
        const auto e = theta.vector(outcome);
        std::array<double, 2> v{e[0] * m[0][0] + e[1] * m[1][0], e[0] * m[0][1] + e[1] * m[1][1]};
        const double n2 = v[0] * v[0] + v[1] * v[1];
        p[outcome] = n2;
        if (n2 > 0.0) {
            const double n = std::sqrt(n2);
            v[0] /= n;
            v[1] /= n;
        } else {
            v = {1.0, 0.0};
        }
        out.remaining[static_cast<std::size_t>(outcome)] = v;
    }
    out.p0 = snap_probability(p[0] / (p[0] + p[1]));
    return out;
}

double probability_zero(const std::array<double, 2>& qubit, MeasurementAngle theta) noexcept {
    const auto e = theta.vector(0);
    const double amp = e[0] * qubit[0] + e[1] * qubit[1];
    return snap_probability(amp * amp);
}

} // namespace dirand::quantum
