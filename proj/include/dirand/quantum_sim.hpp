#pragma once

#include "dirand/rng.hpp"

#include <array>
#include <utility>

// Two-qubit real-amplitude statevector engine: just enough to realize the
// honest CHSH and extended-CHSH strategies exactly.
namespace dirand::quantum {

// Amplitudes over |00>, |01>, |10>, |11>; the first index is qubit A.
struct TwoQubitState {
    std::array<double, 4> amplitudes{};

    double norm_squared() const noexcept;
    bool is_normalized(double tol = 1e-12) const noexcept;
};

// (|00> + |11>) / sqrt(2)
TwoQubitState epr_pair() noexcept;

// Real-plane measurement basis {cos t|0> + sin t|1>, sin t|0> - cos t|1>};
// the first vector is outcome 0. Stored reduced to (-pi, pi].
class MeasurementAngle {
public:
    constexpr MeasurementAngle() = default;
    explicit MeasurementAngle(double radians) noexcept;

    double radians() const noexcept { return theta_; }
    // Basis vector for the given outcome.
    std::array<double, 2> vector(int outcome) const noexcept;

private:
    double theta_ = 0.0;
};

enum class Qubit { a, b };

// P(a, b) indexed as [2a + b].
struct JointDistribution {
    std::array<double, 4> p{};

    double operator()(int a, int b) const noexcept { return p[static_cast<std::size_t>(2 * a + b)]; }
    double agree() const noexcept { return p[0] + p[3]; }
    double total() const noexcept { return p[0] + p[1] + p[2] + p[3]; }
};

// Born-rule joint distribution, P(a,b) = <e_a(thetaA) (x) e_b(thetaB) | psi>^2.
// Throws std::invalid_argument on an unnormalized state.
JointDistribution joint_outcome_distribution(const TwoQubitState& state, MeasurementAngle theta_a,
                                             MeasurementAngle theta_b);

// Closed form for the EPR pair: P(a=b) = cos^2(thetaA - thetaB), split evenly.
JointDistribution epr_joint_distribution(MeasurementAngle theta_a, MeasurementAngle theta_b) noexcept;

// Samples (a, b) by inverse CDF over the four outcomes; one uniform draw.
std::pair<int, int> sample_joint(const TwoQubitState& state, MeasurementAngle theta_a,
                                 MeasurementAngle theta_b, Xoshiro256& rng);

// Result of projectively measuring one qubit: the outcome-0 probability and
// the normalized post-measurement state of the other qubit per outcome.
struct Collapse {
    double p0 = 0.0;
    std::array<std::array<double, 2>, 2> remaining{};
};

Collapse measure_qubit(const TwoQubitState& state, Qubit which, MeasurementAngle theta);

// Outcome-0 probability of a single-qubit real state in the given basis.
// Values within 1e-12 of 0 or 1 are snapped so that identical bases give
// exactly repeatable outcomes.
double probability_zero(const std::array<double, 2>& qubit, MeasurementAngle theta) noexcept;

} // namespace dirand::quantum
