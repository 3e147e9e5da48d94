#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sfq/robustness.hpp"

using namespace sfq;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Solution {
    TransmonParams p;
    TritSequence seq;
    double theta;
};

// Cheap known-good solution: unipolar resonant train implementing Y_pi/2.
Solution train_solution(int n = 320) {
    Solution s;
    s.p.f01 = 5.0;
    s.p.mu_mag = 0.25;
    s.p.theta = 0.024;
    s.p.dim = 8;
    s.seq.f_clock = s.p.f01;
    s.seq.symbols.assign(n, -1);
    const StaticModel m = build_static(s.p);
    s.theta = optimal_theta(s.seq, m, s.p, PulseShape::delta(), GateSpec::y_half_pi(),
                            0.5 * kPi / n)
                  .theta_star;
    return s;
}

}  // namespace

TEST_CASE("spec validation") {
    SweepSpec spec;
    spec.points = 4;
    spec.half_range = 0.01;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.points = 5;
    spec.half_range = 0.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    CHECK(SweepSpec::parse_parameter("mu") == SweepSpec::Parameter::Mu);
    CHECK_THROWS_AS(SweepSpec::parse_parameter("bogus"), std::invalid_argument);
}

TEST_CASE("theta sweep: center value, curve sanity, window around argmin") {
    const Solution sol = train_solution();
    SweepSpec spec;
    spec.parameter = SweepSpec::Parameter::Theta;
    spec.center = sol.theta;
    spec.half_range = 0.002;
    spec.points = 41;

    const SweepResult res =
        sweep(sol.seq, sol.p, PulseShape::delta(), GateSpec::y_half_pi(), spec, sol.theta);
    REQUIRE(res.grid.size() == 41);

    const int ic = 20;  // center index
    for (double v : res.infidelity) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
    const double min_val = *std::min_element(res.infidelity.begin(), res.infidelity.end());
    CHECK(min_val <= res.infidelity[ic] + 1e-15);

    // the center is an optimum of a high-fidelity solution: window must exist
    REQUIRE(res.has_window);
    CHECK(res.window_lo >= res.grid.front() - 1e-15);
    CHECK(res.window_hi <= res.grid.back() + 1e-15);
    const int imin = static_cast<int>(
        std::min_element(res.infidelity.begin(), res.infidelity.end()) -
        res.infidelity.begin());
    CHECK(res.window_lo <= res.grid[imin]);
    CHECK(res.window_hi >= res.grid[imin]);
}

TEST_CASE("zero-detuning point reproduces the stored infidelity") {
    const Solution sol = train_solution(120);
    const StaticModel m = build_static(sol.p);
    const PropagatorSet props =
        build_propagators(m, sol.p, sol.seq.f_clock, PulseShape::delta(), sol.theta);
    const double stored =
        1.0 - fidelity_from_columns(sequence_columns(props, sol.seq), GateSpec::y_half_pi(),
                                    true)
                  .fidelity;

    SweepSpec spec;
    spec.parameter = SweepSpec::Parameter::F01;
    spec.center = sol.p.f01;
    spec.half_range = 0.001;
    spec.points = 5;
    const SweepResult res =
        sweep(sol.seq, sol.p, PulseShape::delta(), GateSpec::y_half_pi(), spec, sol.theta);
    CHECK(std::abs(res.infidelity[2] - stored) < 1e-12);
}

TEST_CASE("f_clock sweep keeps symbols fixed and moves slot duration") {
    const Solution sol = train_solution(80);
    SweepSpec spec;
    spec.parameter = SweepSpec::Parameter::FClock;
    spec.center = sol.seq.f_clock;
    spec.half_range = 0.05;
    spec.points = 21;
    const SweepResult res =
        sweep(sol.seq, sol.p, PulseShape::delta(), GateSpec::y_half_pi(), spec, sol.theta);
    // detuning the clock off the qubit frequency must hurt a resonant train
    CHECK(res.infidelity.front() > res.infidelity[10]);
    CHECK(res.infidelity.back() > res.infidelity[10]);
}

TEST_CASE("virtual-Z freeze flag degrades or preserves fidelity") {
    const Solution sol = train_solution(80);
    SweepSpec spec;
    spec.parameter = SweepSpec::Parameter::Theta;
    spec.center = sol.theta;
    spec.half_range = 0.004;
    spec.points = 11;
    const SweepResult with_z =
        sweep(sol.seq, sol.p, PulseShape::delta(), GateSpec::y_half_pi(), spec, sol.theta);
    spec.optimize_z = false;
    const SweepResult frozen =
        sweep(sol.seq, sol.p, PulseShape::delta(), GateSpec::y_half_pi(), spec, sol.theta);
    for (int i = 0; i < 11; ++i) CHECK(frozen.infidelity[i] >= with_z.infidelity[i] - 1e-12);
}
