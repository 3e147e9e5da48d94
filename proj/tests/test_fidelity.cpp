#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sfq/fidelity.hpp"

using namespace sfq;

namespace {

constexpr double kPi = 3.14159265358979323846;

TransmonParams base_params(int dim = 8) {
    TransmonParams p;
    p.f01 = 5.0;
    p.mu_mag = 0.25;
    p.theta = 0.024;
    p.dim = dim;
    return p;
}

}  // namespace

TEST_CASE("cardinal states are normalized and span the Bloch axes") {
    const auto states = cardinal_states(6);
    for (const auto& st : states) CHECK(std::abs(norm2(st) - 1.0) < 1e-14);
    CHECK(std::abs(states[4][0] - cx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(states[5][1] - cx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("identity against Y_pi/2 scores exactly 2/3") {
    const CMatrix id = CMatrix::identity(4);
    const FidelityResult fid = average_fidelity(id, GateSpec::y_half_pi(), true);
    CHECK(std::abs(fid.fidelity - 2.0 / 3.0) < 1e-12);
    CHECK(fid.leakage < 1e-14);
}

TEST_CASE("the exact gate scores 1") {
    const GateSpec gate = GateSpec::y_half_pi();
    CMatrix u = CMatrix::identity(5);
    u(0, 0) = gate.matrix[0];
    u(0, 1) = gate.matrix[1];
    u(1, 0) = gate.matrix[2];
    u(1, 1) = gate.matrix[3];
    const FidelityResult fid = average_fidelity(u, gate, true);
    CHECK(std::abs(fid.fidelity - 1.0) < 1e-12);
    CHECK(std::abs(fid.phi_z) < 1e-9);
}

TEST_CASE("virtual-Z optimization recovers a known extra phase") {
    const GateSpec gate = GateSpec::y_half_pi();
    const double phi = 0.7;
    CMatrix u = CMatrix::identity(4);
    // Z(-phi) applied after the exact gate; optimal correction is +phi.
    u(0, 0) = gate.matrix[0];
    u(0, 1) = gate.matrix[1];
    u(1, 0) = gate.matrix[2] * std::exp(cx{0.0, -phi});
    u(1, 1) = gate.matrix[3] * std::exp(cx{0.0, -phi});
    const FidelityResult fid = average_fidelity(u, gate, true);
    CHECK(std::abs(fid.fidelity - 1.0) < 1e-12);
    CHECK(std::abs(fid.phi_z - phi) < 1e-9);
}

TEST_CASE("frozen oracle: fidelity and phase of the +-0+ sequence") {
    TransmonParams p = base_params(6);
    const StaticModel m = build_static(p);
    const PropagatorSet props = build_propagators(m, p, 25.0, PulseShape::delta(), 0.1);
    TritSequence seq;
    seq.f_clock = 25.0;
    seq.symbols = {1, -1, 0, 1};
    const FidelityResult fid =
        fidelity_from_columns(sequence_columns(props, seq), GateSpec::y_half_pi(), true);
    CHECK(std::abs(fid.fidelity - 0.66773448149383086) < 1e-10);
    CHECK(std::abs(fid.phi_z - (-1.410759003832972)) < 1e-8);
}

TEST_CASE("unipolar resonant train implements Y_pi/2 near theta = (pi/2)/n") {
    TransmonParams p = base_params(10);
    const StaticModel m = build_static(p);
    const int n = 300;
    TritSequence seq;
    seq.f_clock = p.f01;
    seq.symbols.assign(n, -1);

    const GateSpec gate = GateSpec::y_half_pi();
    const ThetaOpt opt =
        optimal_theta(seq, m, p, PulseShape::delta(), gate, 0.5 * kPi / n);
    CHECK(std::abs(opt.theta_star - 0.5 * kPi / n) < 2e-4);
    CHECK(1.0 - opt.fid.fidelity < 2e-4);
}

TEST_CASE("optimal_theta rejects pulse-free sequences") {
    TransmonParams p = base_params(6);
    const StaticModel m = build_static(p);
    TritSequence seq;
    seq.f_clock = 25.0;
    seq.symbols.assign(8, 0);
    CHECK_THROWS_AS(
        optimal_theta(seq, m, p, PulseShape::delta(), GateSpec::y_half_pi(), 0.02),
        std::invalid_argument);
}

TEST_CASE("fidelity_from_columns matches average_fidelity") {
    TransmonParams p = base_params(8);
    const StaticModel m = build_static(p);
    const PropagatorSet props = build_propagators(m, p, 25.0, PulseShape::delta(), 0.07);
    TritSequence seq;
    seq.f_clock = 25.0;
    seq.symbols = {1, 0, -1, 1, 1, 0, -1};
    const FidelityResult a =
        average_fidelity(sequence_unitary(props, seq), GateSpec::y_half_pi(), true);
    const FidelityResult b =
        fidelity_from_columns(sequence_columns(props, seq), GateSpec::y_half_pi(), true);
    CHECK(std::abs(a.fidelity - b.fidelity) < 1e-12);
    CHECK(std::abs(a.leakage - b.leakage) < 1e-12);
}
