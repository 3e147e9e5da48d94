#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sfq/propagation.hpp"

using namespace sfq;

namespace {

constexpr double kPi = 3.14159265358979323846;

TransmonParams row3_params(int dim = 10) {
    TransmonParams p;
    p.f01 = 5.0;
    p.mu_mag = 0.25;
    p.theta = 0.024;
    p.dim = dim;
    return p;
}

TritSequence random_sequence(std::size_t length, double f_clock, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> trit(-1, 1);
    TritSequence s;
    s.f_clock = f_clock;
    s.symbols.resize(length);
    for (auto& v : s.symbols) v = static_cast<int8_t>(trit(rng));
    return s;
}

}  // namespace

TEST_CASE("slot propagators are unitary") {
    const TransmonParams p = row3_params(8);
    const StaticModel m = build_static(p);
    for (const PulseShape& shape :
         {PulseShape::delta(), PulseShape::rectangular(1e-3), PulseShape::gaussian(0.0015)}) {
        const PropagatorSet props = build_propagators(m, p, 25.0, shape, 0.03);
        const CMatrix id = CMatrix::identity(8);
        CHECK((props.u_free * props.u_free.adjoint()).max_abs_diff(id) < 1e-10);
        CHECK((props.u_plus * props.u_plus.adjoint()).max_abs_diff(id) < 1e-10);
        CHECK((props.u_minus * props.u_minus.adjoint()).max_abs_diff(id) < 1e-10);
    }
}

TEST_CASE("all-zero sequence is pure free evolution") {
    const TransmonParams p = row3_params(8);
    const StaticModel m = build_static(p);
    const PropagatorSet props = build_propagators(m, p, 25.0, PulseShape::delta(), 0.03);
    TritSequence seq;
    seq.f_clock = 25.0;
    seq.symbols.assign(12, 0);
    const CMatrix u = sequence_unitary(props, seq);
    CHECK(u.max_abs_diff(m.free_propagator(12.0 / 25.0)) < 1e-10);
}

TEST_CASE("sequence_columns matches the full unitary product") {
    const TransmonParams p = row3_params(8);
    const StaticModel m = build_static(p);
    const PropagatorSet props = build_propagators(m, p, 25.0, PulseShape::delta(), 0.03);
    const TritSequence seq = random_sequence(40, 25.0, 7);
    const CMatrix u = sequence_unitary(props, seq);
    const auto cols = sequence_columns(props, seq);
    for (int i = 0; i < 8; ++i) {
        CHECK(std::abs(u(i, 0) - cols[0][i]) < 1e-12);
        CHECK(std::abs(u(i, 1) - cols[1][i]) < 1e-12);
    }
}

TEST_CASE("polarity flip conjugates the pulse part") {
    const TransmonParams p = row3_params(8);
    const StaticModel m = build_static(p);
    const PropagatorSet props = build_propagators(m, p, 25.0, PulseShape::delta(), 0.05);
    // u_plus = u_free P(+), u_minus = u_free P(-), P(-) = P(+)^dagger
    const CMatrix pulse_plus = props.u_free.adjoint() * props.u_plus;
    const CMatrix pulse_minus = props.u_free.adjoint() * props.u_minus;
    CHECK(pulse_minus.max_abs_diff(pulse_plus.adjoint()) < 1e-10);
}

TEST_CASE("norm conservation over long random sequences") {
    const TransmonParams p = row3_params(10);
    const StaticModel m = build_static(p);
    const PropagatorSet props = build_propagators(m, p, 25.0, PulseShape::delta(), 0.024);
    cvector psi(10, cx{0.0, 0.0});
    psi[0] = 1.0;
    const TritSequence seq = random_sequence(300, 25.0, 11);
    const EvolutionTrace trace = evolve_sequence(props, seq, psi, true);
    CHECK(std::abs(norm2(trace.final_state) - 1.0) < 1e-9);
    for (const auto& w : trace.populations) {
        double sum = 0.0;
        for (double v : w) sum += v;
        // dim=10: the six recorded levels hold almost all population
        CHECK(sum <= 1.0 + 1e-9);
        CHECK(sum > 0.99);
    }
}

TEST_CASE("two-level resonant train reproduces sin^2(n theta / 2)") {
    TransmonParams p = row3_params(2);
    const StaticModel m = build_static(p);
    const double theta = 0.12;
    const PropagatorSet props = build_propagators(m, p, p.f01, PulseShape::delta(), theta);
    TritSequence seq;
    seq.f_clock = p.f01;
    seq.symbols.assign(10, -1);
    cvector psi{cx{1.0, 0.0}, cx{0.0, 0.0}};
    const EvolutionTrace trace = evolve_sequence(props, seq, psi, false);
    const double w1 = std::norm(trace.final_state[1]);
    CHECK(std::abs(w1 - std::pow(std::sin(10 * theta / 2.0), 2)) < 1e-10);
}

TEST_CASE("frozen oracle: +-0+ columns at theta=0.1, dim=6") {
    TransmonParams p = row3_params(6);
    const StaticModel m = build_static(p);
    const PropagatorSet props = build_propagators(m, p, 25.0, PulseShape::delta(), 0.1);
    TritSequence seq;
    seq.f_clock = 25.0;
    seq.symbols = {1, -1, 0, 1};
    const CMatrix u = sequence_unitary(props, seq);
    CHECK(std::abs(u(0, 0) - cx{0.99514064923347267, 0.061250982166618714}) < 1e-10);
    CHECK(std::abs(u(1, 0) - cx{-0.072803466196415659, 0.024830522223096556}) < 1e-10);
}

TEST_CASE("delta and 0.01 ps rectangular propagators agree") {
    const TransmonParams p = row3_params(8);
    const StaticModel m = build_static(p);
    const PropagatorSet d = build_propagators(m, p, 25.0, PulseShape::delta(), 0.024);
    const PropagatorSet r = build_propagators(m, p, 25.0, PulseShape::rectangular(1e-5), 0.024);
    CHECK(d.u_plus.frobenius_diff(r.u_plus) < 1e-4);
    CHECK(d.u_minus.frobenius_diff(r.u_minus) < 1e-4);
}

TEST_CASE("RK4 oracle agrees with the propagator product") {
    TransmonParams p = row3_params(8);
    const StaticModel m = build_static(p);
    const PulseShape shape = PulseShape::rectangular(1e-3);
    const double theta = 0.05;
    const PropagatorSet props = build_propagators(m, p, 25.0, shape, theta);

    for (std::uint32_t seed : {101u, 102u, 103u}) {
        const TritSequence seq = random_sequence(30, 25.0, seed);
        cvector psi(8, cx{0.0, 0.0});
        psi[0] = cx{1.0 / std::sqrt(2.0), 0.0};
        psi[1] = cx{0.0, 1.0 / std::sqrt(2.0)};

        const EvolutionTrace prod = evolve_sequence(props, seq, psi, false);
        const DriveTable drive = sequence_drive(seq, shape, theta, m);
        const EvolutionTrace rk = integrate_shaped(m, p, drive, 2e-5, psi);

        for (int i = 0; i < 8; ++i) {
            const double wp = std::norm(prod.final_state[i]);
            const double wr = std::norm(rk.final_state[i]);
            CHECK(std::abs(wp - wr) < 1e-7);
        }
    }
}

TEST_CASE("pulse support wider than the slot is rejected") {
    const TransmonParams p = row3_params(6);
    const StaticModel m = build_static(p);
    CHECK_THROWS_AS(build_propagators(m, p, 25.0, PulseShape::rectangular(0.05), 0.024),
                    std::invalid_argument);
}

TEST_CASE("gate time arithmetic") {
    TritSequence seq;
    seq.f_clock = 25.0;
    seq.symbols.assign(120, 1);
    CHECK(seq.gate_time() == doctest::Approx(4.76).epsilon(1e-14));
}
