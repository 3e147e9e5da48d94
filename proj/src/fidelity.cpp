#include "sfq/fidelity.hpp"

#include <cmath>
#include <stdexcept>

namespace sfq {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 2x2 helpers, row-major std::array<cx,4>
using Mat2 = std::array<cx, 4>;

Mat2 mul2(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 adj2(const Mat2& a) {
    return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

cx expect(const Mat2& m, const cx* st) {
    const cx r0 = m[0] * st[0] + m[1] * st[1];
    const cx r1 = m[2] * st[0] + m[3] * st[1];
    return std::conj(st[0]) * r0 + std::conj(st[1]) * r1;
}

const std::array<std::array<cx, 2>, 6>& cardinal2() {
    static const double s = 1.0 / std::sqrt(2.0);
    static const std::array<std::array<cx, 2>, 6> states = {{
        {cx{s, 0}, cx{s, 0}},   // x+
        {cx{s, 0}, cx{-s, 0}},  // x-
        {cx{s, 0}, cx{0, s}},   // y+
        {cx{s, 0}, cx{0, -s}},  // y-
        {cx{1, 0}, cx{0, 0}},   // z+
        {cx{0, 0}, cx{1, 0}},   // z-
    }};
    return states;
}

FidelityResult fidelity_of_block(const Mat2& block, double leakage,
                                 const GateSpec& gate, bool optimize_z) {
    const Mat2 vdag = adj2(block);
    const Mat2 p0{cx{1, 0}, cx{0, 0}, cx{0, 0}, cx{0, 0}};
    const Mat2 p1{cx{0, 0}, cx{0, 0}, cx{0, 0}, cx{1, 0}};
    const Mat2 ma = mul2(mul2(vdag, p0), gate.matrix);
    const Mat2 mb = mul2(mul2(vdag, p1), gate.matrix);

    FidelityResult out;
    out.leakage = leakage;
    if (optimize_z) {
        // Each cardinal term is |a + b e^{-i phi}|^2; the sum is
        // c0 + 2 Re(c e^{i phi}), maximized at phi = -arg(c).
        double c0 = 0.0;
        cx c{0.0, 0.0};
        for (const auto& st : cardinal2()) {
            const cx a = expect(ma, st.data());
            const cx b = expect(mb, st.data());
            c0 += std::norm(a) + std::norm(b);
            c += a * std::conj(b);
        }
        out.fidelity = (c0 + 2.0 * std::abs(c)) / 6.0;
        out.phi_z = std::abs(c) > 0.0 ? -std::arg(c) : 0.0;
    } else {
        double f = 0.0;
        for (const auto& st : cardinal2()) {
            const cx a = expect(ma, st.data());
            const cx b = expect(mb, st.data());
            f += std::norm(a + b);
        }
        out.fidelity = f / 6.0;
        out.phi_z = 0.0;
    }
    return out;
}

}  // namespace

GateSpec GateSpec::make(Axis axis, double angle) {
    GateSpec g;
    g.axis = axis;
    g.angle = angle;
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    if (axis == Axis::X) {
        g.matrix = {cx{c, 0}, cx{0, -s}, cx{0, -s}, cx{c, 0}};
    } else {
        g.matrix = {cx{c, 0}, cx{-s, 0}, cx{s, 0}, cx{c, 0}};
    }
    return g;
}

GateSpec GateSpec::y_half_pi() { return make(Axis::Y, 0.5 * kPi); }

std::array<cvector, 6> cardinal_states(int dim) {
    if (dim < 2) throw std::invalid_argument("cardinal_states: dim must be >= 2");
    std::array<cvector, 6> out;
    const auto& two = cardinal2();
    for (std::size_t i = 0; i < 6; ++i) {
        out[i].assign(dim, cx{0.0, 0.0});
        out[i][0] = two[i][0];
        out[i][1] = two[i][1];
    }
    return out;
}

FidelityResult average_fidelity(const CMatrix& u_full, const GateSpec& gate, bool optimize_z) {
    const std::size_t dim = u_full.dim();
    if (dim < 2) throw std::invalid_argument("average_fidelity: dim must be >= 2");
    Mat2 block{u_full(0, 0), u_full(0, 1), u_full(1, 0), u_full(1, 1)};
    double mass = 0.0;
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 2; ++i) mass += std::norm(u_full(i, j));
    return fidelity_of_block(block, 1.0 - 0.5 * mass, gate, optimize_z);
}

FidelityResult fidelity_from_columns(const std::array<cvector, 2>& cols,
                                     const GateSpec& gate, bool optimize_z) {
    Mat2 block{cols[0][0], cols[1][0], cols[0][1], cols[1][1]};
    const double mass = std::norm(cols[0][0]) + std::norm(cols[0][1]) +
                        std::norm(cols[1][0]) + std::norm(cols[1][1]);
    return fidelity_of_block(block, 1.0 - 0.5 * mass, gate, optimize_z);
}

ThetaOpt optimal_theta(const TritSequence& seq, const StaticModel& m,
                       const TransmonParams& p, const PulseShape& shape,
                       const GateSpec& gate, double theta_hint) {
    if (theta_hint <= 0.0) throw std::invalid_argument("optimal_theta: hint must be positive");
    bool has_pulse = false;
    for (int8_t s : seq.symbols) has_pulse |= (s != 0);
    if (!has_pulse) throw std::invalid_argument("optimal_theta: sequence has no pulses");

    auto eval = [&](double theta) {
        const PropagatorSet props = build_propagators(m, p, seq.f_clock, shape, theta);
        return fidelity_from_columns(sequence_columns(props, seq), gate, true).fidelity;
    };

    double lo = 0.5 * theta_hint, hi = 2.0 * theta_hint;
    int npts = 17;
    double a = 0.0, b = 0.0;
    for (int attempt = 0;; ++attempt) {
        int best = 0;
        double best_f = -1.0;
        for (int i = 0; i < npts; ++i) {
            const double th = lo + (hi - lo) * i / (npts - 1);
            const double f = eval(th);
            if (f > best_f) {
                best_f = f;
                best = i;
            }
        }
        if (best > 0 && best < npts - 1) {
            a = lo + (hi - lo) * (best - 1) / (npts - 1);
            b = lo + (hi - lo) * (best + 1) / (npts - 1);
            break;
        }
        if (attempt == 1)
            throw std::runtime_error("optimal_theta: no interior maximum in widened bracket");
        lo = 0.25 * theta_hint;
        hi = 4.0 * theta_hint;
        npts = 33;
    }

    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = eval(c), fd = eval(d);
    while (b - a > 1e-7) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = eval(d);
        }
    }
    ThetaOpt res;
    res.theta_star = 0.5 * (a + b);
    const PropagatorSet props = build_propagators(m, p, seq.f_clock, shape, res.theta_star);
    res.fid = fidelity_from_columns(sequence_columns(props, seq), gate, true);
    return res;
}

}  // namespace sfq
