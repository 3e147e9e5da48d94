#include "sfq/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

namespace sfq {

void TritSequence::validate() const {
    if (symbols.empty()) throw std::invalid_argument("TritSequence: empty sequence");
    if (f_clock <= 0.0) throw std::invalid_argument("TritSequence: f_clock must be positive");
    for (int8_t s : symbols)
        if (s < -1 || s > 1) throw std::invalid_argument("TritSequence: symbol outside {-1,0,+1}");
}

double PulseShape::support() const {
    switch (kind) {
        case Kind::Delta: return 0.0;
        case Kind::Rectangular: return width;
        case Kind::Gaussian: return 8.0 * sigma;
        case Kind::Tabulated:
            return samples.empty() ? 0.0 : samples.back().first - samples.front().first;
    }
    return 0.0;
}

PulseShape PulseShape::delta() {
    PulseShape s;
    s.kind = Kind::Delta;
    return s;
}

PulseShape PulseShape::rectangular(double tau_p) {
    PulseShape s;
    s.kind = Kind::Rectangular;
    s.width = tau_p;
    return s;
}

PulseShape PulseShape::gaussian(double sigma) {
    PulseShape s;
    s.kind = Kind::Gaussian;
    s.sigma = sigma;
    return s;
}

PulseShape PulseShape::tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("tabulated pulse needs at least two samples");
    PulseShape s;
    s.kind = Kind::Tabulated;
    s.samples = std::move(samples);
    return s;
}

namespace {

std::uint64_t hash_mix(std::uint64_t h, double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

// exp(-i (H0 + eps * D) dt) in the eigenbasis, D = i * gen.
CMatrix driven_step(const StaticModel& m, double eps, double dt) {
    const int n = m.dim;
    Eigen::MatrixXcd h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            h(i, j) = cx{0.0, 1.0} * m.gen_eig(i, j) * eps;
    for (int i = 0; i < n; ++i) h(i, i) += m.eigvals[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd ph(n);
    for (int i = 0; i < n; ++i) ph(i) = std::polar(1.0, -es.eigenvalues()(i) * dt);
    Eigen::MatrixXcd u = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    CMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = u(i, j);
    return out;
}

// Propagator over one pulse region for an extended shape, as a product of
// short constant-eps steps over the envelope.
CMatrix shaped_pulse(const StaticModel& m, const std::function<double(double)>& envelope,
                     double support, int steps) {
    CMatrix u = CMatrix::identity(m.dim);
    const double dt = support / steps;
    for (int k = 0; k < steps; ++k) {
        const double eps = envelope((k + 0.5) * dt);
        u = driven_step(m, eps, dt) * u;
    }
    return u;
}

}  // namespace

PropagatorSet build_propagators(const StaticModel& m, const TransmonParams& p,
                                double f_clock, const PulseShape& shape, double theta) {
    if (f_clock <= 0.0) throw std::invalid_argument("build_propagators: f_clock must be positive");
    if (theta < 0.0) throw std::invalid_argument("build_propagators: theta must be >= 0");
    if (!std::isfinite(theta)) throw std::invalid_argument("build_propagators: theta not finite");
    const double t_slot = 1.0 / f_clock;
    if (shape.support() >= t_slot)
        throw std::invalid_argument("build_propagators: pulse support exceeds clock slot");

    PropagatorSet set;
    set.f_clock = f_clock;
    set.theta = theta;
    set.u_free = m.free_propagator(t_slot);

    // Subspace rotation angle theta needs drive integral theta/2 divided by
    // the 0<->1 matrix element of the generator.
    const double integral = 0.5 * theta / m.drive_elem01;

    auto build = [&](double sgn) -> CMatrix {
        switch (shape.kind) {
            case PulseShape::Kind::Delta:
                return set.u_free * m.drive_exponential(sgn * integral);
            case PulseShape::Kind::Rectangular: {
                const double tau = shape.width;
                const double eps = sgn * integral / tau;
                if (!std::isfinite(eps))
                    throw std::invalid_argument("build_propagators: non-finite drive amplitude");
                return m.free_propagator(t_slot - tau) * driven_step(m, eps, tau);
            }
            case PulseShape::Kind::Gaussian: {
                const double sig = shape.sigma;
                const double sup = shape.support();
                // Normalize the truncated envelope integral exactly.
                const double raw = sig * std::sqrt(2.0 * std::acos(-1.0)) * std::erf(4.0 / std::sqrt(2.0));
                const double amp = sgn * integral / raw;
                auto env = [&](double t) {
                    const double u = (t - 0.5 * sup) / sig;
                    return amp * std::exp(-0.5 * u * u);
                };
                return m.free_propagator(t_slot - sup) * shaped_pulse(m, env, sup, 256);
            }
            case PulseShape::Kind::Tabulated: {
                const auto& tab = shape.samples;
                const double t0 = tab.front().first;
                const double sup = shape.support();
                double raw = 0.0;
                for (std::size_t i = 0; i + 1 < tab.size(); ++i)
                    raw += 0.5 * (tab[i].second + tab[i + 1].second) *
                           (tab[i + 1].first - tab[i].first);
                if (raw == 0.0)
                    throw std::invalid_argument("tabulated pulse has zero integral");
                const double scale = sgn * integral / raw;
                auto env = [&](double t) {
                    const double tt = t0 + t;
                    auto it = std::upper_bound(tab.begin(), tab.end(), tt,
                                               [](double v, const auto& s) { return v < s.first; });
                    if (it == tab.begin() || it == tab.end()) return 0.0;
                    const auto& hi = *it;
                    const auto& lo = *(it - 1);
                    const double w = (tt - lo.first) / (hi.first - lo.first);
                    return scale * ((1.0 - w) * lo.second + w * hi.second);
                };
                return m.free_propagator(t_slot - sup) * shaped_pulse(m, env, sup, 512);
            }
        }
        throw std::logic_error("unreachable");
    };

    set.u_plus = build(+1.0);
    set.u_minus = build(-1.0);

    std::uint64_t h = 0;
    h = hash_mix(h, p.f01);
    h = hash_mix(h, p.mu_mag);
    h = hash_mix(h, static_cast<double>(p.dim));
    h = hash_mix(h, f_clock);
    h = hash_mix(h, static_cast<double>(static_cast<int>(shape.kind)));
    h = hash_mix(h, shape.width);
    h = hash_mix(h, shape.sigma);
    h = hash_mix(h, theta);
    set.params_hash = h;
    return set;
}

EvolutionTrace evolve_sequence(const PropagatorSet& props, const TritSequence& seq,
                               const cvector& initial, bool record,
                               const StaticModel* fock_basis_of) {
    seq.validate();
    if (initial.size() != props.u_free.dim())
        throw std::invalid_argument("evolve_sequence: state dimension mismatch");
    if (std::abs(norm2(initial) - 1.0) > 1e-8)
        throw std::invalid_argument("evolve_sequence: initial state not normalized");

    const std::size_t dim = initial.size();
    const double t_slot = seq.slot_period();
    EvolutionTrace trace;
    cvector state = initial;
    cvector tmp(dim);

    auto record_point = [&](double t, const cvector& s) {
        std::array<double, 6> w{};
        if (fock_basis_of != nullptr) {
            cvector fock = fock_basis_of->eigvecs * s;
            for (std::size_t m = 0; m < 6 && m < dim; ++m) w[m] = std::norm(fock[m]);
        } else {
            for (std::size_t m = 0; m < 6 && m < dim; ++m) w[m] = std::norm(s[m]);
        }
        trace.times.push_back(t);
        trace.populations.push_back(w);
    };

    if (record) record_point(0.0, state);
    for (std::size_t k = 0; k < seq.symbols.size(); ++k) {
        props.slot(seq.symbols[k]).apply(tmp.data(), state.data());
        state.swap(tmp);
        if (record) record_point((k + 1.0) * t_slot, state);
    }
    trace.final_state = std::move(state);
    return trace;
}

CMatrix sequence_unitary(const PropagatorSet& props, const TritSequence& seq) {
    seq.validate();
    CMatrix u = CMatrix::identity(props.u_free.dim());
    for (int8_t s : seq.symbols) u = props.slot(s) * u;
    return u;
}

std::array<cvector, 2> sequence_columns(const PropagatorSet& props, const TritSequence& seq) {
    const std::size_t dim = props.u_free.dim();
    std::array<cvector, 2> cols{cvector(dim), cvector(dim)};
    cols[0][0] = 1.0;
    cols[1][1] = 1.0;
    cvector tmp(dim);
    for (int8_t s : seq.symbols) {
        const CMatrix& u = props.slot(s);
        for (auto& c : cols) {
            u.apply(tmp.data(), c.data());
            c.swap(tmp);
        }
    }
    return cols;
}

double DriveTable::eval(double t) const {
    if (times.empty() || t < times.front() || t > times.back()) return 0.0;
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return values.front();
    const std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
    if (piecewise_constant) return values[std::min(i, values.size() - 1)];
    if (i + 1 >= times.size()) return values.back();
    const double w = (t - times[i]) / (times[i + 1] - times[i]);
    return (1.0 - w) * values[i] + w * values[i + 1];
}

DriveTable sequence_drive(const TritSequence& seq, const PulseShape& shape,
                          double theta, const StaticModel& m) {
    if (shape.kind != PulseShape::Kind::Rectangular)
        throw std::invalid_argument("sequence_drive: rectangular shape required");
    seq.validate();
    const double t_slot = seq.slot_period();
    const double tau = shape.width;
    const double eps = 0.5 * theta / (m.drive_elem01 * tau);

    DriveTable d;
    d.piecewise_constant = true;
    d.times.push_back(0.0);
    d.values.push_back(0.0);
    for (std::size_t k = 0; k < seq.symbols.size(); ++k) {
        const double t0 = k * t_slot;
        if (seq.symbols[k] != 0) {
            d.times.push_back(t0);
            d.values.push_back(seq.symbols[k] > 0 ? eps : -eps);
            d.times.push_back(t0 + tau);
            d.values.push_back(0.0);
        }
    }
    d.times.push_back(seq.symbols.size() * t_slot);
    d.values.push_back(0.0);
    return d;
}

EvolutionTrace integrate_shaped(const StaticModel& m, const TransmonParams& p,
                                const DriveTable& drive, double dt,
                                const cvector& initial, std::size_t record_stride) {
    if (dt <= 0.0 || dt > 1e-4)
        throw std::invalid_argument("integrate_shaped: dt must be in (0, 1e-4] ns");
    if (static_cast<int>(initial.size()) != m.dim)
        throw std::invalid_argument("integrate_shaped: state dimension mismatch");
    if (std::abs(norm2(initial) - 1.0) > 1e-8)
        throw std::invalid_argument("integrate_shaped: initial state not normalized");

    const std::size_t dim = initial.size();
    cvector state = initial;
    cvector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim), gtmp(dim);

    // dpsi/dt = -i H0 psi + eps(t) * G psi with G = a - a^dag (eigenbasis).
    auto deriv = [&](double eps, const cvector& s, cvector& out) {
        kernels::matvec(gtmp.data(), m.gen_eig.data(), s.data(), dim);
        for (std::size_t i = 0; i < dim; ++i)
            out[i] = cx{0.0, -m.eigvals[i]} * s[i] + eps * gtmp[i];
    };

    EvolutionTrace trace;
    auto record_point = [&](double t) {
        std::array<double, 6> w{};
        for (std::size_t q = 0; q < 6 && q < dim; ++q) w[q] = std::norm(state[q]);
        trace.times.push_back(t);
        trace.populations.push_back(w);
    };
    if (record_stride > 0) record_point(0.0);

    std::size_t steps_done = 0;
    // Integrate each inter-breakpoint interval separately so steps never
    // straddle a drive discontinuity.
    for (std::size_t seg = 0; seg + 1 < drive.times.size(); ++seg) {
        const double a = drive.times[seg], b = drive.times[seg + 1];
        if (b <= a) continue;
        const auto nsteps = static_cast<std::size_t>(std::ceil((b - a) / dt - 1e-12));
        const double h = (b - a) / static_cast<double>(nsteps);
        const bool flat = drive.piecewise_constant;
        const double eps_seg = flat ? drive.values[seg] : 0.0;
        for (std::size_t s = 0; s < nsteps; ++s) {
            const double t = a + s * h;
            const double e0 = flat ? eps_seg : drive.eval(t);
            const double em = flat ? eps_seg : drive.eval(t + 0.5 * h);
            const double e1 = flat ? eps_seg : drive.eval(t + h);
            deriv(e0, state, k1);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
            deriv(em, tmp, k2);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
            deriv(em, tmp, k3);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + h * k3[i];
            deriv(e1, tmp, k4);
            for (std::size_t i = 0; i < dim; ++i)
                state[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            ++steps_done;
            if (record_stride > 0 && steps_done % record_stride == 0)
                record_point(t + h);
        }
        if (std::abs(norm2(state) - 1.0) > 1e-7)
            throw std::runtime_error("integrate_shaped: norm drift, step too large");
    }
    trace.final_state = std::move(state);
    return trace;
}

}  // namespace sfq
