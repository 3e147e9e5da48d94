#include "sfq/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sfq {

void SweepSpec::validate() const {
    if (points < 3 || points % 2 == 0)
        throw std::invalid_argument("SweepSpec: points must be odd and >= 3");
    if (half_range <= 0.0) throw std::invalid_argument("SweepSpec: half_range must be positive");
}

SweepSpec::Parameter SweepSpec::parse_parameter(const std::string& name) {
    if (name == "f01") return Parameter::F01;
    if (name == "mu") return Parameter::Mu;
    if (name == "f_clock") return Parameter::FClock;
    if (name == "theta") return Parameter::Theta;
    throw std::invalid_argument("SweepSpec: unknown parameter '" + name + "'");
}

std::string SweepSpec::parameter_name(Parameter p) {
    switch (p) {
        case Parameter::F01: return "f01";
        case Parameter::Mu: return "mu";
        case Parameter::FClock: return "f_clock";
        case Parameter::Theta: return "theta";
    }
    throw std::logic_error("SweepSpec: invalid parameter enum");
}

SweepResult sweep(const TritSequence& seq, const TransmonParams& base,
                  const PulseShape& shape, const GateSpec& gate, const SweepSpec& spec,
                  double theta_accepted) {
    spec.validate();
    seq.validate();
    if (theta_accepted <= 0.0)
        throw std::invalid_argument("sweep: theta_accepted must be positive");

    SweepResult out;
    out.grid.resize(spec.points);
    out.infidelity.resize(spec.points);

    for (int i = 0; i < spec.points; ++i) {
        const double value =
            spec.center - spec.half_range +
            2.0 * spec.half_range * i / (spec.points - 1);
        out.grid[i] = value;

        TransmonParams p = base;
        TritSequence s = seq;
        double theta = theta_accepted;
        switch (spec.parameter) {
            case SweepSpec::Parameter::F01: p.f01 = value; break;
            case SweepSpec::Parameter::Mu: p.mu_mag = value; break;
            case SweepSpec::Parameter::FClock: s.f_clock = value; break;
            case SweepSpec::Parameter::Theta: theta = value; break;
        }
        p.validate();
        if (s.f_clock <= 0.0) throw std::invalid_argument("sweep: f_clock grid reached <= 0");

        const StaticModel m = build_static(p);
        const PropagatorSet props = build_propagators(m, p, s.f_clock, shape, theta);
        const FidelityResult fid =
            fidelity_from_columns(sequence_columns(props, s), gate, spec.optimize_z);
        out.infidelity[i] = std::max(0.0, 1.0 - fid.fidelity);
    }

    // Window: walk out from the argmin while below threshold, then place
    // the endpoints by linear interpolation on the crossing segments.
    const auto it = std::min_element(out.infidelity.begin(), out.infidelity.end());
    const int imin = static_cast<int>(it - out.infidelity.begin());
    if (out.infidelity[imin] < kWindowThreshold) {
        out.has_window = true;
        int lo = imin, hi = imin;
        while (lo > 0 && out.infidelity[lo - 1] < kWindowThreshold) --lo;
        while (hi + 1 < spec.points && out.infidelity[hi + 1] < kWindowThreshold) ++hi;

        auto cross = [&](int inside, int outside) {
            const double fi = out.infidelity[inside], fo = out.infidelity[outside];
            const double frac = (kWindowThreshold - fi) / (fo - fi);
            return out.grid[inside] + frac * (out.grid[outside] - out.grid[inside]);
        };
        out.window_lo = lo > 0 ? cross(lo, lo - 1) : out.grid.front();
        out.window_hi = hi + 1 < spec.points ? cross(hi, hi + 1) : out.grid.back();
    }
    return out;
}

}  // namespace sfq
