#ifndef SFQ_FIDELITY_HPP
#define SFQ_FIDELITY_HPP

#include <array>

#include "sfq/propagation.hpp"

namespace sfq {

struct GateSpec {
    enum class Axis { X, Y };
    Axis axis = Axis::Y;
    double angle = 0.0;
    std::array<cx, 4> matrix{};  // row-major 2x2, exp(-i angle/2 sigma_axis)

    static GateSpec make(Axis axis, double angle);
    static GateSpec y_half_pi();
};

struct FidelityResult {
    double fidelity = 0.0;
    double phi_z = 0.0;    // optimal virtual-Z angle, rad, in [-pi, pi]
    double leakage = 0.0;  // 1 - mean computational-subspace mass of U|0>, U|1>
};

// The six Bloch cardinal states embedded in a dim-dimensional space.
std::array<cvector, 6> cardinal_states(int dim);

// Six-cardinal-state averaged gate fidelity of the computational block of
// u_full against the target gate. With optimize_z, the post-correction
// Z(phi) = diag(1, e^{i phi}) is chosen in closed form.
FidelityResult average_fidelity(const CMatrix& u_full, const GateSpec& gate, bool optimize_z);

// Same metric from the first two columns of the sequence unitary.
FidelityResult fidelity_from_columns(const std::array<cvector, 2>& cols,
                                     const GateSpec& gate, bool optimize_z);

// Best fidelity over the single-pulse angle for a fixed sequence:
// coarse bracket around the hint, then golden-section to 1e-7 rad.
struct ThetaOpt {
    double theta_star = 0.0;
    FidelityResult fid;
};
ThetaOpt optimal_theta(const TritSequence& seq, const StaticModel& m,
                       const TransmonParams& p, const PulseShape& shape,
                       const GateSpec& gate, double theta_hint);

}  // namespace sfq

#endif
