#ifndef SFQ_MODEL_HPP
#define SFQ_MODEL_HPP

#include <vector>

#include "sfq/cmatrix.hpp"

namespace sfq {

// All configuration values are ordinary frequencies in GHz (the omega/2pi
// convention); internal math uses angular frequencies in rad/ns with hbar = 1.
inline constexpr double kTau = 6.283185307179586476925286766559;

// Physical constants (SI)
inline constexpr double kFluxQuantum = 2.067833848e-15;   // Wb
inline constexpr double kHbar = 1.054571817e-34;          // J s

struct CircuitParams {
    double ej_ghz = 12.5;   // Josephson energy E_J/h
    double ec_ghz = 0.25;   // charging energy E_C/h
    double cc_fF = 0.28;    // drive coupling capacitance
    double cq_fF = 85.0;    // shunt capacitance
    double ng = 0.0;        // offset charge, informational only

    // Throws on non-positive energies; returns false (warning) when the
    // transmon regime E_J/E_C >= 20 is not met.
    bool validate() const;
};

struct TransmonParams {
    double f01 = 5.0;       // 0<->1 transition frequency, GHz
    double mu_mag = 0.25;   // anharmonicity magnitude, GHz (see build_static)
    double theta = 0.024;   // single-pulse rotation angle, rad
    int dim = 10;           // Fock levels retained

    void validate() const;
};

struct StaticModel {
    int dim = 0;
    CMatrix h0;                     // undriven Hamiltonian, Fock basis, rad/ns
    CMatrix drive_op;               // i(a - a^dag), Fock basis (Hermitian)
    std::vector<double> eigvals;    // ascending, rad/ns
    CMatrix eigvecs;                // columns, phase-fixed
    double bare_omega = 0.0;        // harmonic coefficient after calibration

    // Drive generator a - a^dag expressed in the h0 eigenbasis, plus the
    // eigendecomposition of i*(that) used for closed-form pulse exponentials.
    CMatrix gen_eig;
    std::vector<double> gen_evals;
    CMatrix gen_evecs;
    double drive_elem01 = 0.0;      // |<0| (a - a^dag) |1>| in the eigenbasis

    CMatrix to_eigenbasis(const CMatrix& op) const;
    // exp(-i * h0 * t) in the eigenbasis (diagonal).
    CMatrix free_propagator(double t_ns) const;
    // exp(s * (a - a^dag)) in the eigenbasis.
    CMatrix drive_exponential(double s) const;
};

TransmonParams derive_effective(const CircuitParams& circ);

// Builds the quartic-oscillator model. The quartic coefficient is
// mu_mag/12 (mu_mag is the anharmonicity scale E_C) and the harmonic
// coefficient is calibrated so the dressed 0<->1 gap equals f01 exactly.
StaticModel build_static(const TransmonParams& p);

}  // namespace sfq

#endif
