#ifndef SFQ_PROPAGATION_HPP
#define SFQ_PROPAGATION_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sfq/model.hpp"

namespace sfq {

// Ternary control sequence: one symbol from {-1, 0, +1} per clock slot.
struct TritSequence {
    std::vector<int8_t> symbols;
    double f_clock = 25.0;  // GHz

    std::size_t length() const { return symbols.size(); }
    double slot_period() const { return 1.0 / f_clock; }
    // Reported duration: the final slot contributes only its pulse region.
    double gate_time() const {
        return symbols.empty() ? 0.0 : (static_cast<double>(symbols.size()) - 1.0) / f_clock;
    }
    void validate() const;
};

struct PulseShape {
    enum class Kind { Delta, Rectangular, Gaussian, Tabulated };
    Kind kind = Kind::Rectangular;
    double width = 1e-5;    // rectangular width tau_p, ns
    double sigma = 0.0015;  // gaussian std, ns (support truncated at +-4 sigma)
    std::vector<std::pair<double, double>> samples;  // tabulated (t_ns, amplitude)

    double support() const;
    static PulseShape delta();
    static PulseShape rectangular(double tau_p);
    static PulseShape gaussian(double sigma);
    static PulseShape tabulated(std::vector<std::pair<double, double>> samples);
};

// Cached slot unitaries in the h0 eigenbasis.
struct PropagatorSet {
    CMatrix u_free, u_plus, u_minus;
    double f_clock = 0.0;
    double theta = 0.0;
    std::uint64_t params_hash = 0;

    const CMatrix& slot(int symbol) const {
        return symbol > 0 ? u_plus : (symbol < 0 ? u_minus : u_free);
    }
};

struct EvolutionTrace {
    std::vector<double> times;
    std::vector<std::array<double, 6>> populations;
    cvector final_state;
};

// A single pulse implements a computational-subspace rotation of exactly
// theta; the drive integral is theta / (2 |<0|a-adag|1>|).
PropagatorSet build_propagators(const StaticModel& m, const TransmonParams& p,
                                double f_clock, const PulseShape& shape, double theta);

EvolutionTrace evolve_sequence(const PropagatorSet& props, const TritSequence& seq,
                               const cvector& initial, bool record,
                               const StaticModel* fock_basis_of = nullptr);

CMatrix sequence_unitary(const PropagatorSet& props, const TritSequence& seq);

// First two columns of the sequence unitary; all the fidelity machinery
// needs, at a fraction of the full-product cost.
std::array<cvector, 2> sequence_columns(const PropagatorSet& props, const TritSequence& seq);

// Sampled drive amplitude over a full gate. Piecewise-constant tables hold
// the value on [t_i, t_{i+1}); piecewise-linear tables interpolate.
struct DriveTable {
    std::vector<double> times;   // breakpoints, ns, ascending
    std::vector<double> values;  // values.size() == times.size()
    bool piecewise_constant = true;

    double eval(double t) const;
    double t_final() const { return times.empty() ? 0.0 : times.back(); }
};

// Exact rectangular-pulse drive for a sequence (few breakpoints per slot).
DriveTable sequence_drive(const TritSequence& seq, const PulseShape& shape,
                          double theta, const StaticModel& m);

// Fixed-step 4th-order integration of the Schrodinger equation with
// H(t) = H0 + eps(t) * i(a - a^dag), in the eigenbasis. Independent oracle
// for the propagator-product path. record_stride = 0 records only the
// final state.
EvolutionTrace integrate_shaped(const StaticModel& m, const TransmonParams& p,
                                const DriveTable& drive, double dt,
                                const cvector& initial, std::size_t record_stride = 0);

}  // namespace sfq

#endif
