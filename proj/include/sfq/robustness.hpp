#ifndef SFQ_ROBUSTNESS_HPP
#define SFQ_ROBUSTNESS_HPP

#include <string>
#include <vector>

#include "sfq/fidelity.hpp"

namespace sfq {

struct SweepSpec {
    enum class Parameter { F01, Mu, FClock, Theta };
    Parameter parameter = Parameter::Theta;
    double center = 0.0;
    double half_range = 0.0;
    int points = 41;  // odd, so the center is sampled
    bool optimize_z = true;

    void validate() const;
    static Parameter parse_parameter(const std::string& name);
    static std::string parameter_name(Parameter p);
};

struct SweepResult {
    std::vector<double> grid;
    std::vector<double> infidelity;
    // Contiguous interval around the argmin where infidelity < 1e-4;
    // endpoints by linear interpolation, clamped to the grid span.
    bool has_window = false;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

inline constexpr double kWindowThreshold = 1e-4;

// Infidelity of a fixed sequence versus a detuned system parameter.
// theta stays at its accepted value except when sweeping theta itself;
// f_clock sweeps rescale slot duration with the symbol list fixed.
SweepResult sweep(const TritSequence& seq, const TransmonParams& base,
                  const PulseShape& shape, const GateSpec& gate, const SweepSpec& spec,
                  double theta_accepted);

}  // namespace sfq

#endif
