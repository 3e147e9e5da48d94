#ifndef SFQ_SEQOPT_HPP
#define SFQ_SEQOPT_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "sfq/fidelity.hpp"

namespace sfq {

struct SeedConfig {
    double eps0 = 0.052;     // harmonic seed amplitude, GHz (drive units)
    double a_th = 0.5;       // threshold fraction of eps0, (0, 1]
    double phase0 = -1.5707963267948966;  // carrier phase, rad

    void validate() const;
};

struct OptimizerConfig {
    double theta_desired = 0.024;
    double angle_tol = 1e-4;
    // Early-stop bar: the walk halts at the first angle-matched solution at
    // or below this infidelity; otherwise it keeps exploring lengths and
    // seed rules and returns the best angle-matched solution found.
    double target_infidelity = 1e-4;
    int max_generations = 400;
    int beam_width = 1;
    int max_length_steps = 80;
    // PerCandidate: every mutation is scored at its own optimal theta.
    // PerGeneration: mutations are scored at the parent's theta, winner
    // re-optimized. Fixed: everything is scored at theta_desired itself and
    // only the final sequence is angle-characterized; this mode also enables
    // a two-trit refinement pass when the single-trit neighborhood stalls,
    // which is what pushes solutions below the 1e-4 infidelity bar.
    enum class ThetaMode { PerCandidate, PerGeneration, Fixed };
    ThetaMode theta_mode = ThetaMode::PerCandidate;
    bool pair_refinement = true;  // Fixed mode only
    int m_init = 0;  // 0 = estimate from the seed rotation budget

    void validate() const;
};

// Threshold-seeded initial sequence: slot k carries the sign of the
// harmonic qubit-frequency signal where it exceeds the threshold.
TritSequence make_seed(const TransmonParams& p, double f_clock, int length,
                       const SeedConfig& cfg);

// All 2M single-symbol mutations, position-ascending, replacement symbols
// in -1 < 0 < +1 order.
std::vector<TritSequence> mutations(const TritSequence& seq);

struct EvolveOutcome {
    TritSequence seq;
    double theta_star = 0.0;
    FidelityResult fid;
    std::vector<double> fidelity_history;  // accepted parents, per generation
    std::uint64_t evaluations = 0;
    bool hit_generation_cap = false;
};

// Greedy mutation search: keep replacing the parent with its best child
// while fidelity improves.
EvolveOutcome evolve(const TritSequence& seed, const StaticModel& m,
                     const TransmonParams& p, const PulseShape& shape,
                     const GateSpec& gate, const OptimizerConfig& cfg);

struct OptimizationReport {
    TritSequence best_seq;
    double theta_star = 0.0;
    double infidelity = 1.0;
    double phi_z = 0.0;
    double leakage = 0.0;
    double gate_time = 0.0;
    bool angle_matched = false;
    std::vector<double> fidelity_history;
    std::vector<std::pair<int, double>> length_history;  // (M, theta*) visited
    std::uint64_t evaluations = 0;
};

// Outer loop over sequence length M until the optimal single-pulse angle
// matches theta_desired within angle_tol.
OptimizationReport optimize_for_theta(const TransmonParams& p, double f_clock,
                                      const PulseShape& shape, const GateSpec& gate,
                                      const SeedConfig& seed_cfg, const OptimizerConfig& cfg);

// Linear interpolation of the seed threshold between the angles reached
// from A_min = 0.01 eps0 and A_max = eps0 seeds; returns the threshold
// fraction, clamped to (0, 1].
double interpolate_threshold(const TransmonParams& p, double f_clock,
                             const PulseShape& shape, const GateSpec& gate,
                             const SeedConfig& seed_cfg, const OptimizerConfig& cfg,
                             double theta_desired);

}  // namespace sfq

#endif
