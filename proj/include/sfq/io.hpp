#ifndef SFQ_IO_HPP
#define SFQ_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "sfq/robustness.hpp"
#include "sfq/seqopt.hpp"

namespace sfq {

inline constexpr int kReportFormatVersion = 1;

// Full run configuration. Frequencies in GHz, angles in rad, times in ns.
struct RunConfig {
    TransmonParams transmon;
    double f_clock = 25.0;
    GateSpec gate = GateSpec::y_half_pi();
    SeedConfig seed;
    OptimizerConfig optimizer;
    PulseShape shape = PulseShape::delta();
    std::string tabulated_file;  // waveform CSV when shape.kind == Tabulated
    std::string output_dir = ".";

    void validate() const;
};

// Strict JSON parse: unknown keys are rejected (keys starting with
// "_comment" and the top-level "version" are ignored).
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Sequence text: one line of {+, -, 0}; the reader also accepts
// comma-separated {1, -1, 0}. f_clock is supplied by the caller.
std::vector<int8_t> parse_sequence(const std::string& text);
std::vector<int8_t> load_sequence(const std::string& path);
std::string format_sequence(const std::vector<int8_t>& symbols);
void save_sequence(const std::string& path, const std::vector<int8_t>& symbols);

// Trace CSV: t_ns,W0,W1,W2,W3,W4,W5.
void save_trace_csv(const std::string& path, const EvolutionTrace& trace);

// Tabulated pulse CSV: time_ns,amplitude with a header row.
std::vector<std::pair<double, double>> load_pulse_csv(const std::string& path);

// Sweep CSV: param_value,infidelity.
void save_sweep_csv(const std::string& path, const SweepResult& result);
nlohmann::json sweep_to_json(const SweepSpec& spec, const SweepResult& result);

nlohmann::json config_to_json(const RunConfig& cfg);
nlohmann::json report_to_json(const OptimizationReport& report, const RunConfig& cfg);
void save_json(const std::string& path, const nlohmann::json& j);

void save_fidelity_history_csv(const std::string& path, const std::vector<double>& history);

}  // namespace sfq

#endif
