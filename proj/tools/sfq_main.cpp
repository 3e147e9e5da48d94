#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sfq/io.hpp"

namespace fs = std::filesystem;
using namespace sfq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOptimizerFailed = 1;
constexpr int kExitInputError = 2;

void ensure_dir(const std::string& dir) {
    if (!dir.empty() && dir != ".") fs::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

cvector initial_state(const std::string& label, int dim) {
    static const std::vector<std::string> labels = {"x+", "x-", "y+", "y-", "z+", "z-"};
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end())
        throw std::invalid_argument("initial state must be one of x+,x-,y+,y-,z+,z-");
    return cardinal_states(dim)[it - labels.begin()];
}

int cmd_optimize(const RunConfig& cfg, const std::string& out_dir) {
    const OptimizationReport report =
        optimize_for_theta(cfg.transmon, cfg.f_clock, cfg.shape, cfg.gate, cfg.seed,
                           cfg.optimizer);
    ensure_dir(out_dir);
    save_json(join(out_dir, "report.json"), report_to_json(report, cfg));
    save_sequence(join(out_dir, "sequence.txt"), report.best_seq.symbols);
    save_fidelity_history_csv(join(out_dir, "fidelity_history.csv"), report.fidelity_history);

    std::cout << "length=" << report.best_seq.length() << " theta_star=" << report.theta_star
              << " infidelity=" << report.infidelity << " gate_time_ns=" << report.gate_time
              << " angle_matched=" << (report.angle_matched ? "yes" : "no") << "\n";
    return report.angle_matched && report.infidelity < 1e-4 ? kExitOk : kExitOptimizerFailed;
}

int cmd_simulate(const RunConfig& cfg, const std::string& seq_file, const std::string& initial,
                 const std::string& out_dir, bool fock_basis) {
    TritSequence seq;
    seq.symbols = load_sequence(seq_file);
    seq.f_clock = cfg.f_clock;

    const StaticModel m = build_static(cfg.transmon);
    const PropagatorSet props =
        build_propagators(m, cfg.transmon, cfg.f_clock, cfg.shape, cfg.transmon.theta);
    const EvolutionTrace trace =
        evolve_sequence(props, seq, initial_state(initial, cfg.transmon.dim), true,
                        fock_basis ? &m : nullptr);

    ensure_dir(out_dir);
    save_trace_csv(join(out_dir, "trace.csv"), trace);

    double max_w2 = 0.0;
    for (const auto& w : trace.populations) max_w2 = std::max(max_w2, w[2]);
    const double final_w2 = trace.populations.back()[2];
    nlohmann::json leak = {{"max_w2", max_w2}, {"final_w2", final_w2}};
    save_json(join(out_dir, "leakage.json"), leak);
    std::cout << "max_w2=" << max_w2 << " final_w2=" << final_w2 << "\n";
    return kExitOk;
}

SweepSpec default_spec(SweepSpec::Parameter param, const RunConfig& cfg, double theta) {
    SweepSpec spec;
    spec.parameter = param;
    spec.points = 201;
    switch (param) {
        case SweepSpec::Parameter::F01:
            spec.center = cfg.transmon.f01;
            spec.half_range = 0.02;
            break;
        case SweepSpec::Parameter::Mu:
            spec.center = cfg.transmon.mu_mag;
            spec.half_range = 0.1;
            break;
        case SweepSpec::Parameter::FClock:
            spec.center = cfg.f_clock;
            spec.half_range = 0.3;
            break;
        case SweepSpec::Parameter::Theta:
            spec.center = theta;
            spec.half_range = 0.02;
            break;
    }
    return spec;
}

int cmd_scan(const RunConfig& cfg, const std::string& seq_file, bool all,
             const std::string& param_name, double theta, double half_range, int points,
             const std::string& out_dir) {
    TritSequence seq;
    seq.symbols = load_sequence(seq_file);
    seq.f_clock = cfg.f_clock;
    const double theta_accepted = theta > 0.0 ? theta : cfg.transmon.theta;

    std::vector<SweepSpec::Parameter> params;
    if (all) {
        params = {SweepSpec::Parameter::F01, SweepSpec::Parameter::Mu,
                  SweepSpec::Parameter::FClock, SweepSpec::Parameter::Theta};
    } else {
        params = {SweepSpec::parse_parameter(param_name)};
    }

    ensure_dir(out_dir);
    for (auto p : params) {
        SweepSpec spec = default_spec(p, cfg, theta_accepted);
        if (half_range > 0.0) spec.half_range = half_range;
        if (points > 0) spec.points = points;
        const SweepResult res = sweep(seq, cfg.transmon, cfg.shape, cfg.gate, spec,
                                      theta_accepted);
        const std::string name = SweepSpec::parameter_name(p);
        save_sweep_csv(join(out_dir, "sweep_" + name + ".csv"), res);
        save_json(join(out_dir, "sweep_" + name + ".json"), sweep_to_json(spec, res));
        std::cout << name << ": ";
        if (res.has_window)
            std::cout << "window [" << res.window_lo << ", " << res.window_hi << "] width "
                      << res.window_hi - res.window_lo << "\n";
        else
            std::cout << "no sub-threshold window in range\n";
    }
    return kExitOk;
}

int cmd_seed(const RunConfig& cfg, int length, const std::string& out_dir) {
    const TritSequence seq = make_seed(cfg.transmon, cfg.f_clock, length, cfg.seed);
    ensure_dir(out_dir);
    save_sequence(join(out_dir, "sequence.txt"), seq.symbols);

    std::ofstream prev(join(out_dir, "seed_preview.csv"));
    prev << "t_ns,signal,threshold,symbol\n";
    for (int k = 0; k < length; ++k) {
        const double t = k / cfg.f_clock;
        const double s = cfg.seed.eps0 * std::sin(kTau * cfg.transmon.f01 * t + cfg.seed.phase0);
        prev << t << ',' << s << ',' << cfg.seed.a_th * cfg.seed.eps0 << ','
             << static_cast<int>(seq.symbols[k]) << '\n';
    }
    std::cout << format_sequence(seq.symbols) << "\n";
    return kExitOk;
}

int cmd_pulse_compare(const RunConfig& cfg, const std::string& tabulated_file,
                      const std::string& out_dir) {
    // Three-pulse pi/2 experiment: resonant train of negative pulses at the
    // qubit frequency, theta = (pi/2)/3 each, from |z+>.
    TritSequence seq;
    seq.symbols = {-1, -1, -1};
    seq.f_clock = cfg.transmon.f01;
    const double theta = 0.5 * 3.14159265358979323846 / 3.0;

    std::vector<std::pair<std::string, PulseShape>> shapes = {
        {"rectangular", PulseShape::rectangular(0.002)},
        {"gaussian", PulseShape::gaussian(0.0008)},
    };
    if (!tabulated_file.empty())
        shapes.emplace_back("tabulated", PulseShape::tabulated(load_pulse_csv(tabulated_file)));

    const StaticModel m = build_static(cfg.transmon);
    ensure_dir(out_dir);

    std::vector<std::array<double, 6>> finals;
    nlohmann::json j;
    for (const auto& [name, shape] : shapes) {
        const PropagatorSet props =
            build_propagators(m, cfg.transmon, seq.f_clock, shape, theta);
        const EvolutionTrace trace =
            evolve_sequence(props, seq, cardinal_states(cfg.transmon.dim)[4], true);
        save_trace_csv(join(out_dir, "trace_" + name + ".csv"), trace);
        finals.push_back(trace.populations.back());
        j["final_populations"][name] = trace.populations.back();
    }

    double max_delta = 0.0;
    for (std::size_t a = 0; a < finals.size(); ++a)
        for (std::size_t b = a + 1; b < finals.size(); ++b)
            for (int k = 0; k < 6; ++k)
                max_delta = std::max(max_delta, std::abs(finals[a][k] - finals[b][k]));
    j["max_population_delta"] = max_delta;

    const PropagatorSet delta_props =
        build_propagators(m, cfg.transmon, seq.f_clock, PulseShape::delta(), theta);
    const PropagatorSet rect_props =
        build_propagators(m, cfg.transmon, seq.f_clock, PulseShape::rectangular(1e-5), theta);
    j["delta_vs_rect_norm"] = delta_props.u_plus.frobenius_diff(rect_props.u_plus);

    save_json(join(out_dir, "pulse_compare.json"), j);
    std::cout << "max_population_delta=" << max_delta << "\n";
    return kExitOk;
}

int cmd_batch(const std::vector<std::string>& configs, const std::string& out_dir) {
    int rc = kExitOk;
    for (const auto& path : configs) {
        const RunConfig cfg = load_config(path);
        const std::string sub = join(out_dir, fs::path(path).stem().string());
        std::cout << "[" << fs::path(path).filename().string() << "] ";
        rc = std::max(rc, cmd_optimize(cfg, sub));
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SFQ ternary pulse-sequence optimizer for transmon single-qubit gates"};
    app.require_subcommand(1);

    std::string config_path, seq_file, out_dir = ".", param_name = "theta";
    std::string initial = "z+", tabulated;
    std::vector<std::string> batch_configs;
    bool all = false;
    int length = 0, points = 0;
    double theta = 0.0, half_range = 0.0;

    auto* opt = app.add_subcommand("optimize", "Search for a trit sequence");
    opt->add_option("--config", config_path)->required();
    opt->add_option("--out", out_dir);

    auto* sim = app.add_subcommand("simulate", "Population trace for a sequence");
    sim->add_option("--config", config_path)->required();
    sim->add_option("--sequence", seq_file)->required();
    sim->add_option("--initial", initial);
    sim->add_option("--out", out_dir);
    bool fock_basis = false;
    sim->add_flag("--fock", fock_basis, "report populations in the bare Fock basis");

    auto* scan = app.add_subcommand("scan", "Detuning robustness sweeps");
    scan->add_option("--config", config_path)->required();
    scan->add_option("--sequence", seq_file)->required();
    scan->add_flag("--all", all);
    scan->add_option("--param", param_name);
    scan->add_option("--theta", theta, "accepted single-pulse angle (default: config theta)");
    scan->add_option("--half-range", half_range);
    scan->add_option("--points", points);
    scan->add_option("--out", out_dir);

    auto* seed = app.add_subcommand("seed", "Threshold-seeded sequence preview");
    seed->add_option("--config", config_path)->required();
    seed->add_option("--length", length)->required();
    seed->add_option("--out", out_dir);

    auto* pc = app.add_subcommand("pulse-compare", "Pulse-shape consistency experiment");
    pc->add_option("--config", config_path)->required();
    pc->add_option("--tabulated", tabulated);
    pc->add_option("--out", out_dir);

    auto* batch = app.add_subcommand("batch", "Run optimize over several configs");
    batch->add_option("--config", batch_configs)->required();
    batch->add_option("--out", out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInputError;
    }

    try {
        if (batch->parsed()) return cmd_batch(batch_configs, out_dir);
        const RunConfig cfg = load_config(config_path);
        if (opt->parsed()) return cmd_optimize(cfg, out_dir);
        if (sim->parsed()) return cmd_simulate(cfg, seq_file, initial, out_dir, fock_basis);
        if (scan->parsed())
            return cmd_scan(cfg, seq_file, all, param_name, theta, half_range, points, out_dir);
        if (seed->parsed()) return cmd_seed(cfg, length, out_dir);
        if (pc->parsed()) {
            if (pc->count("--tabulated") && !fs::exists(tabulated)) {
                std::cerr << "error: tabulated waveform file not found: " << tabulated << "\n";
                return kExitInputError;
            }
            return cmd_pulse_compare(cfg, tabulated, out_dir);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
