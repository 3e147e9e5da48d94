#include "sfq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sfq {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void reject_unknown(const json& j, const std::vector<std::string>& allowed,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key.rfind("_comment", 0) == 0) continue;
        bool ok = false;
        for (const auto& a : allowed) ok |= (key == a);
        if (!ok)
            throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void get_opt(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

}  // namespace

void RunConfig::validate() const {
    transmon.validate();
    seed.validate();
    optimizer.validate();
    if (f_clock <= 0.0) throw std::invalid_argument("config: clock must be positive");
    if (gate.angle <= 0.0) throw std::invalid_argument("config: gate angle must be positive");
    if (shape.kind == PulseShape::Kind::Tabulated && shape.samples.empty())
        throw std::invalid_argument("config: tabulated shape requires a waveform file");
}

RunConfig parse_config(const json& j) {
    reject_unknown(j, {"version", "transmon", "clock", "gate", "seed", "optimizer",
                       "shape", "output_dir"},
                   "top level");
    RunConfig cfg;
    if (j.contains("transmon")) {
        const json& t = j.at("transmon");
        reject_unknown(t, {"f01", "mu", "theta", "dim"}, "transmon");
        get_opt(t, "f01", cfg.transmon.f01);
        get_opt(t, "mu", cfg.transmon.mu_mag);
        get_opt(t, "theta", cfg.transmon.theta);
        get_opt(t, "dim", cfg.transmon.dim);
    }
    get_opt(j, "clock", cfg.f_clock);
    if (j.contains("gate")) {
        const json& g = j.at("gate");
        reject_unknown(g, {"axis", "angle"}, "gate");
        std::string axis = "y";
        double angle = cfg.gate.angle;
        get_opt(g, "axis", axis);
        get_opt(g, "angle", angle);
        if (axis != "x" && axis != "y")
            throw std::invalid_argument("config: gate axis must be 'x' or 'y'");
        cfg.gate = GateSpec::make(axis == "x" ? GateSpec::Axis::X : GateSpec::Axis::Y, angle);
    }
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        reject_unknown(s, {"eps0", "a_th", "phase0"}, "seed");
        get_opt(s, "eps0", cfg.seed.eps0);
        get_opt(s, "a_th", cfg.seed.a_th);
        get_opt(s, "phase0", cfg.seed.phase0);
    }
    if (j.contains("optimizer")) {
        const json& o = j.at("optimizer");
        reject_unknown(o,
                       {"theta_desired", "angle_tol", "target_infidelity",
                        "max_generations", "beam_width", "max_length_steps",
                        "theta_mode", "pair_refinement", "m_init"},
                       "optimizer");
        get_opt(o, "target_infidelity", cfg.optimizer.target_infidelity);
        get_opt(o, "pair_refinement", cfg.optimizer.pair_refinement);
        get_opt(o, "theta_desired", cfg.optimizer.theta_desired);
        get_opt(o, "angle_tol", cfg.optimizer.angle_tol);
        get_opt(o, "max_generations", cfg.optimizer.max_generations);
        get_opt(o, "beam_width", cfg.optimizer.beam_width);
        get_opt(o, "max_length_steps", cfg.optimizer.max_length_steps);
        get_opt(o, "m_init", cfg.optimizer.m_init);
        if (o.contains("theta_mode")) {
            const std::string mode = o.at("theta_mode").get<std::string>();
            if (mode == "per_candidate")
                cfg.optimizer.theta_mode = OptimizerConfig::ThetaMode::PerCandidate;
            else if (mode == "per_generation")
                cfg.optimizer.theta_mode = OptimizerConfig::ThetaMode::PerGeneration;
            else if (mode == "fixed")
                cfg.optimizer.theta_mode = OptimizerConfig::ThetaMode::Fixed;
            else
                throw std::invalid_argument("config: theta_mode must be "
                                            "'per_candidate', 'per_generation' or 'fixed'");
        }
    } else {
        cfg.optimizer.theta_desired = cfg.transmon.theta;
    }
    if (j.contains("optimizer") && !j.at("optimizer").contains("theta_desired"))
        cfg.optimizer.theta_desired = cfg.transmon.theta;
    if (j.contains("shape")) {
        const json& s = j.at("shape");
        reject_unknown(s, {"kind", "width", "sigma", "file"}, "shape");
        std::string kind = "delta";
        get_opt(s, "kind", kind);
        if (kind == "delta") {
            cfg.shape = PulseShape::delta();
        } else if (kind == "rectangular") {
            double width = 1e-5;
            get_opt(s, "width", width);
            cfg.shape = PulseShape::rectangular(width);
        } else if (kind == "gaussian") {
            double sigma = 0.0015;
            get_opt(s, "sigma", sigma);
            cfg.shape = PulseShape::gaussian(sigma);
        } else if (kind == "tabulated") {
            if (!s.contains("file"))
                throw std::invalid_argument("config: tabulated shape requires 'file'");
            cfg.tabulated_file = s.at("file").get<std::string>();
            cfg.shape = PulseShape::tabulated(load_pulse_csv(cfg.tabulated_file));
        } else {
            throw std::invalid_argument("config: unknown shape kind '" + kind + "'");
        }
    }
    get_opt(j, "output_dir", cfg.output_dir);
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: JSON parse error in " + path + ": " + e.what());
    }
    return parse_config(j);
}

std::vector<int8_t> parse_sequence(const std::string& text) {
    std::vector<int8_t> out;
    if (text.find(',') != std::string::npos) {
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            // trim whitespace
            const auto b = tok.find_first_not_of(" \t\r\n");
            const auto e = tok.find_last_not_of(" \t\r\n");
            if (b == std::string::npos) continue;
            const std::string v = tok.substr(b, e - b + 1);
            if (v == "1" || v == "+1")
                out.push_back(1);
            else if (v == "-1")
                out.push_back(-1);
            else if (v == "0")
                out.push_back(0);
            else
                throw std::invalid_argument("sequence: bad token '" + v + "'");
        }
    } else {
        for (char c : text) {
            if (c == '+')
                out.push_back(1);
            else if (c == '-')
                out.push_back(-1);
            else if (c == '0')
                out.push_back(0);
            else if (c == ' ' || c == '\t' || c == '\r' || c == '\n')
                continue;
            else
                throw std::invalid_argument(std::string("sequence: bad character '") + c + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument("sequence: empty");
    return out;
}

std::vector<int8_t> load_sequence(const std::string& path) {
    std::ifstream in = open_in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_sequence(ss.str());
}

std::string format_sequence(const std::vector<int8_t>& symbols) {
    std::string s;
    s.reserve(symbols.size());
    for (int8_t v : symbols) s += v > 0 ? '+' : (v < 0 ? '-' : '0');
    return s;
}

void save_sequence(const std::string& path, const std::vector<int8_t>& symbols) {
    std::ofstream out = open_out(path);
    out << format_sequence(symbols) << "\n";
}

void save_trace_csv(const std::string& path, const EvolutionTrace& trace) {
    std::ofstream out = open_out(path);
    out << "t_ns,W0,W1,W2,W3,W4,W5\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        out << fmt_double(trace.times[i]);
        for (double w : trace.populations[i]) out << ',' << fmt_double(w);
        out << '\n';
    }
}

std::vector<std::pair<double, double>> load_pulse_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<std::pair<double, double>> samples;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) {
            first = false;
            if (line.find_first_not_of("0123456789+-.eE, \t\r") != std::string::npos)
                continue;  // header row
        }
        std::stringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b))
            throw std::invalid_argument("pulse csv: bad line '" + line + "' in " + path);
        samples.emplace_back(std::stod(a), std::stod(b));
    }
    if (samples.size() < 2)
        throw std::invalid_argument("pulse csv: need at least two samples in " + path);
    return samples;
}

void save_sweep_csv(const std::string& path, const SweepResult& result) {
    std::ofstream out = open_out(path);
    out << "param_value,infidelity\n";
    for (std::size_t i = 0; i < result.grid.size(); ++i)
        out << fmt_double(result.grid[i]) << ',' << fmt_double(result.infidelity[i]) << '\n';
}

json sweep_to_json(const SweepSpec& spec, const SweepResult& result) {
    json j;
    j["parameter"] = SweepSpec::parameter_name(spec.parameter);
    j["center"] = spec.center;
    j["half_range"] = spec.half_range;
    j["points"] = spec.points;
    j["threshold"] = kWindowThreshold;
    j["has_window"] = result.has_window;
    if (result.has_window) {
        j["window_lo"] = result.window_lo;
        j["window_hi"] = result.window_hi;
        j["window_width"] = result.window_hi - result.window_lo;
    }
    return j;
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["transmon"] = {{"f01", cfg.transmon.f01},
                     {"mu", cfg.transmon.mu_mag},
                     {"theta", cfg.transmon.theta},
                     {"dim", cfg.transmon.dim}};
    j["clock"] = cfg.f_clock;
    j["gate"] = {{"axis", cfg.gate.axis == GateSpec::Axis::X ? "x" : "y"},
                 {"angle", cfg.gate.angle}};
    j["seed"] = {{"eps0", cfg.seed.eps0}, {"a_th", cfg.seed.a_th}, {"phase0", cfg.seed.phase0}};
    j["optimizer"] = {
        {"theta_desired", cfg.optimizer.theta_desired},
        {"angle_tol", cfg.optimizer.angle_tol},
        {"max_generations", cfg.optimizer.max_generations},
        {"beam_width", cfg.optimizer.beam_width},
        {"max_length_steps", cfg.optimizer.max_length_steps},
        {"theta_mode", cfg.optimizer.theta_mode == OptimizerConfig::ThetaMode::PerCandidate
                           ? "per_candidate"
                           : (cfg.optimizer.theta_mode == OptimizerConfig::ThetaMode::Fixed
                                  ? "fixed"
                                  : "per_generation")},
        {"pair_refinement", cfg.optimizer.pair_refinement},
        {"target_infidelity", cfg.optimizer.target_infidelity},
        {"m_init", cfg.optimizer.m_init}};
    switch (cfg.shape.kind) {
        case PulseShape::Kind::Delta: j["shape"] = {{"kind", "delta"}}; break;
        case PulseShape::Kind::Rectangular:
            j["shape"] = {{"kind", "rectangular"}, {"width", cfg.shape.width}};
            break;
        case PulseShape::Kind::Gaussian:
            j["shape"] = {{"kind", "gaussian"}, {"sigma", cfg.shape.sigma}};
            break;
        case PulseShape::Kind::Tabulated:
            j["shape"] = {{"kind", "tabulated"}, {"file", cfg.tabulated_file}};
            break;
    }
    return j;
}

json report_to_json(const OptimizationReport& report, const RunConfig& cfg) {
    json j;
    j["format_version"] = kReportFormatVersion;
    j["input"] = config_to_json(cfg);
    j["sequence"] = format_sequence(report.best_seq.symbols);
    j["length"] = report.best_seq.symbols.size();
    j["f_clock"] = report.best_seq.f_clock;
    j["theta_star"] = report.theta_star;
    j["infidelity"] = report.infidelity;
    j["phi_z"] = report.phi_z;
    j["leakage"] = report.leakage;
    j["gate_time_ns"] = report.gate_time;
    j["angle_matched"] = report.angle_matched;
    j["evaluations"] = report.evaluations;
    j["fidelity_history"] = report.fidelity_history;
    json lh = json::array();
    for (const auto& [m, theta] : report.length_history)
        lh.push_back({{"length", m}, {"theta_star", theta}});
    j["length_history"] = lh;
    return j;
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
}

void save_fidelity_history_csv(const std::string& path, const std::vector<double>& history) {
    std::ofstream out = open_out(path);
    out << "generation,fidelity\n";
    for (std::size_t i = 0; i < history.size(); ++i)
        out << i << ',' << fmt_double(history[i]) << '\n';
}

}  // namespace sfq
