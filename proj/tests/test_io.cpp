#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sfq/io.hpp"

using namespace sfq;
using nlohmann::json;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "sfq_io_test";
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

json minimal_config() {
    return json{{"version", 1},
                {"transmon", {{"f01", 5.0}, {"mu", 0.25}, {"theta", 0.024}, {"dim", 10}}},
                {"clock", 25.0},
                {"gate", {{"axis", "y"}, {"angle", 1.5707963267948966}}}};
}

}  // namespace

TEST_CASE("sequence text round trip, both accepted formats") {
    const std::vector<int8_t> symbols = {0, 1, 1, -1, 0, -1};
    const std::string compact = format_sequence(symbols);
    CHECK(compact == "0++-0-");
    CHECK(parse_sequence(compact) == symbols);
    CHECK(parse_sequence("0, 1, 1, -1, 0, -1") == symbols);
    CHECK(parse_sequence("0++-0-\n") == symbols);
    CHECK_THROWS_AS(parse_sequence("0+x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sequence("0,2,1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sequence(""), std::invalid_argument);
}

TEST_CASE("config parsing: defaults, comments, strictness") {
    json j = minimal_config();
    j["_comment"] = "units: GHz, rad, ns";
    const RunConfig cfg = parse_config(j);
    CHECK(cfg.transmon.f01 == 5.0);
    CHECK(cfg.f_clock == 25.0);
    CHECK(cfg.optimizer.theta_desired == 0.024);  // falls back to transmon.theta

    j["surprise"] = 1;
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("surprise"),
                         std::invalid_argument);

    json bad = minimal_config();
    bad["transmon"]["qubits"] = 2;
    CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);

    json bad_axis = minimal_config();
    bad_axis["gate"]["axis"] = "z";
    CHECK_THROWS_AS(parse_config(bad_axis), std::invalid_argument);
}

TEST_CASE("optimizer block and shapes parse") {
    json j = minimal_config();
    j["optimizer"] = {{"theta_desired", 0.033}, {"theta_mode", "per_generation"},
                      {"beam_width", 2}};
    j["shape"] = {{"kind", "gaussian"}, {"sigma", 0.001}};
    const RunConfig cfg = parse_config(j);
    CHECK(cfg.optimizer.theta_desired == 0.033);
    CHECK(cfg.optimizer.theta_mode == OptimizerConfig::ThetaMode::PerGeneration);
    CHECK(cfg.optimizer.beam_width == 2);
    CHECK(cfg.shape.kind == PulseShape::Kind::Gaussian);
    CHECK(cfg.shape.sigma == 0.001);
}

TEST_CASE("trace and sweep CSVs are written and round-trippable") {
    TempDir tmp;
    EvolutionTrace trace;
    trace.times = {0.0, 0.04};
    trace.populations = {{1, 0, 0, 0, 0, 0}, {0.9, 0.08, 0.02, 0, 0, 0}};
    save_trace_csv(tmp.file("trace.csv"), trace);
    std::ifstream in(tmp.file("trace.csv"));
    std::string header;
    std::getline(in, header);
    CHECK(header == "t_ns,W0,W1,W2,W3,W4,W5");

    SweepResult res;
    res.grid = {4.99, 5.0, 5.01};
    res.infidelity = {1e-3, 1e-5, 2e-3};
    save_sweep_csv(tmp.file("sweep.csv"), res);
    std::ifstream sin(tmp.file("sweep.csv"));
    std::getline(sin, header);
    CHECK(header == "param_value,infidelity");

    // a sweep CSV doubles as a tabulated-pulse CSV: two numeric columns
    const auto samples = load_pulse_csv(tmp.file("sweep.csv"));
    REQUIRE(samples.size() == 3);
    CHECK(samples[1].first == 5.0);
    CHECK(samples[1].second == 1e-5);
}

TEST_CASE("report JSON carries the format version and inputs") {
    OptimizationReport rep;
    rep.best_seq.symbols = {1, 0, -1};
    rep.best_seq.f_clock = 25.0;
    rep.theta_star = 0.024;
    rep.infidelity = 5e-5;
    rep.gate_time = 0.08;
    rep.angle_matched = true;
    rep.fidelity_history = {0.9, 0.99};
    rep.length_history = {{3, 0.024}};

    const RunConfig cfg = parse_config(minimal_config());
    const json j = report_to_json(rep, cfg);
    CHECK(j.at("format_version") == kReportFormatVersion);
    CHECK(j.at("sequence") == "+0-");
    CHECK(j.at("input").at("transmon").at("f01") == 5.0);
    CHECK(j.at("length_history")[0].at("length") == 3);

    // byte-identical determinism of serialization
    CHECK(j.dump(2) == report_to_json(rep, cfg).dump(2));
}

TEST_CASE("missing files raise errors") {
    CHECK_THROWS(load_config("/nonexistent/config.json"));
    CHECK_THROWS(load_sequence("/nonexistent/seq.txt"));
    CHECK_THROWS(load_pulse_csv("/nonexistent/pulse.csv"));
}
