#include "sfq/seqopt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sfq {

void SeedConfig::validate() const {
    if (eps0 <= 0.0) throw std::invalid_argument("SeedConfig: eps0 must be positive");
    if (a_th <= 0.0 || a_th > 1.0)
        throw std::invalid_argument("SeedConfig: a_th must be in (0, 1]");
}

void OptimizerConfig::validate() const {
    if (theta_desired <= 0.0)
        throw std::invalid_argument("OptimizerConfig: theta_desired must be positive");
    if (angle_tol <= 0.0) throw std::invalid_argument("OptimizerConfig: angle_tol must be positive");
    if (beam_width < 1) throw std::invalid_argument("OptimizerConfig: beam_width must be >= 1");
    if (max_generations < 1 || max_length_steps < 1)
        throw std::invalid_argument("OptimizerConfig: iteration caps must be >= 1");
}

TritSequence make_seed(const TransmonParams& p, double f_clock, int length,
                       const SeedConfig& cfg) {
    cfg.validate();
    if (length < 1) throw std::invalid_argument("make_seed: length must be >= 1");
    if (f_clock <= p.f01)
        throw std::invalid_argument("make_seed: clock frequency must exceed f01");
    TritSequence seq;
    seq.f_clock = f_clock;
    seq.symbols.resize(length);
    for (int k = 0; k < length; ++k) {
        const double t = k / f_clock;
        const double s = cfg.eps0 * std::sin(kTau * p.f01 * t + cfg.phase0);
        const double th = cfg.a_th * cfg.eps0;
        seq.symbols[k] = s > th ? int8_t{1} : (s < -th ? int8_t{-1} : int8_t{0});
    }
    return seq;
}

std::vector<TritSequence> mutations(const TritSequence& seq) {
    std::vector<TritSequence> out;
    out.reserve(2 * seq.symbols.size());
    for (std::size_t pos = 0; pos < seq.symbols.size(); ++pos) {
        for (int8_t repl : {int8_t{-1}, int8_t{0}, int8_t{1}}) {
            if (repl == seq.symbols[pos]) continue;
            TritSequence m = seq;
            m.symbols[pos] = repl;
            out.push_back(std::move(m));
        }
    }
    return out;
}

namespace {

// Rotation budget of a sequence: magnitude of the vector sum of per-pulse
// contributions at the qubit precession phase of each slot. Gives the
// first-call theta hint and the initial-length estimate.
double rotation_budget(const TritSequence& seq, double f01) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < seq.symbols.size(); ++k) {
        if (seq.symbols[k] == 0) continue;
        const double phase = kTau * f01 * k / seq.f_clock;
        re += seq.symbols[k] * std::cos(phase);
        im += seq.symbols[k] * std::sin(phase);
    }
    return std::hypot(re, im);
}

struct Scored {
    double fidelity = -1.0;
    double theta = 0.0;
    FidelityResult fid;
};

bool has_pulse(const TritSequence& seq) {
    for (int8_t s : seq.symbols)
        if (s != 0) return true;
    return false;
}

FidelityResult eval_at(const TritSequence& seq, const StaticModel& m,
                       const TransmonParams& p, const PulseShape& shape,
                       const GateSpec& gate, double theta) {
    const PropagatorSet props = build_propagators(m, p, seq.f_clock, shape, theta);
    return fidelity_from_columns(sequence_columns(props, seq), gate, true);
}

}  // namespace

EvolveOutcome evolve(const TritSequence& seed, const StaticModel& m,
                     const TransmonParams& p, const PulseShape& shape,
                     const GateSpec& gate, const OptimizerConfig& cfg) {
    cfg.validate();
    seed.validate();

    struct Parent {
        TritSequence seq;
        double theta;
        FidelityResult fid;
    };

    const bool fixed = cfg.theta_mode == OptimizerConfig::ThetaMode::Fixed;
    // In Fixed mode every evaluation shares one PropagatorSet.
    const PropagatorSet fixed_props =
        fixed ? build_propagators(m, p, seed.f_clock, shape, cfg.theta_desired)
              : PropagatorSet{};
    auto fixed_fid = [&](const TritSequence& seq) {
        return fidelity_from_columns(sequence_columns(fixed_props, seq), gate, true);
    };

    auto score_parent = [&](const TritSequence& seq, double hint) -> Parent {
        if (fixed) return {seq, cfg.theta_desired, fixed_fid(seq)};
        if (!has_pulse(seq))
            return {seq, hint, eval_at(seq, m, p, shape, gate, hint)};
        const ThetaOpt t = optimal_theta(seq, m, p, shape, gate, hint);
        return {seq, t.theta_star, t.fid};
    };

    const double budget = rotation_budget(seed, p.f01);
    const double hint0 = budget > 0.5 ? gate.angle / budget : cfg.theta_desired;

    EvolveOutcome out;
    std::vector<Parent> beam{score_parent(seed, hint0)};
    out.evaluations = 1;
    out.fidelity_history.push_back(beam[0].fid.fidelity);

    Parent best = beam[0];
    int gen = 0;
    for (; gen < cfg.max_generations; ++gen) {
        // Gather the full candidate set across the beam, parent-major so
        // ties resolve to the lowest enumeration index.
        std::vector<TritSequence> cands;
        for (const Parent& par : beam) {
            auto mu = mutations(par.seq);
            for (auto& c : mu) cands.push_back(std::move(c));
        }
        std::vector<Scored> scored(cands.size());

        const bool per_candidate = cfg.theta_mode == OptimizerConfig::ThetaMode::PerCandidate;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cands.size()); ++i) {
            Scored s;
            try {
                if (fixed) {
                    const FidelityResult f = fixed_fid(cands[i]);
                    s = {f.fidelity, cfg.theta_desired, f};
                } else if (per_candidate) {
                    const ThetaOpt t = optimal_theta(cands[i], m, p, shape, gate, beam[0].theta);
                    s = {t.fid.fidelity, t.theta_star, t.fid};
                } else {
                    const FidelityResult f = eval_at(cands[i], m, p, shape, gate, beam[0].theta);
                    s = {f.fidelity, beam[0].theta, f};
                }
            } catch (const std::exception&) {
                s.fidelity = -1.0;  // pulse-free or unbracketable candidate
            }
            scored[i] = s;
        }
        out.evaluations += cands.size();

        // Deterministic selection: fidelity descending, index ascending.
        std::vector<std::size_t> order(cands.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return scored[a].fidelity > scored[b].fidelity;
        });

        if (scored[order[0]].fidelity <= beam[0].fid.fidelity) {
            // Single-trit neighborhood exhausted. In Fixed mode, scan the
            // two-trit neighborhood once; a hit restarts the main loop.
            if (!(fixed && cfg.pair_refinement)) break;
            const int len = static_cast<int>(beam[0].seq.length());
            Parent improved = beam[0];
            bool found = false;
            for (int i = 0; i < len; ++i) {
                for (int si = -1; si <= 1; ++si) {
                    if (si == beam[0].seq.symbols[i]) continue;
                    TritSequence a = beam[0].seq;
                    a.symbols[i] = static_cast<int8_t>(si);
                    for (int j = i + 1; j < len; ++j) {
                        for (int sj = -1; sj <= 1; ++sj) {
                            if (sj == beam[0].seq.symbols[j]) continue;
                            TritSequence b = a;
                            b.symbols[j] = static_cast<int8_t>(sj);
                            const FidelityResult f = fixed_fid(b);
                            ++out.evaluations;
                            if (f.fidelity > improved.fid.fidelity) {
                                improved = Parent{std::move(b), cfg.theta_desired, f};
                                found = true;
                            }
                        }
                    }
                }
            }
            if (!found) break;
            beam.assign(1, std::move(improved));
            out.fidelity_history.push_back(beam[0].fid.fidelity);
            if (beam[0].fid.fidelity > best.fid.fidelity) best = beam[0];
            continue;
        }

        // Elitist refill: surviving parents compete with the children so the
        // best lineage is never dropped while it still ranks in the beam.
        std::vector<Parent> next;
        auto try_add = [&](Parent&& par) {
            if (static_cast<int>(next.size()) >= cfg.beam_width) return;
            for (const Parent& n : next)
                if (n.seq.symbols == par.seq.symbols) return;
            next.push_back(std::move(par));
        };
        std::size_t child_pos = 0, parent_pos = 0;
        while (static_cast<int>(next.size()) < cfg.beam_width &&
               (child_pos < order.size() || parent_pos < beam.size())) {
            const bool child_ok =
                child_pos < order.size() && scored[order[child_pos]].fidelity >= 0.0;
            const bool parent_ok = parent_pos < beam.size();
            if (!child_ok && !parent_ok) break;
            const bool take_child =
                child_ok && (!parent_ok || scored[order[child_pos]].fidelity >=
                                               beam[parent_pos].fid.fidelity);
            if (take_child) {
                const std::size_t idx = order[child_pos++];
                Parent par{cands[idx], scored[idx].theta, scored[idx].fid};
                if (!per_candidate) {
                    par = score_parent(cands[idx], beam[0].theta);
                    ++out.evaluations;
                }
                try_add(std::move(par));
            } else {
                try_add(Parent{beam[parent_pos]});
                ++parent_pos;
            }
        }
        beam = std::move(next);
        out.fidelity_history.push_back(beam[0].fid.fidelity);
        if (beam[0].fid.fidelity > best.fid.fidelity) best = beam[0];
    }
    out.hit_generation_cap = (gen == cfg.max_generations);

    // Fixed mode climbs at theta_desired; characterize the result at its
    // own optimal angle so reports carry (theta*, F(theta*)).
    if (fixed && has_pulse(best.seq)) {
        try {
            const ThetaOpt t =
                optimal_theta(best.seq, m, p, shape, gate, cfg.theta_desired);
            best.theta = t.theta_star;
            best.fid = t.fid;
        } catch (const std::exception&) {
            // keep the theta_desired characterization
        }
    }

    out.seq = best.seq;
    out.theta_star = best.theta;
    out.fid = best.fid;
    return out;
}

namespace {

// Initial length estimate: the M whose raw seed rotation budget implies a
// single-pulse angle closest to the desired one.
int estimate_length(const TransmonParams& p, double f_clock, const GateSpec& gate,
                    const SeedConfig& seed_cfg, double theta_desired) {
    const int cap = std::max(16, static_cast<int>(std::ceil(5.0 * gate.angle / theta_desired)));
    int best_m = 8;
    double best_err = 1e300;
    for (int length = 8; length <= cap; ++length) {
        const TritSequence seed = make_seed(p, f_clock, length, seed_cfg);
        const double budget = rotation_budget(seed, p.f01);
        if (budget < 1.0) continue;
        const double err = std::abs(gate.angle / budget - theta_desired);
        if (err < best_err) {
            best_err = err;
            best_m = length;
        }
    }
    return best_m;
}

}  // namespace

OptimizationReport optimize_for_theta(const TransmonParams& p, double f_clock,
                                      const PulseShape& shape, const GateSpec& gate,
                                      const SeedConfig& seed_cfg, const OptimizerConfig& cfg) {
    cfg.validate();
    seed_cfg.validate();
    const StaticModel m = build_static(p);

    OptimizationReport report;
    SeedConfig active_seed = seed_cfg;
    int length = cfg.m_init > 0 ? cfg.m_init
                                : estimate_length(p, f_clock, gate, active_seed, cfg.theta_desired);
    std::map<int, double> visited;  // M -> theta* under the current seed rule
    bool tried_interpolation = false;
    int phase_bumps = 0;
    double best_err = 1e300;
    double best_matched_infid = 1e300;

    for (int step = 0; step < cfg.max_length_steps; ++step) {
        length = std::max(1, length);
        const TritSequence seed = make_seed(p, f_clock, length, active_seed);
        const EvolveOutcome out = evolve(seed, m, p, shape, gate, cfg);
        report.evaluations += out.evaluations;
        report.length_history.emplace_back(length, out.theta_star);

        const double err = std::abs(out.theta_star - cfg.theta_desired);
        const double infid = 1.0 - out.fid.fidelity;
        const bool matched = err <= cfg.angle_tol;
        // An angle-matched solution outranks any unmatched one; among
        // matched solutions lower infidelity wins, among unmatched ones the
        // closer angle wins.
        const bool better = matched
                                ? (!report.angle_matched || infid < best_matched_infid)
                                : (!report.angle_matched && err < best_err);
        if (better) {
            if (matched) best_matched_infid = infid;
            best_err = std::min(best_err, err);
            report.angle_matched = report.angle_matched || matched;
            report.best_seq = out.seq;
            report.theta_star = out.theta_star;
            report.infidelity = infid;
            report.phi_z = out.fid.phi_z;
            report.leakage = out.fid.leakage;
            report.gate_time = out.seq.gate_time();
            report.fidelity_history = out.fidelity_history;
        }
        if (matched && infid <= cfg.target_infidelity) break;

        visited[length] = out.theta_star;
        const int next = out.theta_star > cfg.theta_desired ? length + 1 : length - 1;
        if (visited.count(next) == 0) {
            length = next;
            continue;
        }

        // Cycle between adjacent lengths straddling theta_desired: move to
        // the closer one and change the seed rule.
        const double err_next = std::abs(visited[next] - cfg.theta_desired);
        if (err_next < err) length = next;
        if (!tried_interpolation) {
            tried_interpolation = true;
            try {
                OptimizerConfig aux = cfg;
                aux.theta_mode = OptimizerConfig::ThetaMode::PerGeneration;
                active_seed.a_th = interpolate_threshold(p, f_clock, shape, gate, seed_cfg,
                                                         aux, cfg.theta_desired);
            } catch (const std::exception&) {
                active_seed.phase0 += kTau / 16.0;
                ++phase_bumps;
            }
        } else {
            active_seed.phase0 = seed_cfg.phase0 + (++phase_bumps) * kTau / 16.0;
        }
        visited.clear();
    }
    return report;
}

double interpolate_threshold(const TransmonParams& p, double f_clock,
                             const PulseShape& shape, const GateSpec& gate,
                             const SeedConfig& seed_cfg, const OptimizerConfig& cfg,
                             double theta_desired) {
    const StaticModel m = build_static(p);
    const double a_min = 0.01, a_max = 1.0;
    const int length = cfg.m_init > 0 ? cfg.m_init
                                      : estimate_length(p, f_clock, gate, seed_cfg, theta_desired);

    auto theta_at = [&](double frac) {
        SeedConfig sc = seed_cfg;
        sc.a_th = frac;
        const TritSequence seed = make_seed(p, f_clock, length, sc);
        return evolve(seed, m, p, shape, gate, cfg).theta_star;
    };
    const double theta_min = theta_at(a_min);
    const double theta_max = theta_at(a_max);
    if (std::abs(theta_max - theta_min) < 1e-12)
        throw std::runtime_error("interpolate_threshold: degenerate endpoints");
    const double a = a_min + (theta_desired - theta_min) * (a_max - a_min) / (theta_max - theta_min);
    return std::clamp(a, 1e-3, 1.0);
}

}  // namespace sfq
