#include "blockade/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace blockade {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ValidationError(where + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw ValidationError("unknown key '" + it.key() + "' in " + where);
    }
}

double need_number(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) throw ValidationError(where + " is missing '" + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ValidationError(where + "." + key + " must be a number");
    return v.get<double>();
}

double opt_number(const json& obj, const std::string& where, const char* key, double dflt) {
    if (!obj.contains(key)) return dflt;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ValidationError(where + "." + key + " must be a number");
    return v.get<double>();
}

long opt_integer(const json& obj, const std::string& where, const char* key, long dflt) {
    if (!obj.contains(key)) return dflt;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ValidationError(where + "." + key + " must be an integer");
    return v.get<long>();
}

HarmonicCoupling parse_waveform(const json& obj) {
    reject_unknown(obj, "waveform", {"p", "a", "tau_T", "jmax"});
    HarmonicCoupling c;
    c.p = static_cast<int>(opt_integer(obj, "waveform", "p", 0));
    if (!obj.contains("a") || !obj.at("a").is_array())
        throw ValidationError("waveform.a must be an array of numbers");
    for (const auto& v : obj.at("a")) {
        if (!v.is_number()) throw ValidationError("waveform.a must be an array of numbers");
        c.a.push_back(v.get<double>());
    }
    c.tau_T = need_number(obj, "waveform", "tau_T");
    c.jmax = need_number(obj, "waveform", "jmax");
    if (c.p == 0 && c.a.size() >= 3 && c.a.size() % 2 == 1)
        c.p = static_cast<int>((c.a.size() - 1) / 2);
    c.validate();
    return c;
}

json waveform_to_json(const HarmonicCoupling& c) {
    json o;
    o["p"] = c.p;
    o["a"] = c.a;
    o["tau_T"] = c.tau_T;
    o["jmax"] = c.jmax;
    return o;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory: " + dir);
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    const std::string path = dir + "/" + name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open output file: " + path);
    return f;
}

// nlohmann serializes non-finite numbers as null; route every double through
// this so report files stay parseable and deterministic.
json num(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

json series(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(num(x));
    return arr;
}

void write_json(const std::string& dir, const std::string& name, const json& doc) {
    auto f = open_out(dir, name);
    f << doc.dump(2) << '\n';
}

void write_trace_csv(const std::string& dir, const std::string& name,
                     const ManifoldTrajectory& traj) {
    auto f = open_out(dir, name);
    f << "tau,J,N1,g2,c20_abs2,c10_abs2,c11_abs2\n";
    for (std::size_t i = 0; i < traj.tau.size(); ++i) {
        const auto o = observables_at(traj, i);
        f << format_number(o.tau) << ',' << format_number(o.J) << ','
          << format_number(o.n1) << ',' << format_number(o.g2) << ','
          << format_number(o.c20_abs2) << ',' << format_number(o.c10_abs2) << ','
          << format_number(o.c11_abs2) << '\n';
    }
}

OptimizationProblem assemble_problem(const RunConfig& cfg) {
    OptimizationProblem prob = cfg.problem.value_or(OptimizationProblem{});
    prob.params = cfg.system;
    prob.z0 = cfg.z0;
    prob.alpha1 = cfg.alpha1;
    prob.seed = cfg.seed;
    prob.step = cfg.step;
    return prob;
}

json report_to_json(const OptimizationReport& rep) {
    json o;
    o["best"] = waveform_to_json(rep.best);
    o["objective"] = num(rep.objective);
    o["g2_at_T"] = num(rep.g2_at_T);
    o["box_residual"] = num(rep.box_residual);
    o["jT_residual"] = num(rep.jT_residual);
    o["g2_trace"] = json{{"tau", series(rep.g2_trace_tau)}, {"g2", series(rep.g2_trace)}};
    o["baseline"] = json{{"g2_min", num(rep.baseline_g2_min)}, {"tau_min", num(rep.baseline_tau_min)}};
    o["evaluations"] = rep.evaluations;
    o["penalty_weight_final"] = num(rep.penalty_weight_final);
    o["status"] = rep.status;
    return o;
}

std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

int run_simulate(const RunConfig& cfg, bool with_report) {
    if (!cfg.waveform) throw ValidationError("this mode requires a waveform record");
    const auto& c = *cfg.waveform;
    const double tau_end = cfg.tau_end.value_or(c.tau_T);
    if (!(tau_end > 0.0)) throw ValidationError("tau_end must be positive");
    const auto bundle = make_initial(cfg.alpha1, alpha2_from_imbalance(cfg.alpha1, cfg.z0));
    const Grid g = grid_from_waveform(c, tau_end, cfg.step);
    const auto traj = simulate_manifold(bundle, g, cfg.system.u1, cfg.system.u2);
    write_trace_csv(cfg.output, "trace.csv", traj);
    if (with_report) {
        const std::size_t ih = g.node_index(std::min(c.tau_T, tau_end));
        const auto oh = observables_at(traj, ih);
        const auto audit = fine_audit(c, 20000);
        json o;
        o["waveform"] = waveform_to_json(c);
        o["g2_at_T"] = num(oh.g2);
        o["n1_at_T"] = num(oh.n1);
        o["box_max_under"] = num(audit.max_under);
        o["box_max_over"] = num(audit.max_over);
        o["box_residual"] = num(audit.integrated_sq);
        o["jT_residual"] = num(audit.jT_abs);
        write_json(cfg.output, "report.json", o);
    }
    return 0;
}

int run_optimize(const RunConfig& cfg) {
    if (!cfg.problem) throw ValidationError("optimize mode requires a problem record");
    const auto prob = assemble_problem(cfg);
    std::vector<std::vector<double>> extra;
    if (cfg.waveform && cfg.waveform->p == prob.p &&
        std::fabs(cfg.waveform->tau_T - prob.tau_T) <= 1e-12)
        extra.emplace_back(cfg.waveform->a.begin() + 1, cfg.waveform->a.end());
    const auto rep = optimize(prob, extra);
    write_json(cfg.output, "report.json", report_to_json(rep));
    write_json(cfg.output, "waveform.json", waveform_to_json(rep.best));
    const auto bundle = make_initial(prob.alpha1, alpha2_from_imbalance(prob.alpha1, prob.z0));
    const Grid g = grid_from_waveform(rep.best, prob.tau_T, prob.step);
    write_trace_csv(cfg.output, "trace.csv",
                    simulate_manifold(bundle, g, prob.params.u1, prob.params.u2));
    return 0;
}

int run_sweep(const RunConfig& cfg) {
    if (!cfg.problem) throw ValidationError("sweep mode requires a problem record");
    if (cfg.sweep.tau_T.empty() || cfg.sweep.p.empty())
        throw ValidationError("sweep mode requires nonempty tau_T and p lists");
    const auto base = assemble_problem(cfg);
    std::optional<HarmonicCoupling> ref;
    if (cfg.waveform) ref = *cfg.waveform;
    const auto cells = sweep_duration_harmonics(base, cfg.sweep.tau_T, cfg.sweep.p, ref);
    auto f = open_out(cfg.output, "sweep.csv");
    f << "tau_T,p,status,objective,g2_at_T,box_residual,jT_residual,evaluations\n";
    for (const auto& cell : cells) {
        f << format_number(cell.tau_T) << ',' << cell.p << ',' << csv_safe(cell.status) << ','
          << format_number(cell.objective) << ',' << format_number(cell.g2_at_T) << ','
          << format_number(cell.box_residual) << ',' << format_number(cell.jT_residual) << ','
          << cell.evaluations << '\n';
    }
    return 0;
}

int run_baseline(const RunConfig& cfg) {
    const auto prob = assemble_problem(cfg);
    const auto res = baseline_constant(prob);
    json o;
    o["g2_min"] = num(res.g2_min);
    o["tau_min"] = num(res.tau_min);
    o["j_constant"] = num(prob.params.jmax);
    write_json(cfg.output, "baseline.json", o);
    auto f = open_out(cfg.output, "baseline_trace.csv");
    f << "tau,g2\n";
    for (std::size_t i = 0; i < res.trace_tau.size(); ++i)
        f << format_number(res.trace_tau[i]) << ',' << format_number(res.trace_g2[i]) << '\n';
    return 0;
}

int run_robustness(const RunConfig& cfg) {
    if (!cfg.waveform) throw ValidationError("robustness mode requires a waveform record");
    const auto prob = assemble_problem(cfg);
    const auto pts = robustness_sweep(*cfg.waveform, prob, cfg.robustness.points, cfg.robustness.span);
    auto f = open_out(cfg.output, "robustness.csv");
    f << "ratio,u2,g2_at_T\n";
    for (const auto& pt : pts)
        f << format_number(pt.ratio) << ',' << format_number(pt.u2) << ','
          << format_number(pt.g2_at_T) << '\n';
    return 0;
}

int run_twotime(const RunConfig& cfg) {
    if (!cfg.waveform) throw ValidationError("twotime mode requires a waveform record");
    const auto& c = *cfg.waveform;
    const double t = cfg.twotime.t > 0.0 ? cfg.twotime.t : c.tau_T;
    if (cfg.twotime.delays < 2) throw ValidationError("twotime.delays must be >= 2");
    if (!(cfg.twotime.delay_max > 0.0)) throw ValidationError("twotime.delay_max must be positive");
    const auto bundle = make_initial(cfg.alpha1, alpha2_from_imbalance(cfg.alpha1, cfg.z0));
    auto f = open_out(cfg.output, "twotime.csv");
    f << "delay,g2\n";
    for (int i = 0; i < cfg.twotime.delays; ++i) {
        const double delay = cfg.twotime.delay_max * i / (cfg.twotime.delays - 1);
        const double v = g2_two_time_general(bundle, cfg.system, c, t, delay, cfg.step);
        f << format_number(delay) << ',' << format_number(v) << '\n';
    }
    return 0;
}

}  // namespace

RunMode mode_from_string(const std::string& s) {
    if (s == "simulate") return RunMode::simulate;
    if (s == "replay") return RunMode::replay;
    if (s == "optimize") return RunMode::optimize;
    if (s == "sweep") return RunMode::sweep;
    if (s == "baseline") return RunMode::baseline;
    if (s == "robustness") return RunMode::robustness;
    if (s == "twotime") return RunMode::twotime;
    throw ValidationError("unknown mode: " + s);
}

std::string mode_to_string(RunMode m) {
    switch (m) {
        case RunMode::simulate: return "simulate";
        case RunMode::replay: return "replay";
        case RunMode::optimize: return "optimize";
        case RunMode::sweep: return "sweep";
        case RunMode::baseline: return "baseline";
        case RunMode::robustness: return "robustness";
        case RunMode::twotime: return "twotime";
    }
    throw ValidationError("unknown mode value");
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

RunConfig parse_config(const std::string& json_text, const CliOverrides& ov) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(doc, "config",
                   {"metadata", "mode", "system", "initial", "waveform", "problem", "tau_end",
                    "sweep", "robustness", "twotime", "output", "seed", "step"});

    RunConfig cfg;
    if (doc.contains("metadata"))
        reject_unknown(doc.at("metadata"), "metadata", {"format_version", "label", "description"});

    std::string mode_str = "simulate";
    if (doc.contains("mode")) {
        if (!doc.at("mode").is_string()) throw ValidationError("mode must be a string");
        mode_str = doc.at("mode").get<std::string>();
    }
    if (ov.mode) mode_str = *ov.mode;
    cfg.mode = mode_from_string(mode_str);

    if (doc.contains("system")) {
        const auto& s = doc.at("system");
        reject_unknown(s, "system", {"kappa", "u1", "u2", "jmax"});
        cfg.system.kappa = opt_number(s, "system", "kappa", 1.0);
        cfg.system.u1 = opt_number(s, "system", "u1", 0.0);
        cfg.system.u2 = opt_number(s, "system", "u2", 0.0);
        cfg.system.jmax = opt_number(s, "system", "jmax", 0.0);
    }
    if (doc.contains("initial")) {
        const auto& s = doc.at("initial");
        reject_unknown(s, "initial", {"alpha1", "z0"});
        cfg.alpha1 = opt_number(s, "initial", "alpha1", 0.1);
        cfg.z0 = opt_number(s, "initial", "z0", 1.0);
    }
    if (doc.contains("waveform")) cfg.waveform = parse_waveform(doc.at("waveform"));
    if (doc.contains("problem")) {
        const auto& s = doc.at("problem");
        reject_unknown(s, "problem",
                       {"tau_T", "p", "penalty_weight", "restarts", "max_evals_per_restart",
                        "objective_floor", "penalty_grid", "audit_grid"});
        OptimizationProblem prob;
        prob.tau_T = need_number(s, "problem", "tau_T");
        prob.p = static_cast<int>(opt_integer(s, "problem", "p", 3));
        prob.penalty_weight = opt_number(s, "problem", "penalty_weight", 0.0);
        prob.restarts = static_cast<int>(opt_integer(s, "problem", "restarts", 32));
        prob.max_evals_per_restart =
            static_cast<int>(opt_integer(s, "problem", "max_evals_per_restart", 3000));
        prob.objective_floor = opt_number(s, "problem", "objective_floor", 1e-8);
        prob.penalty_grid = static_cast<int>(opt_integer(s, "problem", "penalty_grid", 2000));
        prob.audit_grid = static_cast<int>(opt_integer(s, "problem", "audit_grid", 20000));
        cfg.problem = prob;
    }
    if (doc.contains("tau_end")) cfg.tau_end = need_number(doc, "config", "tau_end");
    if (doc.contains("sweep")) {
        const auto& s = doc.at("sweep");
        reject_unknown(s, "sweep", {"tau_T", "p"});
        if (s.contains("tau_T"))
            for (const auto& v : s.at("tau_T")) cfg.sweep.tau_T.push_back(v.get<double>());
        if (s.contains("p"))
            for (const auto& v : s.at("p")) cfg.sweep.p.push_back(v.get<int>());
    }
    if (doc.contains("robustness")) {
        const auto& s = doc.at("robustness");
        reject_unknown(s, "robustness", {"points", "span"});
        cfg.robustness.points = static_cast<int>(opt_integer(s, "robustness", "points", 21));
        cfg.robustness.span = opt_number(s, "robustness", "span", 0.2);
    }
    if (doc.contains("twotime")) {
        const auto& s = doc.at("twotime");
        reject_unknown(s, "twotime", {"t", "delay_max", "delays"});
        cfg.twotime.t = opt_number(s, "twotime", "t", 0.0);
        cfg.twotime.delay_max = opt_number(s, "twotime", "delay_max", 1.0);
        cfg.twotime.delays = static_cast<int>(opt_integer(s, "twotime", "delays", 101));
    }
    if (doc.contains("output")) {
        if (!doc.at("output").is_string()) throw ValidationError("output must be a string");
        cfg.output = doc.at("output").get<std::string>();
    }
    if (doc.contains("seed")) {
        const auto& v = doc.at("seed");
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw ValidationError("seed must be a nonnegative integer");
        cfg.seed = v.get<std::uint64_t>();
    }
    cfg.step = opt_number(doc, "config", "step", 1e-4);

    if (ov.output) cfg.output = *ov.output;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.step) cfg.step = *ov.step;
    if (!(cfg.step > 0.0)) throw ValidationError("step must be positive");
    cfg.system.validate();
    return cfg;
}

RunConfig load_config(const std::string& path, const CliOverrides& ov) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), ov);
}

int run(const RunConfig& config) {
    ensure_dir(config.output);
    switch (config.mode) {
        case RunMode::simulate: return run_simulate(config, false);
        case RunMode::replay: return run_simulate(config, true);
        case RunMode::optimize: return run_optimize(config);
        case RunMode::sweep: return run_sweep(config);
        case RunMode::baseline: return run_baseline(config);
        case RunMode::robustness: return run_robustness(config);
        case RunMode::twotime: return run_twotime(config);
    }
    throw ValidationError("unknown mode value");
}

}  // namespace blockade
