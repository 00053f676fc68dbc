#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blockade/optimizer.hpp"

namespace blockade {

enum class RunMode { simulate, replay, optimize, sweep, baseline, robustness, twotime };

RunMode mode_from_string(const std::string& s);
std::string mode_to_string(RunMode m);

struct SweepSpec {
    std::vector<double> tau_T;
    std::vector<int> p;
};

struct RobustnessSpec {
    int points = 21;
    double span = 0.2;
};

struct TwoTimeSpec {
    double t = 0.0;          // emission time; defaults to the waveform horizon
    double delay_max = 1.0;
    int delays = 101;
};

struct RunConfig {
    RunMode mode = RunMode::simulate;
    SystemParams system;
    double alpha1 = 0.1;
    double z0 = 1.0;
    std::optional<HarmonicCoupling> waveform;
    std::optional<OptimizationProblem> problem;
    std::optional<double> tau_end;
    SweepSpec sweep;
    RobustnessSpec robustness;
    TwoTimeSpec twotime;
    std::string output = "out";
    std::uint64_t seed = 0;
    double step = 1e-4;
};

struct CliOverrides {
    std::optional<std::string> mode;
    std::optional<std::string> output;
    std::optional<std::uint64_t> seed;
    std::optional<double> step;
};

// Strict parse: unknown keys anywhere are a validation error; metadata is
// limited to format_version / label / description and otherwise ignored.
RunConfig parse_config(const std::string& json_text, const CliOverrides& ov);
RunConfig load_config(const std::string& path, const CliOverrides& ov);

// Executes the configured mode and writes its data files under config.output.
// Returns 0; throws ValidationError (exit 1) or NumericalError (exit 2).
int run(const RunConfig& config);

// Fixed formatting shared by every writer: %.11e, 12 significant digits.
std::string format_number(double v);

}  // namespace blockade
