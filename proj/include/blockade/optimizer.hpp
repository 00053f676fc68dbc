#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blockade/dynamics.hpp"
#include "blockade/params.hpp"
#include "blockade/waveform.hpp"

namespace blockade {

struct OptimizationProblem {
    SystemParams params;
    double z0 = 1.0;
    double alpha1 = 0.1;
    double tau_T = 1.0;
    int p = 3;
    double penalty_weight = 0.0;       // <= 0: auto 1e3 / max(1, jmax)^2
    int restarts = 32;
    std::uint64_t seed = 0;
    double step = 1e-4;
    int max_evals_per_restart = 3000;
    // Fidelity values below the floor are not resolvable at the default
    // integrator accuracy; the search treats them as converged so that
    // reported g2 values stay stable under step halving.
    double objective_floor = 1e-8;
    int penalty_grid = 2000;
    int audit_grid = 20000;

    void validate() const;
    double resolved_penalty_weight() const;
};

struct BaselineResult {
    double g2_min = 0.0;
    double tau_min = 0.0;              // rounded to 1e-3
    std::vector<double> trace_tau;     // sampled scan grid
    std::vector<double> trace_g2;
};

struct OptimizationReport {
    HarmonicCoupling best;
    double objective = 0.0;            // x1^2 + x2^2 at tau_T, recomputed fresh
    double g2_at_T = 0.0;              // recomputed at half the search step
    double box_residual = 0.0;         // integrated-square violation, audit grid
    double jT_residual = 0.0;          // |series value at tau_T|
    std::vector<double> g2_trace_tau;
    std::vector<double> g2_trace;
    double baseline_g2_min = 0.0;      // NaN when the baseline has no dip
    double baseline_tau_min = 0.0;
    long evaluations = 0;
    double penalty_weight_final = 0.0;
    std::string status;                // "ok" | "no_improvement"
};

// x1^2(tau_T) + x2^2(tau_T) + weight * box_violation, on the problem's grid.
double objective(const HarmonicCoupling& c, const OptimizationProblem& prob);

// Multistart simplex search over a1..a_{2p} with a0 eliminated each
// evaluation. Deterministic for a fixed (problem, seed); restarts own private
// RNG streams and ties break by objective, then box residual, then index.
// extra_starts supplies additional deterministic restarts (coefficient tails
// a1..a_{2p}); used by the sweep for warm and reference seeding.
OptimizationReport optimize(const OptimizationProblem& prob,
                            const std::vector<std::vector<double>>& extra_starts = {});

// Constant coupling J = jmax simulated until the deepest blockade dip is
// bracketed: the sampled global minimum must be interior, locally minimal,
// and flanked on both sides by samples 10x its depth. Returns the
// golden-refined minimum. Throws NoMinimumFound when no confirmed dip exists
// on the (auto-extended) window.
BaselineResult baseline_constant(const OptimizationProblem& prob);

struct SweepCell {
    double tau_T = 0.0;
    int p = 0;
    std::string status;                // "ok" | "no_improvement" | "error: ..."
    double objective = 0.0;            // x1^2 + x2^2 at tau_T
    double g2_at_T = 0.0;
    double box_residual = 0.0;
    double jT_residual = 0.0;
    long evaluations = 0;
    std::vector<double> best_tail;     // a1..a_{2p} of the cell's best record
};

// One optimize run per (tau_T, p) cell. Cells iterate p-major; within a row
// the previous cell's best coefficients seed one extra restart (warm start),
// as does `reference` when its harmonic count matches the cell.
std::vector<SweepCell> sweep_duration_harmonics(const OptimizationProblem& base,
                                                const std::vector<double>& tau_T_list,
                                                const std::vector<int>& p_list,
                                                const std::optional<HarmonicCoupling>& reference);

struct RobustnessPoint {
    double ratio = 0.0;                // u2 / u1
    double u2 = 0.0;
    double g2_at_T = 0.0;
};

// Fixed waveform, u2 scanned over [1-span, 1+span]*u1; u1 held at nominal.
std::vector<RobustnessPoint> robustness_sweep(const HarmonicCoupling& c,
                                              const OptimizationProblem& prob,
                                              int points = 21, double span = 0.2);

}  // namespace blockade
