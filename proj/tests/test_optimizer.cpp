#include <cmath>
#include <cstddef>
#include <vector>

#include "blockade/dynamics.hpp"
#include "blockade/optimizer.hpp"
#include "doctest.h"

using namespace blockade;

namespace {

// Small, fast search problem; floor raised to keep the step-halving report
// check comfortably resolvable at the coarser unit-test step.
OptimizationProblem small_problem() {
    OptimizationProblem prob;
    prob.params.u1 = 1.0;
    prob.params.u2 = 1.0;
    prob.params.jmax = 1.0;
    prob.z0 = 1.0;
    prob.alpha1 = 0.1;
    prob.tau_T = 1.0;
    prob.p = 2;
    prob.restarts = 3;
    prob.seed = 7;
    prob.step = 1e-3;
    prob.max_evals_per_restart = 300;
    prob.objective_floor = 1e-6;
    return prob;
}

bool same_double(double a, double b) {
    return a == b || (std::isnan(a) && std::isnan(b));
}

}  // namespace

TEST_CASE("problem validation rejects out-of-range fields") {
    auto bad = small_problem();
    bad.tau_T = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = small_problem();
    bad.p = 0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = small_problem();
    bad.z0 = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = small_problem();
    bad.z0 = 1.0 + 1e-9;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = small_problem();
    bad.restarts = 0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = small_problem();
    bad.step = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = small_problem();
    bad.penalty_grid = 50;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = small_problem();
    bad.objective_floor = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = small_problem();
    bad.max_evals_per_restart = 5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = small_problem();
    bad.params.jmax = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("penalty weight resolution") {
    auto prob = small_problem();
    prob.penalty_weight = 17.5;
    CHECK(prob.resolved_penalty_weight() == 17.5);
    prob.penalty_weight = 0.0;
    prob.params.jmax = 2.0;
    CHECK(prob.resolved_penalty_weight() == doctest::Approx(250.0).epsilon(1e-15));
    prob.params.jmax = 0.5;  // sub-unit ceilings clamp to the unscaled weight
    CHECK(prob.resolved_penalty_weight() == doctest::Approx(1000.0).epsilon(1e-15));
}

TEST_CASE("objective of the zero waveform") {
    auto prob = small_problem();
    HarmonicCoupling c;
    c.p = prob.p;
    c.a.assign(2 * prob.p + 1, 0.0);
    c.tau_T = prob.tau_T;
    c.jmax = prob.params.jmax;

    // z0 = 1: all two-photon weight sits in the target pair and only Kerr
    // rotation acts, so the terminal weight is 1 up to integrator round-off.
    CHECK(objective(c, prob) == doctest::Approx(1.0).epsilon(1e-12));

    prob.z0 = 0.95;  // ((1+z0)/2)^2
    CHECK(objective(c, prob) == doctest::Approx(0.950625).epsilon(1e-10));

    prob.tau_T = 1.5;
    CHECK_THROWS_AS(objective(c, prob), ValidationError);
}

TEST_CASE("zero ceiling collapses to the zero record") {
    auto prob = small_problem();
    prob.params.jmax = 0.0;
    const auto rep = optimize(prob);
    CHECK(rep.status == "ok");
    CHECK(rep.evaluations == 0);
    REQUIRE(rep.best.a.size() == 5);
    for (double v : rep.best.a) CHECK(v == 0.0);
    CHECK(rep.objective == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.box_residual == 0.0);
    CHECK(rep.jT_residual == 0.0);
    CHECK(std::isfinite(rep.g2_at_T));
    CHECK(rep.g2_at_T > 0.0);
    CHECK(rep.g2_trace.size() > 100);
    // constant zero coupling has no blockade dip: baseline reports NaN
    CHECK(std::isnan(rep.baseline_g2_min));
    CHECK(std::isnan(rep.baseline_tau_min));
}

TEST_CASE("search is deterministic for a fixed seed") {
    const auto prob = small_problem();
    const auto a = optimize(prob);
    const auto b = optimize(prob);
    CHECK(a.best.a == b.best.a);
    CHECK(a.objective == b.objective);
    CHECK(a.g2_at_T == b.g2_at_T);
    CHECK(a.box_residual == b.box_residual);
    CHECK(a.jT_residual == b.jT_residual);
    CHECK(a.evaluations == b.evaluations);
    CHECK(a.penalty_weight_final == b.penalty_weight_final);
    CHECK(a.status == b.status);
    CHECK(a.g2_trace_tau == b.g2_trace_tau);
    CHECK(a.g2_trace == b.g2_trace);
    CHECK(same_double(a.baseline_g2_min, b.baseline_g2_min));
    CHECK(same_double(a.baseline_tau_min, b.baseline_tau_min));
}

TEST_CASE("search beats the uncoupled record") {
    const auto prob = small_problem();
    const auto rep = optimize(prob);
    CHECK(rep.status == "ok");
    CHECK(rep.objective < 0.9);
    CHECK(rep.evaluations > 0);
    // audited feasibility: pointwise box slack <= 1e-5 and closed endpoint
    CHECK(rep.box_residual <= 1e-9);
    CHECK(rep.jT_residual <= 1e-6);
    CHECK(std::isfinite(rep.g2_at_T));

    CHECK_THROWS_AS(optimize(prob, {{0.1, 0.2, 0.3}}), ValidationError);
}

TEST_CASE("negligible ceiling yields no usable improvement") {
    auto prob = small_problem();
    prob.params.jmax = 1e-9;
    prob.params.u1 = 0.3;
    prob.params.u2 = 0.3;
    prob.restarts = 2;
    prob.max_evals_per_restart = 100;
    const auto rep = optimize(prob);
    CHECK((rep.status == "ok" || rep.status == "no_improvement"));
    CHECK(rep.objective <= 1.0 + 1e-9);
    CHECK(std::isnan(rep.baseline_g2_min));
}

TEST_CASE("constant-coupling reference dip in the weak configuration") {
    OptimizationProblem prob;
    prob.params.u1 = 0.06283185307179587;
    prob.params.u2 = 0.06283185307179587;
    prob.params.jmax = 3.141592653589793;
    prob.z0 = 0.95;
    prob.alpha1 = 0.1;
    prob.tau_T = 1.2;  // unused by the scan, must still validate
    prob.step = 1e-3;
    const auto base = baseline_constant(prob);
    CHECK(base.g2_min > 8.7e-3);
    CHECK(base.g2_min < 9.2e-3);
    CHECK(base.tau_min >= 1.53);
    CHECK(base.tau_min <= 1.57);
    // tau_min is reported on a 1e-3 lattice
    CHECK(base.tau_min * 1000.0 == doctest::Approx(std::round(base.tau_min * 1000.0)).epsilon(1e-12));
    REQUIRE(base.trace_tau.size() == base.trace_g2.size());
    CHECK(base.trace_tau.size() > 1000);
}

TEST_CASE("duration-harmonic sweep fills every cell") {
    auto base = small_problem();
    base.restarts = 2;
    base.max_evals_per_restart = 150;
    const auto cells = sweep_duration_harmonics(base, {0.8, 1.0}, {2}, std::nullopt);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].tau_T == 0.8);
    CHECK(cells[1].tau_T == 1.0);
    for (const auto& c : cells) {
        CHECK(c.p == 2);
        CHECK((c.status == "ok" || c.status == "no_improvement"));
        CHECK(c.best_tail.size() == 4);
        CHECK(c.evaluations > 0);
        CHECK(std::isfinite(c.objective));
    }
    CHECK_THROWS_AS(sweep_duration_harmonics(base, {}, {2}, std::nullopt), ValidationError);
}

TEST_CASE("nonlinearity mismatch scan brackets the nominal point") {
    auto prob = small_problem();
    prob.z0 = 0.95;
    HarmonicCoupling c;
    c.p = 1;
    c.a = {0.0, 0.8, 0.4};
    c.tau_T = 1.0;
    c.jmax = 1.0;
    const auto pts = robustness_sweep(c, prob, 5, 0.2);
    REQUIRE(pts.size() == 5);
    CHECK(pts.front().ratio == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(pts.back().ratio == doctest::Approx(1.2).epsilon(1e-15));
    for (const auto& pt : pts) {
        CHECK(pt.u2 == pt.ratio * prob.params.u1);
        CHECK(std::isfinite(pt.g2_at_T));
        CHECK(pt.g2_at_T > 0.0);
    }
    // center point reproduces the unperturbed simulation exactly
    const auto bundle = make_initial(prob.alpha1, alpha2_from_imbalance(prob.alpha1, prob.z0));
    const Grid g = grid_from_waveform(c, c.tau_T, prob.step);
    const auto traj = simulate_manifold(bundle, g, prob.params.u1, prob.params.u1);
    CHECK(pts[2].ratio == 1.0);
    CHECK(pts[2].g2_at_T == observables_at(traj, traj.tau.size() - 1).g2);

    CHECK_THROWS_AS(robustness_sweep(c, prob, 1, 0.2), ValidationError);
    CHECK_THROWS_AS(robustness_sweep(c, prob, 5, 1.5), ValidationError);
}
