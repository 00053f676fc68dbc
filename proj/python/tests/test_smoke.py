"""End-to-end smoke checks for the pyblockade extension module."""

import json
import math
import os
import sys

import pyblockade as pb


def load_example(data_dir, name):
    with open(os.path.join(data_dir, name), "rb") as f:
        return json.load(f)


def make_system(section):
    s = pb.SystemParams()
    s.kappa = section.get("kappa", 1.0)
    s.u1 = section.get("u1", 0.0)
    s.u2 = section.get("u2", 0.0)
    s.jmax = section.get("jmax", 0.0)
    return s


def make_waveform(section):
    w = pb.HarmonicCoupling()
    w.p = section["p"]
    w.a = section["a"]
    w.tau_T = section["tau_T"]
    w.jmax = section["jmax"]
    w.validate()
    return w


def main():
    data_dir = sys.argv[1] if len(sys.argv) > 1 else "data"
    cfg = load_example(data_dir, "example1.json")
    system = make_system(cfg["system"])
    wf = make_waveform(cfg["waveform"])
    alpha1 = cfg["initial"]["alpha1"]
    z0 = cfg["initial"]["z0"]

    # shipped record drives g2 at the horizon deep below the antibunching scale
    tr = pb.simulate(system, alpha1, z0, wf, wf.tau_T, step=1e-3)
    assert len(tr["tau"]) == len(tr["g2"]) > 1000
    g2_T = tr["g2"][-1]
    assert 0.0 < g2_T < 1e-6, g2_T

    # delayed correlation at zero delay reproduces the equal-time value
    v0 = pb.two_time(system, alpha1, z0, wf, wf.tau_T, 0.0, step=1e-3)
    assert abs(v0 - g2_T) <= 1e-9 * g2_T, (v0, g2_T)

    # delayed correlation never undercuts the equal-time value
    v1 = pb.two_time(system, alpha1, z0, wf, wf.tau_T, 1.0, step=1e-3)
    assert v1 >= g2_T, (v1, g2_T)

    # with the coupling closed, the one-quantum population decays exactly
    zero = pb.HarmonicCoupling()
    zero.p = 1
    zero.a = [0.0, 0.0, 0.0]
    zero.tau_T = 0.5
    zero.jmax = 1.0
    trz = pb.simulate(system, 0.1, 0.95, zero, 0.5, step=1e-3)
    ratio = trz["c10_abs2"][-1] / trz["c10_abs2"][0]
    assert abs(ratio - math.exp(-0.5)) < 1e-12, ratio

    # closing coefficient kills the series value at the horizon
    a0 = pb.eliminate_a0([1.0, 0.0], math.pi / 2)
    assert abs(a0 + 2.0 / math.pi) < 1e-15, a0
    probe = pb.HarmonicCoupling()
    probe.p = 1
    probe.a = [a0, 1.0, 0.0]
    probe.tau_T = math.pi / 2
    probe.jmax = 2.0
    assert abs(probe.value_series(probe.tau_T)) < 1e-12
    assert probe.value(probe.tau_T + 0.1) == 0.0

    # reduced search is deterministic and beats the uncoupled record
    prob = pb.OptimizationProblem()
    sp = pb.SystemParams()
    sp.u1 = 1.0
    sp.u2 = 1.0
    sp.jmax = 1.0
    prob.params = sp
    prob.z0 = 1.0
    prob.alpha1 = 0.1
    prob.tau_T = 0.8
    prob.p = 2
    prob.restarts = 2
    prob.seed = 5
    prob.step = 1e-3
    prob.max_evals_per_restart = 150
    prob.objective_floor = 1e-6
    r1 = pb.optimize(prob)
    r2 = pb.optimize(prob)
    assert r1.best.a == r2.best.a
    assert r1.objective == r2.objective
    assert r1.g2_at_T == r2.g2_at_T
    assert r1.evaluations == r2.evaluations
    assert r1.status == "ok"
    assert r1.objective < 0.9

    # constant-coupling reference dip for the weak example
    cfg2 = load_example(data_dir, "example2.json")
    prob2 = pb.OptimizationProblem()
    prob2.params = make_system(cfg2["system"])
    prob2.z0 = cfg2["initial"]["z0"]
    prob2.alpha1 = cfg2["initial"]["alpha1"]
    prob2.tau_T = cfg2["problem"]["tau_T"]
    prob2.step = 1e-3
    base = pb.baseline(prob2)
    assert 8.7e-3 < base.g2_min < 9.2e-3, base.g2_min
    assert 1.53 <= base.tau_min <= 1.57, base.tau_min

    # robustness scan brackets the nominal nonlinearity
    pts = pb.robustness(wf, pb_problem_for(system, alpha1, z0, wf), points=5, span=0.2)
    assert len(pts) == 5
    assert abs(pts[0].ratio - 0.8) < 1e-14 and abs(pts[-1].ratio - 1.2) < 1e-14
    assert all(p.g2_at_T < 1.0 for p in pts)

    # invalid input surfaces as ValueError through the exception mapping
    try:
        pb.alpha2_from_imbalance(0.1, -1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for z0 = -1")

    print("smoke: all checks passed")


def pb_problem_for(system, alpha1, z0, wf):
    prob = pb.OptimizationProblem()
    prob.params = system
    prob.alpha1 = alpha1
    prob.z0 = z0
    prob.tau_T = wf.tau_T
    prob.step = 1e-3
    return prob


if __name__ == "__main__":
    main()
