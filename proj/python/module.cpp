#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blockade/dynamics.hpp"
#include "blockade/optimizer.hpp"
#include "blockade/waveform.hpp"

namespace py = pybind11;
using namespace blockade;

namespace {

py::dict simulate(const SystemParams& sys, double alpha1, double z0,
                  const HarmonicCoupling& c, double tau_end, double step) {
    sys.validate();
    const auto bundle = make_initial(alpha1, alpha2_from_imbalance(alpha1, z0));
    const Grid g = grid_from_waveform(c, tau_end, step);
    const auto traj = simulate_manifold(bundle, g, sys.u1, sys.u2);
    std::vector<double> tau, j, n1, g2, c10, c11, c20;
    const std::size_t n = traj.tau.size();
    tau.reserve(n); j.reserve(n); n1.reserve(n); g2.reserve(n);
    c10.reserve(n); c11.reserve(n); c20.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto o = observables_at(traj, i);
        tau.push_back(o.tau);
        j.push_back(o.J);
        n1.push_back(o.n1);
        g2.push_back(o.g2);
        c10.push_back(o.c10_abs2);
        c11.push_back(o.c11_abs2);
        c20.push_back(o.c20_abs2);
    }
    py::dict d;
    d["tau"] = tau;
    d["J"] = j;
    d["n1"] = n1;
    d["g2"] = g2;
    d["c10_abs2"] = c10;
    d["c11_abs2"] = c11;
    d["c20_abs2"] = c20;
    return d;
}

double two_time(const SystemParams& sys, double alpha1, double z0,
                const HarmonicCoupling& c, double t, double delay, double step) {
    sys.validate();
    const auto bundle = make_initial(alpha1, alpha2_from_imbalance(alpha1, z0));
    return g2_two_time_general(bundle, sys, c, t, delay, step);
}

}  // namespace

PYBIND11_MODULE(pyblockade, m) {
    m.doc() = "two-mode photon-blockade dynamics and coupling-pulse search";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("kappa", &SystemParams::kappa)
        .def_readwrite("u1", &SystemParams::u1)
        .def_readwrite("u2", &SystemParams::u2)
        .def_readwrite("jmax", &SystemParams::jmax)
        .def("validate", &SystemParams::validate);

    py::class_<HarmonicCoupling>(m, "HarmonicCoupling")
        .def(py::init<>())
        .def_readwrite("p", &HarmonicCoupling::p)
        .def_readwrite("a", &HarmonicCoupling::a)
        .def_readwrite("tau_T", &HarmonicCoupling::tau_T)
        .def_readwrite("jmax", &HarmonicCoupling::jmax)
        .def("validate", &HarmonicCoupling::validate)
        .def("value", &HarmonicCoupling::value, py::arg("tau"))
        .def("value_series", &HarmonicCoupling::value_series, py::arg("tau"));

    py::class_<OptimizationProblem>(m, "OptimizationProblem")
        .def(py::init<>())
        .def_readwrite("params", &OptimizationProblem::params)
        .def_readwrite("z0", &OptimizationProblem::z0)
        .def_readwrite("alpha1", &OptimizationProblem::alpha1)
        .def_readwrite("tau_T", &OptimizationProblem::tau_T)
        .def_readwrite("p", &OptimizationProblem::p)
        .def_readwrite("penalty_weight", &OptimizationProblem::penalty_weight)
        .def_readwrite("restarts", &OptimizationProblem::restarts)
        .def_readwrite("seed", &OptimizationProblem::seed)
        .def_readwrite("step", &OptimizationProblem::step)
        .def_readwrite("max_evals_per_restart", &OptimizationProblem::max_evals_per_restart)
        .def_readwrite("objective_floor", &OptimizationProblem::objective_floor)
        .def_readwrite("penalty_grid", &OptimizationProblem::penalty_grid)
        .def_readwrite("audit_grid", &OptimizationProblem::audit_grid)
        .def("validate", &OptimizationProblem::validate);

    py::class_<BaselineResult>(m, "BaselineResult")
        .def_readonly("g2_min", &BaselineResult::g2_min)
        .def_readonly("tau_min", &BaselineResult::tau_min)
        .def_readonly("trace_tau", &BaselineResult::trace_tau)
        .def_readonly("trace_g2", &BaselineResult::trace_g2);

    py::class_<OptimizationReport>(m, "OptimizationReport")
        .def_readonly("best", &OptimizationReport::best)
        .def_readonly("objective", &OptimizationReport::objective)
        .def_readonly("g2_at_T", &OptimizationReport::g2_at_T)
        .def_readonly("box_residual", &OptimizationReport::box_residual)
        .def_readonly("jT_residual", &OptimizationReport::jT_residual)
        .def_readonly("g2_trace_tau", &OptimizationReport::g2_trace_tau)
        .def_readonly("g2_trace", &OptimizationReport::g2_trace)
        .def_readonly("baseline_g2_min", &OptimizationReport::baseline_g2_min)
        .def_readonly("baseline_tau_min", &OptimizationReport::baseline_tau_min)
        .def_readonly("evaluations", &OptimizationReport::evaluations)
        .def_readonly("penalty_weight_final", &OptimizationReport::penalty_weight_final)
        .def_readonly("status", &OptimizationReport::status);

    py::class_<RobustnessPoint>(m, "RobustnessPoint")
        .def_readonly("ratio", &RobustnessPoint::ratio)
        .def_readonly("u2", &RobustnessPoint::u2)
        .def_readonly("g2_at_T", &RobustnessPoint::g2_at_T);

    m.def("eliminate_a0", &eliminate_a0, py::arg("tail"), py::arg("tau_T"),
          "intercept coefficient closing the series value at the horizon");
    m.def("alpha2_from_imbalance", &alpha2_from_imbalance, py::arg("alpha1"), py::arg("z0"));
    m.def("simulate", &simulate, py::arg("system"), py::arg("alpha1"), py::arg("z0"),
          py::arg("coupling"), py::arg("tau_end"), py::arg("step") = 1e-4,
          "integrate the truncated manifold dynamics; returns per-node observables");
    m.def("two_time", &two_time, py::arg("system"), py::arg("alpha1"), py::arg("z0"),
          py::arg("coupling"), py::arg("t"), py::arg("delay"), py::arg("step") = 1e-4,
          "delayed second-order correlation of mode 1");
    m.def("optimize", &optimize, py::arg("problem"),
          py::arg("extra_starts") = std::vector<std::vector<double>>{},
          "multistart simplex search over the harmonic coefficients");
    m.def("baseline", &baseline_constant, py::arg("problem"),
          "deepest confirmed dip of the constant-coupling reference");
    m.def("robustness", &robustness_sweep, py::arg("coupling"), py::arg("problem"),
          py::arg("points") = 21, py::arg("span") = 0.2,
          "g2 at the horizon as the second nonlinearity is scanned");
}
