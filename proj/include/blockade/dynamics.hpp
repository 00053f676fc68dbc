#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "blockade/params.hpp"
#include "blockade/waveform.hpp"

namespace blockade {

// Fixed-step RK4 grid. Steps never straddle a breakpoint: each segment between
// consecutive breakpoints gets its own uniform step <= the nominal one, with a
// node pinned at every breakpoint. Coupling samples are stored per step
// (begin / mid / end) so a segment's final stage can use the segment's own
// smooth function rather than the other side of a discontinuity.
struct Grid {
    std::vector<double> node;              // size n+1, node[0] = 0
    std::vector<double> jb, jm, je;        // size n, per-step coupling samples
    double nominal_step = 0.0;

    std::size_t steps() const { return jb.size(); }
    // Index of the node at time tau; throws if no node matches within 1e-9.
    std::size_t node_index(double tau) const;
};

// sampler(tau, segment) -> J; segment indexes the breakpoint interval.
Grid build_grid(const std::vector<double>& breakpoints, double step,
                const std::function<double(double, int)>& sampler);

Grid grid_from_waveform(const HarmonicCoupling& c, double tau_end, double step);
Grid grid_from_constant(double j, double tau_end, double step);
// Staircase: values[s] on [edges[s], edges[s+1]); edges.front()=0, edges.back()=tau_end.
Grid grid_from_staircase(const std::vector<double>& values, const std::vector<double>& edges, double step);

// One-photon flow, kappa-free:     dy = J*(y4, -y3, y2, -y1).
struct OnePhotonRHS {
    std::array<double, 4> operator()(double J, const std::array<double, 4>& y) const {
        return {J * y[3], -J * y[2], J * y[1], -J * y[0]};
    }
};

// Two-photon flow, kappa-free. The (x1,x2) and (x5,x6) rows use the same
// expression trees with u1<->u2 and the shared terms written symmetrically,
// which makes the mode-swap symmetry exact in floating point.
struct TwoPhotonRHS {
    double u1 = 0.0, u2 = 0.0;
    std::array<double, 6> operator()(double J, const std::array<double, 6>& x) const {
        const double r = std::sqrt(2.0) * J;
        return {2.0 * u1 * x[1] + r * x[3],
                -2.0 * u1 * x[0] - r * x[2],
                r * (x[1] + x[5]),
                -r * (x[0] + x[4]),
                2.0 * u2 * x[5] + r * x[3],
                -2.0 * u2 * x[4] - r * x[2]};
    }
};

// Variants carrying the loss diagonal explicitly; used only to verify that the
// factored evolution (kappa-free flow times analytic envelope) is equivalent.
struct DampedOnePhotonRHS {
    OnePhotonRHS base;
    std::array<double, 4> operator()(double J, const std::array<double, 4>& y) const {
        auto d = base(J, y);
        for (int i = 0; i < 4; ++i) d[i] -= 0.5 * y[i];
        return d;
    }
};
struct DampedTwoPhotonRHS {
    TwoPhotonRHS base;
    std::array<double, 6> operator()(double J, const std::array<double, 6>& x) const {
        auto d = base(J, x);
        for (int i = 0; i < 6; ++i) d[i] -= x[i];
        return d;
    }
};

// Classical RK4 over the prepared grid. obs(i, tau_i, state) fires at every node.
template <std::size_t N, class RHS, class Obs>
std::array<double, N> rk4_run(std::array<double, N> s, const Grid& g, const RHS& rhs, Obs&& obs) {
    obs(std::size_t{0}, g.node[0], s);
    const std::size_t n = g.steps();
    for (std::size_t i = 0; i < n; ++i) {
        const double h = g.node[i + 1] - g.node[i];
        const auto k1 = rhs(g.jb[i], s);
        std::array<double, N> t;
        for (std::size_t c = 0; c < N; ++c) t[c] = s[c] + 0.5 * h * k1[c];
        const auto k2 = rhs(g.jm[i], t);
        for (std::size_t c = 0; c < N; ++c) t[c] = s[c] + 0.5 * h * k2[c];
        const auto k3 = rhs(g.jm[i], t);
        for (std::size_t c = 0; c < N; ++c) t[c] = s[c] + h * k3[c];
        const auto k4 = rhs(g.je[i], t);
        for (std::size_t c = 0; c < N; ++c)
            s[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        obs(i + 1, g.node[i + 1], s);
    }
    return s;
}

inline constexpr auto noop_obs = [](std::size_t, double, const auto&) {};

// Norm drift gate: both kappa-free flows are norm-preserving, so drift beyond
// tolerance means the step cannot resolve the dynamics.
void check_norm_drift(double norm_sq, double tau_end);

std::vector<OnePhotonVector> trajectory_one(const OnePhotonVector& v0, const Grid& g);
std::vector<TwoPhotonVector> trajectory_two(const TwoPhotonVector& v0, double u1, double u2, const Grid& g);
OnePhotonVector final_one(const OnePhotonVector& v0, const Grid& g);
TwoPhotonVector final_two(const TwoPhotonVector& v0, double u1, double u2, const Grid& g);

// Joint trajectory of both manifolds with analytic decay envelopes.
struct ManifoldTrajectory {
    std::vector<double> tau;
    std::vector<double> jnode;             // coupling at each node (step-begin samples)
    std::vector<OnePhotonVector> one;
    std::vector<TwoPhotonVector> two;
    std::vector<double> env1, env2;        // e^{-tau/2}, e^{-tau}
    InitialState init;
};

ManifoldTrajectory simulate_manifold(const InitialBundle& b, const Grid& g, double u1, double u2);

struct Observables {
    double tau = 0.0;
    double J = 0.0;
    double c10_abs2 = 0.0;
    double c11_abs2 = 0.0;
    double c20_abs2 = 0.0;
    double n1 = 0.0;
    double g2 = 0.0;   // NaN when n1 < 1e-30
};

double n1_of(double c10_abs2, double c11_abs2, double c20_abs2);
double g2_of(double c20_abs2, double n1);
Observables observables_at(const ManifoldTrajectory& t, std::size_t i);

// Conditional state right after a detection at time t, before any delay.
struct EmissionSnapshot {
    double c10_abs2 = 0.0, c11_abs2 = 0.0, c20_abs2 = 0.0, n1 = 0.0;
};
EmissionSnapshot snapshot_at(const ManifoldTrajectory& t, std::size_t i);

// Closed forms valid when the coupling is zero over the delay window.
double n1_decayed(const EmissionSnapshot& s, double delay);
double g2_two_time(const EmissionSnapshot& s, double delay);

// Closed form evaluated from the initial data: simulates up to the emission
// time, then applies the analytic decay expressions. Refuses windows where the
// coupling is still active (the closed form assumes free decay).
double g2_two_time_closed(const InitialBundle& b, const SystemParams& sys,
                          const HarmonicCoupling& c, double t, double delay, double step);

// General two-time correlation propagating the post-detection one-quantum
// amplitudes under the (possibly active) coupling. Coincides with the closed
// form whenever J = 0 on [t, t+delay].
double g2_two_time_general(const InitialBundle& b, const SystemParams& sys,
                           const HarmonicCoupling& c, double t, double delay, double step);

}  // namespace blockade
