#include "blockade/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blockade {

InitialBundle make_initial(double alpha1, double alpha2) {
    if (!std::isfinite(alpha1) || !std::isfinite(alpha2))
        throw ValidationError("coherent amplitudes must be finite");
    const double a2 = alpha1 * alpha1 + alpha2 * alpha2;
    if (a2 > 0.1) throw ExcitationTooStrong(a2);
    if (a2 == 0.0) throw BothAmplitudesZero();

    InitialBundle b;
    b.state.alpha1 = alpha1;
    b.state.alpha2 = alpha2;
    b.state.alpha_sq = a2;
    b.state.z0 = (alpha1 * alpha1 - alpha2 * alpha2) / a2;
    const double alpha = std::sqrt(a2);
    b.state.c00 = std::exp(-0.5 * a2);
    b.state.A1 = b.state.c00 * alpha;
    b.state.A2 = b.state.c00 * a2 / std::sqrt(2.0);
    b.state.strong_excitation_warning = a2 > 0.02;

    b.one = {alpha1 / alpha, 0.0, alpha2 / alpha, 0.0};
    const double z0 = b.state.z0;
    // Written so that z0 -> -z0 swaps the entries bitwise.
    b.two = {(1.0 + z0) / 2.0, 0.0,
             std::sqrt((1.0 - z0 * z0) / 2.0), 0.0,
             (1.0 - z0) / 2.0, 0.0};
    return b;
}

double alpha2_from_imbalance(double alpha1, double z0) {
    if (!(z0 >= -1.0 && z0 <= 1.0)) throw ValidationError("z0 must lie in [-1, 1]");
    if (!(alpha1 > 0.0)) throw ValidationError("alpha1 must be positive when z0 is given");
    if (z0 == -1.0) throw ValidationError("z0 = -1 with alpha1 > 0 is inconsistent");
    return alpha1 * std::sqrt((1.0 - z0) / (1.0 + z0));
}

std::size_t Grid::node_index(double tau) const {
    std::size_t lo = 0, hi = node.size();
    while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (node[mid] <= tau) lo = mid; else hi = mid;
    }
    const double tol = std::max(1e-9, 1e-6 * nominal_step);
    for (std::size_t cand : {lo, lo + 1})
        if (cand < node.size() && std::fabs(node[cand] - tau) <= tol) return cand;
    throw ValidationError("no grid node at the requested time");
}

Grid build_grid(const std::vector<double>& breakpoints, double step,
                const std::function<double(double, int)>& sampler) {
    if (!(step > 0.0)) throw ValidationError("step must be positive");
    if (breakpoints.size() < 2 || breakpoints.front() != 0.0)
        throw ValidationError("breakpoints must start at 0 and contain the end time");
    Grid g;
    g.nominal_step = step;
    g.node.push_back(0.0);
    for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
        const double b0 = breakpoints[s], b1 = breakpoints[s + 1];
        if (!(b1 > b0)) throw ValidationError("breakpoints must be strictly increasing");
        const double len = b1 - b0;
        const long n = std::max(1L, static_cast<long>(std::ceil(len / step - 1e-12)));
        const double h = len / n;
        const int seg = static_cast<int>(s);
        for (long i = 0; i < n; ++i) {
            const double t0 = b0 + i * h;
            const double t1 = (i + 1 == n) ? b1 : b0 + (i + 1) * h;
            g.jb.push_back(sampler(t0, seg));
            g.jm.push_back(sampler(t0 + 0.5 * h, seg));
            g.je.push_back(sampler(t1, seg));
            g.node.push_back(t1);
        }
    }
    return g;
}

namespace {

// Per-segment view of a harmonic record shifted by `shift`: segments lying
// left of the horizon sample the smooth series (left limit at the horizon),
// segments beyond it are exactly zero.
std::function<double(double, int)> horizon_sampler(const HarmonicCoupling& c, double shift,
                                                   const std::vector<double>& bp) {
    std::vector<char> active(bp.size() - 1);
    for (std::size_t s = 0; s + 1 < bp.size(); ++s)
        active[s] = (0.5 * (bp[s] + bp[s + 1]) + shift) < c.tau_T ? 1 : 0;
    return [&c, shift, active](double tau, int seg) {
        return active[static_cast<std::size_t>(seg)] ? c.value_series(tau + shift) : 0.0;
    };
}

}  // namespace

Grid grid_from_waveform(const HarmonicCoupling& c, double tau_end, double step) {
    c.validate();
    if (!(tau_end > 0.0)) throw ValidationError("tau_end must be positive");
    std::vector<double> bp{0.0};
    if (c.tau_T < tau_end) bp.push_back(c.tau_T);
    bp.push_back(tau_end);
    return build_grid(bp, step, horizon_sampler(c, 0.0, bp));
}

Grid grid_from_constant(double j, double tau_end, double step) {
    return build_grid({0.0, tau_end}, step, [j](double, int) { return j; });
}

Grid grid_from_staircase(const std::vector<double>& values, const std::vector<double>& edges, double step) {
    if (values.empty() || edges.size() != values.size() + 1) throw SegmentGap();
    return build_grid(edges, step, [&](double, int seg) { return values[static_cast<std::size_t>(seg)]; });
}

void check_norm_drift(double norm_sq, double tau_end) {
    const double drift = std::fabs(norm_sq - 1.0);
    if (drift > 1e-8 * std::max(1.0, tau_end)) throw StepTooLarge(drift);
}

std::vector<OnePhotonVector> trajectory_one(const OnePhotonVector& v0, const Grid& g) {
    std::vector<OnePhotonVector> out(g.node.size());
    auto fin = rk4_run<4>(v0, g, OnePhotonRHS{},
                          [&](std::size_t i, double, const OnePhotonVector& s) { out[i] = s; });
    check_norm_drift(fin[0] * fin[0] + fin[1] * fin[1] + fin[2] * fin[2] + fin[3] * fin[3],
                     g.node.back());
    return out;
}

std::vector<TwoPhotonVector> trajectory_two(const TwoPhotonVector& v0, double u1, double u2, const Grid& g) {
    std::vector<TwoPhotonVector> out(g.node.size());
    auto fin = rk4_run<6>(v0, g, TwoPhotonRHS{u1, u2},
                          [&](std::size_t i, double, const TwoPhotonVector& s) { out[i] = s; });
    double n = 0.0;
    for (double c : fin) n += c * c;
    check_norm_drift(n, g.node.back());
    return out;
}

OnePhotonVector final_one(const OnePhotonVector& v0, const Grid& g) {
    auto fin = rk4_run<4>(v0, g, OnePhotonRHS{}, noop_obs);
    check_norm_drift(fin[0] * fin[0] + fin[1] * fin[1] + fin[2] * fin[2] + fin[3] * fin[3],
                     g.node.back());
    return fin;
}

TwoPhotonVector final_two(const TwoPhotonVector& v0, double u1, double u2, const Grid& g) {
    auto fin = rk4_run<6>(v0, g, TwoPhotonRHS{u1, u2}, noop_obs);
    double n = 0.0;
    for (double c : fin) n += c * c;
    check_norm_drift(n, g.node.back());
    return fin;
}

ManifoldTrajectory simulate_manifold(const InitialBundle& b, const Grid& g, double u1, double u2) {
    ManifoldTrajectory t;
    t.init = b.state;
    t.tau = g.node;
    t.one = trajectory_one(b.one, g);
    t.two = trajectory_two(b.two, u1, u2, g);
    t.jnode.resize(g.node.size());
    for (std::size_t i = 0; i < g.steps(); ++i) t.jnode[i] = g.jb[i];
    t.jnode.back() = g.steps() ? g.je.back() : 0.0;
    t.env1.resize(t.tau.size());
    t.env2.resize(t.tau.size());
    for (std::size_t i = 0; i < t.tau.size(); ++i) {
        t.env1[i] = std::exp(-0.5 * t.tau[i]);
        t.env2[i] = std::exp(-t.tau[i]);
    }
    return t;
}

double n1_of(double c10_abs2, double c11_abs2, double c20_abs2) {
    return c10_abs2 + (c11_abs2 + 2.0 * c20_abs2);
}

double g2_of(double c20_abs2, double n1) {
    if (n1 < 1e-30) return std::numeric_limits<double>::quiet_NaN();
    return 2.0 * c20_abs2 / (n1 * n1);
}

Observables observables_at(const ManifoldTrajectory& t, std::size_t i) {
    Observables o;
    o.tau = t.tau[i];
    o.J = t.jnode[i];
    const auto& y = t.one[i];
    const auto& x = t.two[i];
    const double e1 = t.env1[i], e2 = t.env2[i];
    const double A1 = t.init.A1, A2 = t.init.A2;
    o.c10_abs2 = A1 * A1 * e1 * e1 * (y[0] * y[0] + y[1] * y[1]);
    o.c20_abs2 = A2 * A2 * e2 * e2 * (x[0] * x[0] + x[1] * x[1]);
    o.c11_abs2 = A2 * A2 * e2 * e2 * (x[2] * x[2] + x[3] * x[3]);
    o.n1 = n1_of(o.c10_abs2, o.c11_abs2, o.c20_abs2);
    o.g2 = g2_of(o.c20_abs2, o.n1);
    return o;
}

EmissionSnapshot snapshot_at(const ManifoldTrajectory& t, std::size_t i) {
    const auto o = observables_at(t, i);
    return {o.c10_abs2, o.c11_abs2, o.c20_abs2, o.n1};
}

double n1_decayed(const EmissionSnapshot& s, double delay) {
    const double e = std::exp(-delay);
    return e * (s.c10_abs2 + e * (s.c11_abs2 + 2.0 * s.c20_abs2));
}

double g2_two_time(const EmissionSnapshot& s, double delay) {
    const double n1_later = n1_decayed(s, delay);
    if (s.n1 < 1e-30 || n1_later < 1e-30)
        return std::numeric_limits<double>::quiet_NaN();
    return 2.0 * s.c20_abs2 / (s.n1 * n1_later * std::exp(delay));
}

double g2_two_time_closed(const InitialBundle& b, const SystemParams& sys,
                          const HarmonicCoupling& c, double t, double delay, double step) {
    c.validate();
    if (!(t >= 0.0) || !(delay >= 0.0)) throw ValidationError("times must be nonnegative");
    if (delay > 0.0 && t < c.tau_T) {
        bool any_nonzero = false;
        for (double q : c.a)
            if (q != 0.0) { any_nonzero = true; break; }
        if (any_nonzero) throw CouplingActive();
    }
    EmissionSnapshot snap;
    if (t == 0.0) {
        const double A1 = b.state.A1, A2 = b.state.A2;
        snap.c10_abs2 = A1 * A1 * (b.one[0] * b.one[0] + b.one[1] * b.one[1]);
        snap.c20_abs2 = A2 * A2 * (b.two[0] * b.two[0] + b.two[1] * b.two[1]);
        snap.c11_abs2 = A2 * A2 * (b.two[2] * b.two[2] + b.two[3] * b.two[3]);
        snap.n1 = n1_of(snap.c10_abs2, snap.c11_abs2, snap.c20_abs2);
    } else {
        const Grid g = grid_from_waveform(c, t, step);
        const auto traj = simulate_manifold(b, g, sys.u1, sys.u2);
        snap = snapshot_at(traj, traj.tau.size() - 1);
    }
    return g2_two_time(snap, delay);
}

double g2_two_time_general(const InitialBundle& b, const SystemParams& sys,
                           const HarmonicCoupling& c, double t, double delay, double step) {
    c.validate();
    if (!(t >= 0.0) || !(delay >= 0.0)) throw ValidationError("times must be nonnegative");
    const double tend = t + delay;

    EmissionSnapshot snap;
    double x1 = 0.0, x2 = 0.0, x3 = 0.0, x4 = 0.0, scale = 0.0;
    double n1_end = 0.0;
    if (tend == 0.0) {
        const auto& x = b.two;
        const double A1 = b.state.A1, A2 = b.state.A2;
        snap.c10_abs2 = A1 * A1 * (b.one[0] * b.one[0] + b.one[1] * b.one[1]);
        snap.c20_abs2 = A2 * A2 * (x[0] * x[0] + x[1] * x[1]);
        snap.c11_abs2 = A2 * A2 * (x[2] * x[2] + x[3] * x[3]);
        snap.n1 = n1_of(snap.c10_abs2, snap.c11_abs2, snap.c20_abs2);
        x1 = x[0]; x2 = x[1]; x3 = x[2]; x4 = x[3];
        scale = A2;
        n1_end = snap.n1;
    } else {
        std::vector<double> bp{0.0};
        if (t > 0.0 && t < tend) bp.push_back(t);
        if (c.tau_T > 0.0 && c.tau_T < tend) bp.push_back(c.tau_T);
        bp.push_back(tend);
        std::sort(bp.begin(), bp.end());
        bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
        const Grid g = build_grid(bp, step, horizon_sampler(c, 0.0, bp));
        const auto traj = simulate_manifold(b, g, sys.u1, sys.u2);
        const std::size_t it = g.node_index(t);
        snap = snapshot_at(traj, it);
        const auto& x = traj.two[it];
        x1 = x[0]; x2 = x[1]; x3 = x[2]; x4 = x[3];
        scale = b.state.A2 * traj.env2[it];
        n1_end = observables_at(traj, traj.tau.size() - 1).n1;
    }
    if (snap.n1 < 1e-30 || n1_end < 1e-30)
        return std::numeric_limits<double>::quiet_NaN();

    // Post-detection one-quantum amplitudes; their flow is the one-photon
    // system, independent of the nonlinearities.
    const double r2 = std::sqrt(2.0);
    const double inv = scale / std::sqrt(snap.n1);
    OnePhotonVector w0 = {r2 * inv * x1, r2 * inv * x2, inv * x3, inv * x4};
    const double m2 = w0[0] * w0[0] + w0[1] * w0[1] + w0[2] * w0[2] + w0[3] * w0[3];
    if (m2 <= 0.0) return 0.0;
    const double m = std::sqrt(m2);
    OnePhotonVector w = {w0[0] / m, w0[1] / m, w0[2] / m, w0[3] / m};
    if (delay > 0.0) {
        std::vector<double> bp2{0.0};
        if (t < c.tau_T && c.tau_T < tend) bp2.push_back(c.tau_T - t);
        bp2.push_back(delay);
        const Grid gd = build_grid(bp2, step, horizon_sampler(c, t, bp2));
        w = final_one(w, gd);
    }
    const double b10_abs2 = std::exp(-delay) * m2 * (w[0] * w[0] + w[1] * w[1]);
    return b10_abs2 / n1_end;
}

}  // namespace blockade
