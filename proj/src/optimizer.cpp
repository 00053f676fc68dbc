#include "blockade/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace blockade {

namespace {

constexpr double kPi = 3.14159265358979323846;

// splitmix64; each restart owns a private stream derived from (seed, stream).
struct Rng {
    std::uint64_t s;
    Rng(std::uint64_t seed, std::uint64_t stream)
        : s(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 0x632BE59BD9B4E019ULL))) {
        next();
        next();
    }
    std::uint64_t next() {
        s += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

// Trig basis tabulated on the integration grid (nodes + midpoints) and on the
// penalty grid, so one objective evaluation costs a dot product per sample
// instead of 2p transcendental calls.
struct Workspace {
    int p = 0;
    double tau_T = 0.0;
    double jmax = 0.0;
    double floor = 0.0;
    double weight = 0.0;
    TwoPhotonVector x0{};
    double u1 = 0.0, u2 = 0.0;

    Grid grid;                       // jb/jm/je refilled per coefficient vector
    std::vector<double> samp_tau;    // 2n+1 sample times
    std::vector<double> samp_basis;  // (2n+1) rows of 2p entries
    std::vector<double> pen_tau;     // penalty grid
    std::vector<double> pen_basis;
    double pen_h = 0.0;

    static void fill_basis_row(int p, double tau, double* row) {
        for (int k = 1; k <= p; ++k) {
            const double kt = k * tau;
            row[2 * (k - 1)] = std::sin(kt) / k;
            row[2 * (k - 1) + 1] = (1.0 - std::cos(kt)) / k;
        }
    }

    Workspace(const OptimizationProblem& prob, const InitialBundle& bundle) {
        p = prob.p;
        tau_T = prob.tau_T;
        jmax = prob.params.jmax;
        floor = prob.objective_floor;
        weight = prob.resolved_penalty_weight();
        x0 = bundle.two;
        u1 = prob.params.u1;
        u2 = prob.params.u2;

        grid = grid_from_constant(0.0, tau_T, prob.step);
        const std::size_t n = grid.steps();
        samp_tau.resize(2 * n + 1);
        for (std::size_t i = 0; i < n; ++i) {
            samp_tau[2 * i] = grid.node[i];
            samp_tau[2 * i + 1] = 0.5 * (grid.node[i] + grid.node[i + 1]);
        }
        samp_tau[2 * n] = grid.node[n];
        samp_basis.resize(samp_tau.size() * 2 * p);
        for (std::size_t s = 0; s < samp_tau.size(); ++s)
            fill_basis_row(p, samp_tau[s], &samp_basis[s * 2 * p]);

        pen_tau.resize(static_cast<std::size_t>(prob.penalty_grid));
        pen_h = tau_T / (prob.penalty_grid - 1);
        for (int i = 0; i < prob.penalty_grid; ++i) pen_tau[static_cast<std::size_t>(i)] = i * pen_h;
        pen_basis.resize(pen_tau.size() * 2 * p);
        for (std::size_t s = 0; s < pen_tau.size(); ++s)
            fill_basis_row(p, pen_tau[s], &pen_basis[s * 2 * p]);
    }

    double j_at(const std::vector<double>& afull, double tau, const double* row) const {
        double v = afull[0] * tau;
        const int m = 2 * p;
        for (int c = 0; c < m; ++c) v += afull[static_cast<std::size_t>(c + 1)] * row[c];
        return v;
    }

    void fill_grid(const std::vector<double>& afull) {
        const std::size_t n = grid.steps();
        for (std::size_t i = 0; i < n; ++i) {
            grid.jb[i] = j_at(afull, samp_tau[2 * i], &samp_basis[(2 * i) * 2 * p]);
            grid.jm[i] = j_at(afull, samp_tau[2 * i + 1], &samp_basis[(2 * i + 1) * 2 * p]);
            grid.je[i] = j_at(afull, samp_tau[2 * i + 2], &samp_basis[(2 * i + 2) * 2 * p]);
        }
    }

    double penalty(const std::vector<double>& afull) const {
        double acc = 0.0;
        for (std::size_t s = 0; s < pen_tau.size(); ++s) {
            const double j = j_at(afull, pen_tau[s], &pen_basis[s * 2 * p]);
            const double under = j < 0.0 ? -j : 0.0;
            const double over = j > jmax ? j - jmax : 0.0;
            acc += under * under + over * over;
        }
        return acc * pen_h;
    }

    std::vector<double> full_coeffs(const std::vector<double>& tail) const {
        std::vector<double> afull(tail.size() + 1);
        afull[0] = eliminate_a0(tail, tau_T);
        std::copy(tail.begin(), tail.end(), afull.begin() + 1);
        return afull;
    }

    struct Eval {
        double score = 0.0;   // max(fid, floor) + weight * penalty
        double fid = 0.0;
        double pen = 0.0;
    };

    Eval eval(const std::vector<double>& tail) {
        const auto afull = full_coeffs(tail);
        fill_grid(afull);
        Eval e;
        try {
            const auto xf = final_two(x0, u1, u2, grid);
            e.fid = xf[0] * xf[0] + xf[1] * xf[1];
        } catch (const StepTooLarge&) {
            // Transient simplex excursions can reach couplings the fixed step
            // cannot integrate; such points are simply infeasible to the search.
            e.fid = 1e30;
        }
        e.pen = penalty(afull);
        e.score = std::max(e.fid, floor) + weight * e.pen;
        return e;
    }
};

struct RestartResult {
    std::vector<double> tail;
    Workspace::Eval best;
    std::vector<double> anchor_tail;  // best point seen with fid >= floor
    bool has_anchor = false;
    long evals = 0;
};

// Standard simplex descent; stops at the objective floor, on simplex
// collapse, or at the evaluation budget.
RestartResult nelder_mead(Workspace& w, const std::vector<double>& start,
                          double init_delta, int max_evals) {
    const std::size_t n = start.size();
    RestartResult rr;
    rr.tail = start;
    rr.best.score = std::numeric_limits<double>::infinity();

    auto record = [&](const std::vector<double>& x, const Workspace::Eval& e) {
        if (e.score < rr.best.score ||
            (e.score == rr.best.score && e.pen < rr.best.pen)) {
            if (e.fid >= w.floor && e.fid < 1e29) {
                rr.anchor_tail = x;
                rr.has_anchor = true;
            }
            rr.best = e;
            rr.tail = x;
        }
    };
    auto fev = [&](const std::vector<double>& x) {
        auto e = w.eval(x);
        ++rr.evals;
        record(x, e);
        return e;
    };

    std::vector<std::vector<double>> pts(n + 1, start);
    std::vector<Workspace::Eval> f(n + 1);
    f[0] = fev(pts[0]);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i + 1][i] += init_delta;
        f[i + 1] = fev(pts[i + 1]);
    }

    std::vector<std::size_t> ord(n + 1);
    while (rr.evals < max_evals) {
        std::iota(ord.begin(), ord.end(), std::size_t{0});
        std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
            if (f[a].score != f[b].score) return f[a].score < f[b].score;
            return a < b;
        });
        const std::size_t ib = ord[0], iw = ord[n], is = ord[n - 1];
        if (f[ib].score <= w.floor) break;                       // cannot improve further
        const double spread = f[iw].score - f[ib].score;
        if (spread <= std::max(1e-14, 1e-11 * std::fabs(f[ib].score))) break;

        std::vector<double> cen(n, 0.0);
        for (std::size_t k = 0; k <= n; ++k) {
            if (k == iw) continue;
            for (std::size_t c = 0; c < n; ++c) cen[c] += pts[k][c];
        }
        for (std::size_t c = 0; c < n; ++c) cen[c] /= static_cast<double>(n);

        std::vector<double> xr(n);
        for (std::size_t c = 0; c < n; ++c) xr[c] = cen[c] + (cen[c] - pts[iw][c]);
        const auto fr = fev(xr);
        if (fr.score < f[ib].score) {
            std::vector<double> xe(n);
            for (std::size_t c = 0; c < n; ++c) xe[c] = cen[c] + 2.0 * (cen[c] - pts[iw][c]);
            const auto fe = fev(xe);
            if (fe.score < fr.score) { pts[iw] = xe; f[iw] = fe; }
            else { pts[iw] = xr; f[iw] = fr; }
        } else if (fr.score < f[is].score) {
            pts[iw] = xr; f[iw] = fr;
        } else {
            const bool outside = fr.score < f[iw].score;
            std::vector<double> xc(n);
            if (outside)
                for (std::size_t c = 0; c < n; ++c) xc[c] = cen[c] + 0.5 * (xr[c] - cen[c]);
            else
                for (std::size_t c = 0; c < n; ++c) xc[c] = cen[c] + 0.5 * (pts[iw][c] - cen[c]);
            const auto fc = fev(xc);
            if (fc.score < std::min(fr.score, f[iw].score)) {
                pts[iw] = xc; f[iw] = fc;
            } else {
                for (std::size_t k = 0; k <= n; ++k) {
                    if (k == ib) continue;
                    for (std::size_t c = 0; c < n; ++c)
                        pts[k][c] = pts[ib][c] + 0.5 * (pts[k][c] - pts[ib][c]);
                    f[k] = fev(pts[k]);
                    if (rr.evals >= max_evals) break;
                }
            }
        }
        if (rr.best.score <= w.floor) break;
    }
    return rr;
}

// If the stopping step overshot far below the floor, walk back toward the
// anchor until the fidelity is numerically resolvable again.
void stabilize(Workspace& w, RestartResult& rr) {
    if (rr.best.fid >= w.floor / 100.0 || !rr.has_anchor) return;
    double lo = 0.0, hi = 1.0;  // 0 = anchor (fid >= floor), 1 = overshoot point
    std::vector<double> x(rr.tail.size());
    for (int it = 0; it < 60; ++it) {
        const double t = 0.5 * (lo + hi);
        for (std::size_t c = 0; c < x.size(); ++c)
            x[c] = rr.anchor_tail[c] + t * (rr.tail[c] - rr.anchor_tail[c]);
        const auto e = w.eval(x);
        ++rr.evals;
        if (e.fid < w.floor / 100.0) {
            hi = t;
        } else if (e.fid > w.floor) {
            lo = t;
        } else {
            rr.tail = x;
            rr.best = e;
            return;
        }
    }
    // Band not hit: fall back to the anchor-side endpoint, which is resolvable.
    for (std::size_t c = 0; c < x.size(); ++c)
        x[c] = rr.anchor_tail[c] + lo * (rr.tail[c] - rr.anchor_tail[c]);
    rr.best = w.eval(x);
    ++rr.evals;
    rr.tail = x;
}

HarmonicCoupling record_from_tail(const std::vector<double>& tail, double tau_T, double jmax) {
    HarmonicCoupling c;
    c.p = static_cast<int>(tail.size() / 2);
    c.tau_T = tau_T;
    c.jmax = jmax;
    c.a.resize(tail.size() + 1);
    c.a[0] = eliminate_a0(tail, tau_T);
    std::copy(tail.begin(), tail.end(), c.a.begin() + 1);
    return c;
}

double g2_at_horizon(const InitialBundle& bundle, const HarmonicCoupling& c,
                     const SystemParams& sys, double step) {
    const Grid g = grid_from_waveform(c, c.tau_T, step);
    const auto traj = simulate_manifold(bundle, g, sys.u1, sys.u2);
    return observables_at(traj, traj.tau.size() - 1).g2;
}

}  // namespace

void OptimizationProblem::validate() const {
    params.validate();
    if (!(tau_T > 0.0)) throw ValidationError("tau_T must be positive");
    if (p < 1) throw ValidationError("harmonic count p must be >= 1");
    if (restarts < 1) throw ValidationError("restarts must be >= 1");
    if (!(step > 0.0)) throw ValidationError("step must be positive");
    if (!(alpha1 > 0.0)) throw ValidationError("alpha1 must be positive");
    if (!(z0 > -1.0 && z0 <= 1.0)) throw ValidationError("z0 must lie in (-1, 1]");
    if (penalty_grid < 100) throw ValidationError("penalty grid needs at least 100 points");
    if (!(objective_floor > 0.0)) throw ValidationError("objective floor must be positive");
    if (max_evals_per_restart < 10) throw ValidationError("evaluation budget too small");
}

double OptimizationProblem::resolved_penalty_weight() const {
    if (penalty_weight > 0.0) return penalty_weight;
    const double scale = std::max(1.0, params.jmax);
    return 1e3 / (scale * scale);
}

double objective(const HarmonicCoupling& c, const OptimizationProblem& prob) {
    prob.validate();
    c.validate();
    if (std::fabs(c.tau_T - prob.tau_T) > 1e-12)
        throw ValidationError("waveform horizon does not match the problem");
    const auto bundle = make_initial(prob.alpha1, alpha2_from_imbalance(prob.alpha1, prob.z0));
    const Grid g = grid_from_waveform(c, prob.tau_T, prob.step);
    const auto xf = final_two(bundle.two, prob.params.u1, prob.params.u2, g);
    const double fid = xf[0] * xf[0] + xf[1] * xf[1];
    return fid + prob.resolved_penalty_weight() * box_violation(c, prob.penalty_grid);
}

OptimizationReport optimize(const OptimizationProblem& prob,
                            const std::vector<std::vector<double>>& extra_starts) {
    prob.validate();
    for (const auto& t : extra_starts)
        if (t.size() != static_cast<std::size_t>(2 * prob.p))
            throw ValidationError("extra start has wrong coefficient count");

    const auto bundle = make_initial(prob.alpha1, alpha2_from_imbalance(prob.alpha1, prob.z0));
    OptimizationReport rep;
    rep.penalty_weight_final = prob.resolved_penalty_weight();
    rep.status = "ok";

    const std::vector<double> zero_tail(static_cast<std::size_t>(2 * prob.p), 0.0);
    if (prob.params.jmax == 0.0) {
        rep.best = record_from_tail(zero_tail, prob.tau_T, 0.0);
    } else {
        Workspace w(prob, bundle);
        const double zero_score = std::max(w.eval(zero_tail).fid, w.floor);
        const double s = prob.params.jmax / prob.tau_T;
        const int total = prob.restarts + static_cast<int>(extra_starts.size());

        std::vector<RestartResult> results;
        std::vector<std::vector<double>> endpoints;
        int winner = -1;
        for (int attempt = 0; attempt < 10; ++attempt) {
            if (attempt > 0) w.weight *= 8.0;
            std::vector<RestartResult> cur;
            for (int r = 0; r < total; ++r) {
                std::vector<double> start;
                int budget = prob.max_evals_per_restart;
                if (attempt == 0) {
                    if (r < prob.restarts) {
                        Rng rng(prob.seed, static_cast<std::uint64_t>(r));
                        start.resize(static_cast<std::size_t>(2 * prob.p));
                        for (auto& v : start) v = rng.uniform(-s, s);
                    } else {
                        start = extra_starts[static_cast<std::size_t>(r - prob.restarts)];
                    }
                } else {
                    start = endpoints[static_cast<std::size_t>(r)];
                    budget = std::max(200, prob.max_evals_per_restart / 4);
                }
                // Escalation attempts polish an already converged endpoint, so
                // the simplex must stay small or the point would be thrown away.
                const double delta = attempt == 0 ? 0.25 * s : 0.01 * s;
                auto rr = nelder_mead(w, start, delta, budget);
                stabilize(w, rr);
                cur.push_back(std::move(rr));
            }
            for (long i = 0; i < static_cast<long>(cur.size()); ++i)
                rep.evaluations += cur[static_cast<std::size_t>(i)].evals;

            winner = 0;
            for (int r = 1; r < total; ++r) {
                const auto& a = cur[static_cast<std::size_t>(r)].best;
                const auto& b = cur[static_cast<std::size_t>(winner)].best;
                if (a.score < b.score || (a.score == b.score && a.pen < b.pen)) winner = r;
            }
            const auto cand = record_from_tail(cur[static_cast<std::size_t>(winner)].tail,
                                               prob.tau_T, prob.params.jmax);
            const auto audit = fine_audit(cand, prob.audit_grid);
            if (std::getenv("BLOCKADE_TRACE_ESCALATION"))
                std::fprintf(stderr,
                             "attempt=%d w=%g winner=%d score=%.3e fid=%.3e pen=%.3e under=%.3e "
                             "over=%.3e jT=%.3e\n",
                             attempt, w.weight, winner, cur[(std::size_t)winner].best.score,
                             cur[(std::size_t)winner].best.fid, cur[(std::size_t)winner].best.pen,
                             audit.max_under, audit.max_over, audit.jT_abs);
            const double box_tol = 1e-5 * std::max(1.0, prob.params.jmax);
            const double jT_tol = 1e-6 * std::max(1.0, prob.params.jmax);
            if (audit.max_under <= box_tol && audit.max_over <= box_tol && audit.jT_abs <= jT_tol) {
                results = std::move(cur);
                break;
            }
            endpoints.clear();
            for (const auto& rrr : cur) endpoints.push_back(rrr.tail);
            if (attempt == 9)
                throw AuditFailed("box feasibility audit failed after penalty escalation");
        }
        rep.penalty_weight_final = w.weight;

        const auto& win = results[static_cast<std::size_t>(winner)];
        if (win.best.score >= zero_score) {
            rep.status = "no_improvement";
            rep.best = record_from_tail(zero_tail, prob.tau_T, prob.params.jmax);
        } else {
            rep.best = record_from_tail(win.tail, prob.tau_T, prob.params.jmax);
        }
    }

    // Everything reported below is recomputed from scratch on the chosen record.
    const Grid g = grid_from_waveform(rep.best, prob.tau_T, prob.step);
    const auto xf = final_two(bundle.two, prob.params.u1, prob.params.u2, g);
    rep.objective = xf[0] * xf[0] + xf[1] * xf[1];
    const auto audit = fine_audit(rep.best, prob.audit_grid);
    rep.box_residual = audit.integrated_sq;
    rep.jT_residual = audit.jT_abs;

    const double g2_full = g2_at_horizon(bundle, rep.best, prob.params, prob.step);
    const double g2_half = g2_at_horizon(bundle, rep.best, prob.params, 0.5 * prob.step);
    if (std::fabs(g2_full - g2_half) > 1e-6 * std::fabs(g2_half))
        throw NumericalError("g2 at the horizon is not stable under step halving");
    rep.g2_at_T = g2_half;

    const auto traj = simulate_manifold(bundle, g, prob.params.u1, prob.params.u2);
    const std::size_t stride = std::max<std::size_t>(1, traj.tau.size() / 2000);
    for (std::size_t i = 0; i < traj.tau.size(); i += stride) {
        const auto o = observables_at(traj, i);
        rep.g2_trace_tau.push_back(o.tau);
        rep.g2_trace.push_back(o.g2);
    }

    try {
        const auto base = baseline_constant(prob);
        rep.baseline_g2_min = base.g2_min;
        rep.baseline_tau_min = base.tau_min;
    } catch (const NoMinimumFound&) {
        rep.baseline_g2_min = std::numeric_limits<double>::quiet_NaN();
        rep.baseline_tau_min = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

namespace {

double g2_constant_at(const InitialBundle& bundle, const SystemParams& sys,
                      double tau, double step) {
    const Grid g = grid_from_constant(sys.jmax, tau, step);
    const auto traj = simulate_manifold(bundle, g, sys.u1, sys.u2);
    return observables_at(traj, traj.tau.size() - 1).g2;
}

}  // namespace

BaselineResult baseline_constant(const OptimizationProblem& prob) {
    prob.validate();
    const auto bundle = make_initial(prob.alpha1, alpha2_from_imbalance(prob.alpha1, prob.z0));

    const double window_cap = 8.0 * 2.0 * kPi;
    double window = 2.0 * kPi;
    BaselineResult res;
    while (true) {
        const Grid g = grid_from_constant(prob.params.jmax, window, prob.step);
        const auto traj = simulate_manifold(bundle, g, prob.params.u1, prob.params.u2);
        const std::size_t stride =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1e-3 / prob.step)));
        std::vector<double> ts, gs;
        for (std::size_t i = 0; i < traj.tau.size(); i += stride) {
            const auto o = observables_at(traj, i);
            ts.push_back(o.tau);
            gs.push_back(o.g2);
        }
        res.trace_tau = ts;
        res.trace_g2 = gs;

        // Deepest sampled dip: the global minimum must sit strictly inside the
        // window, be a local minimum, and be flanked on both sides by samples
        // at least 10x its depth, so a slow trend or a shallow ripple riding
        // on a larger oscillation is never mistaken for the reference dip.
        long candidate = -1;
        std::size_t im = 0;
        for (std::size_t i = 1; i < gs.size(); ++i)
            if (gs[i] < gs[im]) im = i;
        if (im > 0 && im + 1 < gs.size() && gs[im] < gs[im - 1] && gs[im] <= gs[im + 1]) {
            bool left = false, right = false;
            for (std::size_t j = 0; j < im && !left; ++j) left = gs[j] >= 10.0 * gs[im];
            for (std::size_t j = im + 1; j < gs.size() && !right; ++j) right = gs[j] >= 10.0 * gs[im];
            if (left && right) candidate = static_cast<long>(im);
        }
        if (candidate < 0) {
            if (window < window_cap) { window *= 2.0; continue; }
            // Fall back to the deepest interior sample on the capped window.
            if (im == 0 || im + 1 >= gs.size()) throw NoMinimumFound();
            candidate = static_cast<long>(im);
        }

        // Golden-section refinement inside the bracketing samples.
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = ts[static_cast<std::size_t>(candidate) - 1];
        double hi = ts[static_cast<std::size_t>(candidate) + 1];
        double x1 = hi - gr * (hi - lo);
        double x2 = lo + gr * (hi - lo);
        double f1 = g2_constant_at(bundle, prob.params, x1, prob.step);
        double f2 = g2_constant_at(bundle, prob.params, x2, prob.step);
        while (hi - lo > 1e-5) {
            if (f1 <= f2) {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = g2_constant_at(bundle, prob.params, x1, prob.step);
            } else {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = g2_constant_at(bundle, prob.params, x2, prob.step);
            }
        }
        const double tau_star = f1 <= f2 ? x1 : x2;
        res.g2_min = f1 <= f2 ? f1 : f2;
        res.tau_min = std::round(tau_star * 1000.0) / 1000.0;
        return res;
    }
}

std::vector<SweepCell> sweep_duration_harmonics(const OptimizationProblem& base,
                                                const std::vector<double>& tau_T_list,
                                                const std::vector<int>& p_list,
                                                const std::optional<HarmonicCoupling>& reference) {
    if (tau_T_list.empty() || p_list.empty())
        throw ValidationError("sweep lists must be nonempty");
    std::vector<SweepCell> out;
    for (int p : p_list) {
        std::vector<double> warm;
        for (double tau : tau_T_list) {
            OptimizationProblem prob = base;
            prob.tau_T = tau;
            prob.p = p;
            SweepCell cell;
            cell.tau_T = tau;
            cell.p = p;
            try {
                std::vector<std::vector<double>> extra;
                if (!warm.empty()) extra.push_back(warm);
                if (reference && reference->p == p)
                    extra.emplace_back(reference->a.begin() + 1, reference->a.end());
                const auto rep = optimize(prob, extra);
                cell.status = rep.status;
                cell.objective = rep.objective;
                cell.g2_at_T = rep.g2_at_T;
                cell.box_residual = rep.box_residual;
                cell.jT_residual = rep.jT_residual;
                cell.evaluations = rep.evaluations;
                cell.best_tail.assign(rep.best.a.begin() + 1, rep.best.a.end());
                warm = cell.best_tail;
            } catch (const std::exception& e) {
                cell.status = std::string("error: ") + e.what();
            }
            out.push_back(std::move(cell));
        }
    }
    return out;
}

std::vector<RobustnessPoint> robustness_sweep(const HarmonicCoupling& c,
                                              const OptimizationProblem& prob,
                                              int points, double span) {
    c.validate();
    if (points < 2) throw ValidationError("robustness sweep needs at least 2 points");
    if (!(span > 0.0 && span < 1.0)) throw ValidationError("span must lie in (0, 1)");
    const auto bundle = make_initial(prob.alpha1, alpha2_from_imbalance(prob.alpha1, prob.z0));
    const Grid g = grid_from_waveform(c, c.tau_T, prob.step);
    std::vector<RobustnessPoint> out;
    for (int i = 0; i < points; ++i) {
        RobustnessPoint pt;
        pt.ratio = (1.0 - span) + 2.0 * span * i / (points - 1);
        pt.u2 = pt.ratio * prob.params.u1;
        const auto traj = simulate_manifold(bundle, g, prob.params.u1, pt.u2);
        pt.g2_at_T = observables_at(traj, traj.tau.size() - 1).g2;
        out.push_back(pt);
    }
    return out;
}

}  // namespace blockade
