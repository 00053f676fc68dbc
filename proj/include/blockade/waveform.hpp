#pragma once

#include <vector>

#include "blockade/params.hpp"

namespace blockade {

// Coupling J(tau) as the antiderivative of a truncated harmonic series with
// fundamental period 2*pi in tau = kappa*t (not rescaled to the horizon):
//   J(tau) = a0*tau + sum_k [ a_{2k-1} sin(k tau)/k + a_{2k} (1 - cos(k tau))/k ]
// J(0) = 0 by construction; identically zero for tau >= tau_T.
struct HarmonicCoupling {
    int p = 0;                // harmonic count, >= 1 unless the record is all-zero
    std::vector<double> a;    // a0..a_{2p}, size 2p+1
    double tau_T = 0.0;       // horizon kappa*T
    double jmax = 0.0;        // box ceiling, units of kappa

    void validate() const;

    // Zero extension applies at tau >= tau_T.
    double value(double tau) const;
    // Series value without the zero extension (left limit at the horizon).
    double value_series(double tau) const;
    // dJ/dtau of the series, for finite-difference cross-checks.
    double derivative_series(double tau) const;
};

// a0 making value(tau_T) = 0 exactly: -(1/tau_T) sum_k [a_{2k-1} sin(k tau_T)/k + a_{2k}(1-cos(k tau_T))/k].
// `tail` holds a1..a_{2p}.
double eliminate_a0(const std::vector<double>& tail, double tau_T);

// Integrated squared box overshoot on a uniform grid of `grid_points` nodes over [0, tau_T],
// scaled by the grid spacing. Zero iff feasible on the grid.
double box_violation(const HarmonicCoupling& c, int grid_points);

struct BoxAudit {
    double max_under = 0.0;      // max(0, -J) over the grid
    double max_over = 0.0;       // max(0, J - jmax) over the grid
    double jT_abs = 0.0;         // |series value at tau_T|
    double integrated_sq = 0.0;  // same quantity as box_violation
};

// Fine feasibility audit; default 20000 nodes.
BoxAudit fine_audit(const HarmonicCoupling& c, int grid_points = 20000);

}  // namespace blockade
