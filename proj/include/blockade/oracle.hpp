#pragma once

#include <complex>
#include <vector>

#include "blockade/params.hpp"

namespace blockade {

// Explicit truncated Fock basis |i j> for the validation propagator.
// manifold_only: keep i + j <= 2 (dimension 6 at cutoff 2); otherwise all
// states with i, j <= cutoff (dimension (cutoff+1)^2).
struct FockBasis {
    int cutoff = 2;
    bool manifold_only = true;
    std::vector<std::pair<int, int>> states;  // enumeration order fixes the index map

    static FockBasis make(int cutoff = 2, bool manifold_only = true);
    int index(int i, int j) const;            // -1 when absent
    std::size_t dim() const { return states.size(); }
};

using CVec = std::vector<std::complex<double>>;
using CMat = std::vector<std::vector<std::complex<double>>>;

// Effective generator at fixed coupling: tunneling J(a1^+ a2 + a2^+ a1),
// interaction u1 i(i-1) + u2 j(j-1), loss diagonal -i kappa (i+j)/2.
CMat build_heff(const FockBasis& basis, const SystemParams& p, double J);

struct ScheduleSegment {
    double j = 0.0;
    double length = 0.0;  // in tau
};

// Exact per-segment propagation psi -> exp(-i Heff dtau) psi.
// Segments must tile [0, tau_end] within 1e-9.
CVec propagate(const FockBasis& basis, const SystemParams& p, CVec psi0,
               const std::vector<ScheduleSegment>& schedule, double tau_end);

// Coherent-product initial vector on the basis:
// amplitude(i,j) = e^{-alpha^2/2} alpha1^i alpha2^j / sqrt(i! j!).
CVec coherent_truncated(const FockBasis& basis, double alpha1, double alpha2);

}  // namespace blockade
