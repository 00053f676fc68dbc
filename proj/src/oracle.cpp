#include "blockade/oracle.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace blockade {

FockBasis FockBasis::make(int cutoff, bool manifold_only) {
    if (cutoff < 1) throw ValidationError("cutoff must be >= 1");
    FockBasis b;
    b.cutoff = cutoff;
    b.manifold_only = manifold_only;
    for (int i = 0; i <= cutoff; ++i)
        for (int j = 0; j <= cutoff; ++j)
            if (!manifold_only || i + j <= 2) b.states.emplace_back(i, j);
    return b;
}

int FockBasis::index(int i, int j) const {
    for (std::size_t k = 0; k < states.size(); ++k)
        if (states[k].first == i && states[k].second == j) return static_cast<int>(k);
    return -1;
}

CMat build_heff(const FockBasis& basis, const SystemParams& p, double J) {
    const std::size_t d = basis.dim();
    CMat h(d, std::vector<std::complex<double>>(d, {0.0, 0.0}));
    for (std::size_t k = 0; k < d; ++k) {
        const int i = basis.states[k].first, j = basis.states[k].second;
        h[k][k] = {p.u1 * i * (i - 1) + p.u2 * j * (j - 1), -0.5 * p.kappa * (i + j)};
        // tunneling: |i j> -> |i-1 j+1> with sqrt(i(j+1)), and the conjugate move
        const int k1 = basis.index(i - 1, j + 1);
        if (i >= 1 && k1 >= 0) h[static_cast<std::size_t>(k1)][k] += J * std::sqrt(double(i) * (j + 1));
        const int k2 = basis.index(i + 1, j - 1);
        if (j >= 1 && k2 >= 0) h[static_cast<std::size_t>(k2)][k] += J * std::sqrt(double(i + 1) * j);
    }
    return h;
}

CVec propagate(const FockBasis& basis, const SystemParams& p, CVec psi0,
               const std::vector<ScheduleSegment>& schedule, double tau_end) {
    const std::size_t d = basis.dim();
    if (psi0.size() != d) throw ValidationError("state dimension does not match the basis");
    double covered = 0.0;
    for (const auto& seg : schedule) {
        if (!(seg.length > 0.0)) throw SegmentGap();
        covered += seg.length;
    }
    if (std::fabs(covered - tau_end) > 1e-9) throw SegmentGap();

    Eigen::VectorXcd psi(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) psi[static_cast<Eigen::Index>(k)] = psi0[k];
    for (const auto& seg : schedule) {
        const CMat h = build_heff(basis, p, seg.j);
        Eigen::MatrixXcd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    std::complex<double>(0.0, -1.0) * h[r][c] * seg.length;
        psi = m.exp() * psi;
    }
    CVec out(d);
    for (std::size_t k = 0; k < d; ++k) out[k] = psi[static_cast<Eigen::Index>(k)];
    return out;
}

CVec coherent_truncated(const FockBasis& basis, double alpha1, double alpha2) {
    const double norm = std::exp(-0.5 * (alpha1 * alpha1 + alpha2 * alpha2));
    CVec out(basis.dim());
    for (std::size_t k = 0; k < basis.dim(); ++k) {
        const int i = basis.states[k].first, j = basis.states[k].second;
        double fact = 1.0;
        for (int q = 2; q <= i; ++q) fact *= q;
        for (int q = 2; q <= j; ++q) fact *= q;
        out[k] = norm * std::pow(alpha1, i) * std::pow(alpha2, j) / std::sqrt(fact);
    }
    return out;
}

}  // namespace blockade
