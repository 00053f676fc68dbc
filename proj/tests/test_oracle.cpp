#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "blockade/dynamics.hpp"
#include "blockade/oracle.hpp"
#include "doctest.h"

using namespace blockade;

namespace {

double lcg_uniform(std::uint64_t& s, double lo, double hi) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return lo + (hi - lo) * static_cast<double>(s >> 11) * 0x1.0p-53;
}

}  // namespace

TEST_CASE("basis enumeration and indexing") {
    const auto b = FockBasis::make();
    CHECK(b.dim() == 6);
    CHECK(b.index(0, 0) >= 0);
    CHECK(b.index(2, 0) >= 0);
    CHECK(b.index(2, 1) == -1);
    const auto full = FockBasis::make(2, false);
    CHECK(full.dim() == 9);
    CHECK(full.index(2, 2) >= 0);
}

TEST_CASE("generator blocks carry the expected entries") {
    const auto b = FockBasis::make();
    SystemParams p;
    p.kappa = 1.0;
    p.u1 = 0.7;
    p.u2 = 0.4;
    const double J = 1.3;
    const auto h = build_heff(b, p, J);
    const auto at = [&](int i1, int j1, int i2, int j2) {
        return h[static_cast<std::size_t>(b.index(i1, j1))][static_cast<std::size_t>(b.index(i2, j2))];
    };
    // vacuum row is fully decoupled
    for (std::size_t c = 0; c < b.dim(); ++c) {
        CHECK(h[static_cast<std::size_t>(b.index(0, 0))][c] == std::complex<double>(0.0, 0.0));
        CHECK(h[c][static_cast<std::size_t>(b.index(0, 0))] == std::complex<double>(0.0, 0.0));
    }
    // one-quantum block: off-diagonal J, loss -i/2
    CHECK(at(0, 1, 1, 0) == std::complex<double>(J, 0.0));
    CHECK(at(1, 0, 0, 1) == std::complex<double>(J, 0.0));
    CHECK(at(1, 0, 1, 0) == std::complex<double>(0.0, -0.5));
    // two-quantum block: off-diagonals sqrt(2) J, diagonals 2u - i and -i
    CHECK(at(1, 1, 2, 0).real() == doctest::Approx(std::sqrt(2.0) * J).epsilon(1e-15));
    CHECK(at(0, 2, 1, 1).real() == doctest::Approx(std::sqrt(2.0) * J).epsilon(1e-15));
    CHECK(at(2, 0, 2, 0) == std::complex<double>(2.0 * p.u1, -1.0));
    CHECK(at(0, 2, 0, 2) == std::complex<double>(2.0 * p.u2, -1.0));
    CHECK(at(1, 1, 1, 1) == std::complex<double>(0.0, -1.0));
    // no cross-manifold mixing
    CHECK(at(1, 0, 2, 0) == std::complex<double>(0.0, 0.0));
    CHECK(at(2, 0, 0, 1) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("single quantum decays freely when decoupled") {
    const auto b = FockBasis::make();
    SystemParams p;
    p.u1 = 0.9;
    p.u2 = 0.9;
    CVec psi0(b.dim(), {0.0, 0.0});
    psi0[static_cast<std::size_t>(b.index(1, 0))] = {1.0, 0.0};
    const double tau = 1.7;
    const auto psi = propagate(b, p, psi0, {{0.0, tau}}, tau);
    CHECK(std::abs(psi[static_cast<std::size_t>(b.index(1, 0))] - std::exp(-0.5 * tau)) < 1e-12);
    for (std::size_t k = 0; k < b.dim(); ++k)
        if (k != static_cast<std::size_t>(b.index(1, 0))) CHECK(std::abs(psi[k]) < 1e-14);
}

TEST_CASE("vacuum amplitude never moves") {
    const auto b = FockBasis::make();
    SystemParams p;
    p.u1 = 1.0;
    p.u2 = 1.0;
    auto psi0 = coherent_truncated(b, 0.1, 0.07);
    const auto c00 = psi0[static_cast<std::size_t>(b.index(0, 0))];
    const auto psi = propagate(b, p, psi0, {{2.0, 0.5}, {0.3, 0.75}}, 1.25);
    CHECK(std::abs(psi[static_cast<std::size_t>(b.index(0, 0))] - c00) < 1e-14);
}

TEST_CASE("lossless propagation is unitary") {
    const auto b = FockBasis::make();
    std::uint64_t s = 7;
    SystemParams q;
    q.kappa = 0.0;  // propagate() does not consult validate(), so zero loss is usable here
    q.u1 = 0.8;
    q.u2 = 0.3;
    auto psi = coherent_truncated(b, 0.12, 0.09);
    double n0 = 0.0;
    for (const auto& z : psi) n0 += std::norm(z);
    std::vector<ScheduleSegment> sched;
    double total = 0.0;
    for (int k = 0; k < 8; ++k) {
        const double len = lcg_uniform(s, 0.05, 0.3);
        sched.push_back({lcg_uniform(s, 0.0, 3.0), len});
        total += len;
    }
    psi = propagate(b, q, psi, sched, total);
    double n1 = 0.0;
    for (const auto& z : psi) n1 += std::norm(z);
    CHECK(std::fabs(n1 - n0) < 1e-12);
}

TEST_CASE("number conservation keeps the truncation closed") {
    const auto full = FockBasis::make(3, false);
    SystemParams q;
    q.kappa = 0.0;
    q.u1 = 1.1;
    q.u2 = 0.6;
    CVec psi0(full.dim(), {0.0, 0.0});
    psi0[static_cast<std::size_t>(full.index(2, 0))] = {0.6, 0.0};
    psi0[static_cast<std::size_t>(full.index(1, 1))] = {0.0, 0.5};
    psi0[static_cast<std::size_t>(full.index(0, 2))] = {0.62, 0.0};
    const auto psi = propagate(full, q, psi0, {{2.5, 0.8}, {1.1, 0.7}}, 1.5);
    for (std::size_t k = 0; k < full.dim(); ++k) {
        const int n = full.states[k].first + full.states[k].second;
        if (n != 2) CHECK(std::abs(psi[k]) < 1e-12);
    }
}

TEST_CASE("schedules must tile the requested interval") {
    const auto b = FockBasis::make();
    SystemParams p;
    CVec psi0(b.dim(), {0.0, 0.0});
    psi0[0] = {1.0, 0.0};
    CHECK_THROWS_AS(propagate(b, p, psi0, {{1.0, 0.5}}, 1.0), SegmentGap);
    CHECK_THROWS_AS(propagate(b, p, psi0, {{1.0, -0.5}, {1.0, 1.5}}, 1.0), SegmentGap);
    CHECK_THROWS_AS(propagate(b, p, CVec(3, {0.0, 0.0}), {{1.0, 1.0}}, 1.0), ValidationError);
}

TEST_CASE("coherent product amplitudes") {
    const auto b = FockBasis::make();
    const double a1 = 0.1, a2 = 0.07;
    const auto psi = coherent_truncated(b, a1, a2);
    const double n = std::exp(-0.5 * (a1 * a1 + a2 * a2));
    CHECK(std::abs(psi[static_cast<std::size_t>(b.index(0, 0))] - n) < 1e-15);
    CHECK(std::abs(psi[static_cast<std::size_t>(b.index(1, 0))] - n * a1) < 1e-15);
    CHECK(std::abs(psi[static_cast<std::size_t>(b.index(1, 1))] - n * a1 * a2) < 1e-15);
    CHECK(std::abs(psi[static_cast<std::size_t>(b.index(2, 0))] - n * a1 * a1 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("staircase propagation agrees with the grid integrator") {
    const auto basis = FockBasis::make();
    std::uint64_t s = 2026;
    for (int trial = 0; trial < 5; ++trial) {
        SystemParams p;
        p.kappa = 1.0;
        p.u1 = lcg_uniform(s, 0.0, 1.5);
        p.u2 = lcg_uniform(s, 0.0, 1.5);
        const double alpha1 = 0.1;
        const double alpha2 = lcg_uniform(s, 0.01, 0.12);
        const auto bundle = make_initial(alpha1, alpha2);

        std::vector<double> values, edges{0.0};
        std::vector<ScheduleSegment> sched;
        for (int k = 0; k < 16; ++k) {
            const double len = lcg_uniform(s, 0.05, 0.2);
            const double j = lcg_uniform(s, 0.0, 3.0);
            values.push_back(j);
            edges.push_back(edges.back() + len);
            sched.push_back({j, len});
        }
        const double tau_end = edges.back();

        const Grid g = grid_from_staircase(values, edges, 1e-3);
        const auto traj = simulate_manifold(bundle, g, p.u1, p.u2);
        const std::size_t last = traj.tau.size() - 1;
        const auto& y = traj.one[last];
        const auto& x = traj.two[last];
        const double e1 = traj.env1[last], e2 = traj.env2[last];
        const double A1 = bundle.state.A1, A2 = bundle.state.A2;

        const auto psi = propagate(basis, p, coherent_truncated(basis, alpha1, alpha2), sched, tau_end);
        const auto amp = [&](int i, int j) {
            return psi[static_cast<std::size_t>(basis.index(i, j))];
        };
        CHECK(std::abs(amp(1, 0) - A1 * e1 * std::complex<double>(y[0], y[1])) < 1e-8);
        CHECK(std::abs(amp(0, 1) - A1 * e1 * std::complex<double>(y[2], y[3])) < 1e-8);
        CHECK(std::abs(amp(2, 0) - A2 * e2 * std::complex<double>(x[0], x[1])) < 1e-8);
        CHECK(std::abs(amp(1, 1) - A2 * e2 * std::complex<double>(x[2], x[3])) < 1e-8);
        CHECK(std::abs(amp(0, 2) - A2 * e2 * std::complex<double>(x[4], x[5])) < 1e-8);
    }
}
