#include "blockade/waveform.hpp"

#include <cmath>
#include <cstddef>

namespace blockade {

void HarmonicCoupling::validate() const {
    if (p < 1) throw ValidationError("harmonic count p must be >= 1");
    if (a.size() != static_cast<std::size_t>(2 * p + 1))
        throw ValidationError("coefficient vector must have 2p+1 entries");
    if (!(tau_T > 0.0)) throw ValidationError("horizon tau_T must be positive");
    if (!(jmax >= 0.0)) throw ValidationError("jmax must be nonnegative");
    for (double c : a)
        if (!std::isfinite(c)) throw ValidationError("coefficients must be finite");
}

double HarmonicCoupling::value_series(double tau) const {
    double v = a[0] * tau;
    for (int k = 1; k <= p; ++k) {
        const double kt = k * tau;
        v += a[2 * k - 1] * std::sin(kt) / k + a[2 * k] * (1.0 - std::cos(kt)) / k;
    }
    return v;
}

double HarmonicCoupling::value(double tau) const {
    if (tau >= tau_T) return 0.0;
    return value_series(tau);
}

double HarmonicCoupling::derivative_series(double tau) const {
    double v = a[0];
    for (int k = 1; k <= p; ++k) {
        const double kt = k * tau;
        v += a[2 * k - 1] * std::cos(kt) + a[2 * k] * std::sin(kt);
    }
    return v;
}

double eliminate_a0(const std::vector<double>& tail, double tau_T) {
    if (!(tau_T > 0.0)) throw ValidationError("horizon tau_T must be positive");
    if (tail.size() % 2 != 0 || tail.empty())
        throw ValidationError("tail must hold a1..a_{2p}");
    const int p = static_cast<int>(tail.size() / 2);
    double s = 0.0;
    for (int k = 1; k <= p; ++k) {
        const double kt = k * tau_T;
        s += tail[2 * k - 2] * std::sin(kt) / k + tail[2 * k - 1] * (1.0 - std::cos(kt)) / k;
    }
    return -s / tau_T;
}

double box_violation(const HarmonicCoupling& c, int grid_points) {
    if (grid_points < 100) throw ValidationError("box grid needs at least 100 points");
    const double h = c.tau_T / (grid_points - 1);
    double acc = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double tau = i * h;
        const double j = c.value_series(tau);
        const double under = j < 0.0 ? -j : 0.0;
        const double over = j > c.jmax ? j - c.jmax : 0.0;
        acc += under * under + over * over;
    }
    return acc * h;
}

BoxAudit fine_audit(const HarmonicCoupling& c, int grid_points) {
    if (grid_points < 100) throw ValidationError("audit grid needs at least 100 points");
    BoxAudit r;
    const double h = c.tau_T / (grid_points - 1);
    double acc = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double tau = i * h;
        const double j = c.value_series(tau);
        const double under = j < 0.0 ? -j : 0.0;
        const double over = j > c.jmax ? j - c.jmax : 0.0;
        if (under > r.max_under) r.max_under = under;
        if (over > r.max_over) r.max_over = over;
        acc += under * under + over * over;
    }
    r.integrated_sq = acc * h;
    r.jT_abs = std::fabs(c.value_series(c.tau_T));
    return r;
}

}  // namespace blockade
