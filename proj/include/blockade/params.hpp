#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace blockade {

// Configuration or input problems: caller error, maps to exit code 1 in the CLI.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Failures of the computation itself: maps to exit code 2 in the CLI.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BothAmplitudesZero : ValidationError {
    BothAmplitudesZero() : ValidationError("both coherent amplitudes are zero; normalized manifold vectors are undefined") {}
};
struct ExcitationTooStrong : ValidationError {
    explicit ExcitationTooStrong(double a2)
        : ValidationError("alpha^2 = " + std::to_string(a2) + " exceeds 0.1; the truncated manifold model assumes weak excitation") {}
};
struct StepTooLarge : NumericalError {
    explicit StepTooLarge(double drift)
        : NumericalError("integration norm drift " + std::to_string(drift) + " exceeds tolerance; reduce the step") {}
};
struct CouplingActive : ValidationError {
    CouplingActive() : ValidationError("two-time closed form requires zero coupling over the delay window") {}
};
struct SegmentGap : ValidationError {
    SegmentGap() : ValidationError("piecewise-constant schedule does not tile the requested interval") {}
};
struct NoMinimumFound : NumericalError {
    NoMinimumFound() : NumericalError("g2 has no confirmed dip on the simulated window") {}
};
struct AuditFailed : NumericalError {
    explicit AuditFailed(const std::string& what) : NumericalError(what) {}
};

// All rates in units of kappa; kappa itself only sets the physical time scale.
struct SystemParams {
    double kappa = 1.0;
    double u1 = 0.0;
    double u2 = 0.0;
    double jmax = 0.0;

    void validate() const {
        if (!(kappa > 0.0)) throw ValidationError("kappa must be positive");
        if (!(jmax >= 0.0)) throw ValidationError("jmax must be nonnegative");
        if (!std::isfinite(u1) || !std::isfinite(u2)) throw ValidationError("nonlinearities must be finite");
    }
};

// Coherent-product initial data and the derived manifold weights.
// c00 stays constant for all time; A1, A2 scale the one- and two-quantum vectors.
struct InitialState {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha_sq = 0.0;   // alpha1^2 + alpha2^2
    double z0 = 0.0;         // (alpha1^2 - alpha2^2) / alpha_sq
    double c00 = 1.0;        // e^{-alpha^2/2}
    double A1 = 0.0;         // e^{-alpha^2/2} * alpha
    double A2 = 0.0;         // e^{-alpha^2/2} * alpha^2 / sqrt(2)
    bool strong_excitation_warning = false;  // alpha_sq > 0.02
};

// Component order: (Re c10, Im c10, Re c01, Im c01), normalized to unit length.
using OnePhotonVector = std::array<double, 4>;
// Component order: (Re c20, Im c20, Re c11, Im c11, Re c02, Im c02) / A2, unit length.
using TwoPhotonVector = std::array<double, 6>;

struct InitialBundle {
    InitialState state;
    OnePhotonVector one;
    TwoPhotonVector two;
};

InitialBundle make_initial(double alpha1, double alpha2);

// alpha2 from (alpha1, z0): alpha2^2 = alpha1^2 (1-z0)/(1+z0). Requires z0 > -1 when alpha1 > 0.
double alpha2_from_imbalance(double alpha1, double z0);

}  // namespace blockade
