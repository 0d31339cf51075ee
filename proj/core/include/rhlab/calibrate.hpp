#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rhlab/chain.hpp"

namespace rhlab {

/// Measured collective transverse mode frequencies (rad/s, ascending).
struct SpectrumMeasurement {
    std::vector<double> freqs;
    double trap_freq = 0.0;
    std::vector<double> weights;  // empty = uniform

    int n_ions() const { return static_cast<int>(freqs.size()); }
    void validate() const;
};

struct SpacingFit {
    std::vector<double> spacings;
    double residual = 0.0;  // RMS frequency mismatch, rad/s
    bool converged = false;
    int iterations = 0;
    std::vector<std::string> warnings;
};

struct FitOptions {
    /// Initial spacings; defaults to a uniform 5.4 μm chain.
    std::optional<std::vector<double>> initial;
    int max_iterations = 200;
    /// Projected-gradient tolerance, rad/s. The inversion is ill-conditioned:
    /// 1 Hz of residual still leaves spacing errors of several 10 nm.
    double gradient_tolerance = kTwoPi * 1e-5;
    /// Extra starts drawn uniformly within ±random_spread of the initial
    /// spacings; only used when no initial guess is supplied.
    int random_starts = 24;
    double random_spread = 0.15;
    std::uint64_t seed = 0;
    /// RMS residual (rad/s) below which the multistart search stops early.
    double exact_residual = kTwoPi * 1e-4;
    /// Allowed mismatch between the top measured mode and the trap frequency.
    double com_tolerance = kTwoPi * 1e3;
};

/// Least-squares inversion of the mode spectrum for the inter-ion
/// spacings. The template supplies mass and charge; its spacings are not
/// used. With `symmetric`, only mirror-independent spacings are varied.
SpacingFit fit_spacings(const SpectrumMeasurement& meas, const ChainGeometry& geom_template, bool symmetric,
                        const FitOptions& options = {});

/// Even ion counts default to the mirror-symmetric fit.
inline bool default_symmetric(int n_ions) { return n_ions % 2 == 0; }

/// ∂δ_k/∂z_{i,i+1}: rows are modes (ascending), columns are spacings.
/// Analytic first-order perturbation theory, δ_k' = v_kᵀ M' v_k.
Mat fit_jacobian(const ChainGeometry& geom);

/// Mode frequencies of the RWA motional model of `geom`, ascending.
Vec model_spectrum(const ChainGeometry& geom);

}  // namespace rhlab
