#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rhlab/evolve.hpp"
#include "rhlab/lanczos.hpp"

namespace rhlab {

enum class RampShape { exponential_ramp, reverse_appended, constant };

/// Coupling protocol g(t). The exponential ramp is g(t) = (1 − e^{−t/τ}) g_max;
/// the reverse-appended protocol runs that ramp for t_total/2 and then
/// mirrors it back to zero.
struct QuenchSchedule {
    RampShape shape = RampShape::exponential_ramp;
    double tau = 1e-3;
    double g_max = 0.0;
    double t_total = 5e-3;

    /// Forward ramp truncated at `duration` (default 5τ).
    static QuenchSchedule exponential(double g_max, double tau, std::optional<double> duration = std::nullopt);
    /// Forward ramp of `forward` (default 5τ) followed by its mirror image.
    static QuenchSchedule reversed(double g_max, double tau, std::optional<double> forward = std::nullopt);
    static QuenchSchedule constant(double g, double duration);

    void validate() const;
    double operator()(double t) const;
    /// Number of ramp segments (2 for the reverse-appended protocol).
    int segments() const { return shape == RampShape::reverse_appended ? 2 : 1; }
};

double g_at(const QuenchSchedule& schedule, double t);

/// Uniform grid over [0, t_total] with `points_per_ramp` intervals per ramp segment.
std::vector<double> sample_times(const QuenchSchedule& schedule, int points_per_ramp = 50);

struct QuenchSample {
    double time = 0.0;
    double coupling = 0.0;
    double mean_sigma_z = 0.0;
    std::vector<double> sigma_z;
    Mat correlations;  // C_ij, zero diagonal
    std::optional<double> fidelity;            // to the instantaneous ground state
    std::optional<double> excitation_energy;   // ⟨H⟩ − E₀, rad/s
};

struct QuenchOptions {
    int points_per_ramp = 50;
    EvolveOptions evolve;
    /// Track overlap with the instantaneous ground state (N ≤ 4).
    bool adiabaticity = false;
    LanczosOptions lanczos{.krylov_dim = 80, .max_restarts = 400, .tolerance = 1e-9, .seed = 0, .n_states = 1};
};

struct QuenchResult {
    std::vector<QuenchSample> samples;
    QuantumState final_state;
    EvolveStats stats;
    std::vector<double> max_top_level_population;
    std::vector<std::string> warnings;

    const QuenchSample& final_sample() const { return samples.back(); }
};

/// Start in |↓,0⟩^⊗N and evolve under H(g(t)). A basis left in the full
/// space is restricted to the parity sector of the initial state.
QuenchResult run_quench(const RHModel& model, const QuenchSchedule& schedule, BasisSpec basis,
                        const QuenchOptions& options = {});

struct AdiabaticityReport {
    std::vector<double> times;
    std::vector<double> couplings;
    std::vector<double> fidelity;
    std::vector<double> excitation_energy;
};

/// Quench with instantaneous-ground-state diagnostics at every sample.
AdiabaticityReport adiabaticity_report(const RHModel& model, const QuenchSchedule& schedule, const BasisSpec& basis,
                                       QuenchOptions options = {});
AdiabaticityReport adiabaticity_report(const QuenchResult& result);

struct ScaledPoint {
    double x = 0.0;
    double y = 0.0;
};

/// y = N^{2β/ν} C, x = N^{1/ν} (g − g_c) / g_c^mf.
std::vector<ScaledPoint> rescale_for_crossing(const std::vector<double>& correlations, int n_ions,
                                              const std::vector<double>& couplings, double g_c, double g_c_mf,
                                              double beta = 0.125, double nu = 1.0);
/// Inverse map back to (g, C) pairs.
std::vector<ScaledPoint> unscale(const std::vector<ScaledPoint>& points, int n_ions, double g_c, double g_c_mf,
                                 double beta = 0.125, double nu = 1.0);

/// First crossing of two curves sampled on a common grid, located by
/// linear interpolation of their difference.
std::optional<double> crossing_point(const std::vector<double>& grid, const std::vector<double>& a,
                                     const std::vector<double>& b);

}  // namespace rhlab
