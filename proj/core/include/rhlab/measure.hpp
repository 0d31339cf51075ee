#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rhlab/basis.hpp"
#include "rhlab/observables.hpp"

namespace rhlab {

/// Rotated-basis correlation of one pair: C(φ) = ⟨σ_φ^i σ_φ^j⟩ − ⟨σ_φ^i⟩⟨σ_φ^j⟩
/// with σ_φ = σ_x cos φ + σ_y sin φ.
struct PhaseScan {
    int i = 0;
    int j = 1;
    std::vector<double> phases;
    std::vector<double> correlations;
};

double rotated_correlation(const SpinPairMoments& m, double phi);
PhaseScan phase_scan(const SpinPairMoments& m, int i, int j, const std::vector<double>& phases);
PhaseScan phase_scan(const QuantumState& psi, int i, int j, const std::vector<double>& phases);

/// n phases evenly covering [0, π).
std::vector<double> phase_grid(int n);

/// C(φ) ≈ C⁰ cos²(φ + φ₀) + C.
struct CorrelationFit {
    double amplitude = 0.0;     // C⁰ ≥ 0
    double phase_offset = 0.0;  // φ₀ in (−π/2, π/2]
    double offset = 0.0;        // C
    double residual = 0.0;      // RMS misfit
    bool degenerate = false;    // no 2φ harmonic; φ₀ is undefined
};

/// Linear least squares in a + b cos 2φ + c sin 2φ. Needs at least five
/// phases covering a period of the 2φ harmonic.
CorrelationFit fit_correlation(const PhaseScan& scan);

/// Joint outcome probabilities in the order (↑↑, ↑↓, ↓↑, ↓↓), ↑ being the
/// bright state.
using PairDistribution = std::array<double, 4>;

/// Outcome distribution of measuring σ_φ on both ions.
PairDistribution pair_distribution(const SpinPairMoments& m, double phi);

/// ⟨s_i s_j⟩ − ⟨s_i⟩⟨s_j⟩ for outcomes s = ±1.
double distribution_correlation(const PairDistribution& p);

struct DetectionErrorModel {
    /// ε_c: probability that a bright ion turns its dark neighbor bright.
    double crosstalk = 0.0;
    /// ε₀: independent flip probability of each ion.
    double flip = 0.0;
    /// Crosstalk for pairs at distance 2, 3, …; missing entries are 0.
    std::vector<double> distant_crosstalk;

    double crosstalk_at(int distance) const;
    void validate() const;
};

/// Crosstalk (mixed outcomes → ↑↑ with probability ε_c), then independent flips.
PairDistribution apply_detection_errors(const PairDistribution& p, const DetectionErrorModel& model, int distance = 1);

/// Multinomial draw of `shots` outcomes.
std::array<long, 4> sample_shots(const PairDistribution& p, long shots, std::uint64_t seed);

/// Outcome distribution of measuring σ_φ on every ion; keys are strings
/// over {u, d}, ion 0 first.
std::map<std::string, double> spin_distribution(const QuantumState& psi, double phi);
std::map<std::string, long> sample_shots(const QuantumState& psi, double phi, long shots, std::uint64_t seed);

/// Shot-noise phase scan: each phase gets `shots` samples from the
/// (optionally corrupted) pair distribution.
PhaseScan sampled_phase_scan(const SpinPairMoments& m, int i, int j, const std::vector<double>& phases, long shots,
                             std::uint64_t seed, const DetectionErrorModel& errors = {});

}  // namespace rhlab
