#pragma once

#include <vector>

#include "rhlab/chain.hpp"

namespace rhlab {

enum class Branch { trivial, broken };

/// Mean-field ground state restricted to the lowest collective mode b₀.
/// The solver returns the representative with ⟨b₀⟩ ≥ 0; the Z₂ partner has
/// ⟨b₀⟩ → −⟨b₀⟩ and every ⟨σ_x⟩ flipped.
struct MeanFieldSolution {
    double b0_amplitude = 0.0;
    std::vector<double> spin_x;
    /// Spin angle from the x axis, in (0, π); equals atan(ω₀ / (4 v_i0 g ⟨b₀⟩))
    /// whenever v_i0 ⟨b₀⟩ > 0. ⟨σ_x^i⟩ = −cos θ_i.
    std::vector<double> spin_angles;
    Branch branch = Branch::trivial;
    std::vector<double> other_modes;

    double mean_spin_x() const;
};

/// g_c = √(ω₀ δ₀) / 2.
double critical_coupling(double spin_freq, double lowest_mode);

/// Solve 1 = Σ_i (4 g² v_i0² / δ₀) / √(ω₀² + 16 g² v_i0² b²) for b = ⟨b₀⟩ > 0
/// by bisection, or return the trivial branch when 4g²/(δ₀ω₀) ≤ 1.
MeanFieldSolution solve_b0(double g, double spin_freq, double lowest_mode, const Vec& lowest_vector,
                           double rel_tol = 1e-12);

/// Convenience: δ₀ and v_i0 from the model's collective modes, g from the model.
MeanFieldSolution solve_b0(const RHModel& model, double rel_tol = 1e-12);

/// One-shot evaluation of ⟨b_k⟩ = −Σ_i g v_ik ⟨σ_x^i⟩ / δ_k with the converged
/// spin configuration; entry 0 reproduces ⟨b₀⟩.
std::vector<double> other_mode_amplitudes(const MeanFieldSolution& solution, double g, double spin_freq,
                                          const ModeSpectrum& spectrum);

}  // namespace rhlab
