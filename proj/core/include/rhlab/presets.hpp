#pragma once

#include <string>
#include <vector>

#include "rhlab/chain.hpp"

namespace rhlab::presets {

/// One experimental configuration: measured transverse spectrum (MHz),
/// quoted spacing fit (μm) and sideband detunings (kHz, ×2π).
struct ParameterSet {
    std::string name;
    std::vector<double> measured_modes_mhz;
    std::vector<double> quoted_spacings_um;
    double blue_detuning_khz = 0.0;
    double red_detuning_khz = 0.0;
    /// Printed interaction-picture values, empty where none are quoted.
    std::vector<double> quoted_site_freqs_khz;
    std::vector<double> quoted_mode_freqs_khz;

    int n_ions() const { return static_cast<int>(measured_modes_mhz.size()); }
    /// Top of the measured spectrum, taken as the bare trap frequency.
    double trap_freq() const;
    ChainGeometry quoted_geometry() const;
    double blue_detuning() const { return khz(blue_detuning_khz); }
    double red_detuning() const { return khz(red_detuning_khz); }
};

/// Phase-transition sets, N = 2, 6, 10, 14, 16.
const std::vector<ParameterSet>& phase_transition_sets();
/// Dynamics sets, N = 2, 4, 16.
const std::vector<ParameterSet>& dynamics_sets();

const ParameterSet& phase_transition_set(int n_ions);
const ParameterSet& dynamics_set(int n_ions);

/// Second N = 6 spacing fit shown with the spectrum plot (μm).
std::vector<double> n6_plot_spacings_um();

/// RH model of a parameter set: spacings fitted from the measured
/// spectrum (symmetric fit), then mapped through the sideband detunings.
RHModel model_from_measurement(const ParameterSet& set);
/// Same, but from the quoted spacings.
RHModel model_from_quoted_spacings(const ParameterSet& set);

/// Idealized uniform chain used for ground-state studies: hoppings
/// t_nn/|i-j|³, local frequencies softened as for spacing `spacing` at trap
/// frequency `trap_freq`, the whole ladder shifted so the lowest collective
/// mode equals `lowest_mode`, and ω₀ set to the local frequency of site N/2.
RHModel uniform_chain_model(int n_ions, double nearest_hopping = khz(26.0), double lowest_mode = khz(2.0),
                            double spacing = um(5.4), double trap_freq = mhz(2.5));

}  // namespace rhlab::presets
