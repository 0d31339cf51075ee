#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rhlab/units.hpp"

namespace rhlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Linear chain of ions confined transversely with trap frequency ω_x.
/// Spacings are in meters, frequencies in rad/s.
struct ChainGeometry {
    std::vector<double> spacings;
    double trap_freq = 0.0;
    double mass = constants::yb171_ion_mass_amu * constants::atomic_mass_unit;
    double charge = constants::elementary_charge;

    int n_ions() const { return static_cast<int>(spacings.size()) + 1; }
    std::vector<double> positions() const;

    /// e²/(4πε₀ m), the Coulomb stiffness per unit mass.
    double coulomb_constant() const;

    /// Throws DomainError on nonpositive spacings/trap frequency and
    /// ChainUnstable if any local frequency would be imaginary.
    void validate() const;

    static ChainGeometry uniform(int n_ions, double spacing, double trap_freq);
};

/// Local transverse modes and their Coulomb hoppings, with the second-order
/// corrections from eliminating counter-rotating terms.
struct MotionalModel {
    double trap_freq = 0.0;
    Vec local_freqs;
    Mat hoppings;
    Vec corrected_freqs;
    Mat corrected_hoppings;

    int n_ions() const { return static_cast<int>(local_freqs.size()); }

    /// ω̃_i on the diagonal, t̃_ij off the diagonal.
    Mat mode_matrix() const;
};

/// Eigen-decomposition of a symmetric mode matrix. Frequencies ascend and
/// each column's largest-magnitude entry is positive.
struct ModeSpectrum {
    Vec freqs;
    Mat vectors;

    int size() const { return static_cast<int>(freqs.size()); }
};

/// Parameters of H = Σ_i [ω₀/2 σ_z + ω_i a†a + g σ_x (a + a†)] + Σ_{i<j} t_ij (a_i†a_j + h.c.).
struct RHModel {
    double spin_freq = 0.0;
    Vec site_freqs;
    double coupling = 0.0;
    Mat hoppings;

    int n_sites() const { return static_cast<int>(site_freqs.size()); }

    /// diag(ω_i) + t.
    Mat mode_matrix() const;
    ModeSpectrum modes() const;

    /// True when every collective mode frequency is positive, so the
    /// phonon sector has a ground state.
    bool equilibrium() const;

    RHModel with_coupling(double g) const;

    /// Throws DomainError on shape mismatch or asymmetric hoppings.
    void validate() const;
};

MotionalModel motional_model(const ChainGeometry& geom);

ModeSpectrum collective_modes(const MotionalModel& m);

/// Symmetric eigenproblem with the deterministic sign convention.
ModeSpectrum diagonalize_modes(const Mat& symmetric);

/// Map a motional model into the frame where the bichromatic drive with
/// blue/red sideband detunings δ_b, δ_r realizes the RH model (g left 0).
RHModel interaction_picture(const MotionalModel& m, double blue_detuning, double red_detuning);

/// g = ηΩ/2.
double coupling_from_laser(double lamb_dicke, double rabi);
/// Ω = 2g/η.
double rabi_from_coupling(double coupling, double lamb_dicke);

/// t_ij = t_nn / |i-j|^exponent.
Mat power_law_hoppings(int n_sites, double nearest, double exponent = 3.0);

/// Shift every site frequency by a common offset so that the lowest
/// collective mode sits at `lowest`.
RHModel tune_lowest_mode(const RHModel& model, double lowest);

}  // namespace rhlab
