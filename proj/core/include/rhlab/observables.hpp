#pragma once

#include <vector>

#include "rhlab/basis.hpp"
#include "rhlab/chain.hpp"

namespace rhlab {

double sigma_x(const QuantumState& psi, int ion);
double sigma_y(const QuantumState& psi, int ion);
double sigma_z(const QuantumState& psi, int ion);
double mean_sigma_z(const QuantumState& psi);

/// ⟨σ_a^i σ_b^j⟩ for a, b ∈ {x, y}, i ≠ j.
struct SpinPairMoments {
    double sx_i = 0.0, sy_i = 0.0, sx_j = 0.0, sy_j = 0.0;
    double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;
};
SpinPairMoments spin_pair_moments(const QuantumState& psi, int i, int j);

/// C_ij = ⟨σ_x^i σ_x^j⟩ − ⟨σ_x^i⟩⟨σ_x^j⟩.
double correlation(const QuantumState& psi, int i, int j);

/// ⟨Π σ_z (−1)^{Σn}⟩.
double parity_expectation(const QuantumState& psi);

/// One-body phonon density ⟨c_i† c_j⟩ in the basis's own modes.
Eigen::MatrixXcd phonon_density(const QuantumState& psi);

struct PhononNumbers {
    std::vector<double> local;       // ⟨a_i† a_i⟩
    std::vector<double> collective;  // ⟨b_k† b_k⟩
};

/// Local and collective occupations; `modes` relates them through
/// b_k = Σ_i v_ik a_i.
PhononNumbers phonon_numbers(const QuantumState& psi, const ModeSpectrum& modes);

/// Population of the highest retained Fock level of each basis mode.
std::vector<double> top_level_population(const QuantumState& psi);

/// Von Neumann entropy (bits) of sites [0, cut) with their spins and local
/// phonons. Needs the local-mode representation.
double entanglement_entropy(const QuantumState& psi, int cut);

/// |⟨a|b⟩|².
double fidelity(const QuantumState& a, const QuantumState& b);

}  // namespace rhlab
