#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace rhlab {

enum class Representation { local_modes, collective_modes };
enum class ParitySector { even, odd, full };

/// Truncated spin ⊗ Fock space. Parity is P = Π_i σ_z^i · (−1)^{Σ n}; the
/// even sector has P = +1.
struct BasisSpec {
    int n_ions = 1;
    Representation representation = Representation::local_modes;
    /// Maximum phonon number per mode (one entry per site or collective mode).
    std::vector<int> cutoffs;
    ParitySector sector = ParitySector::full;

    static BasisSpec local(int n_ions, int cutoff, ParitySector sector = ParitySector::full);
    static BasisSpec collective(std::vector<int> cutoffs, ParitySector sector = ParitySector::full);

    void validate() const;
    /// Dimension of the unrestricted product space, 2^N Π (n_cut + 1).
    double full_dimension() const;
};

/// Limits on what the exact solvers are allowed to allocate.
struct ResourceBudget {
    std::size_t max_states = 4'000'000;
    int max_ions = 8;
};

/// Enumerated basis of a BasisSpec. A product state is addressed by its
/// "full" mixed-radix index; the factor layout is
///   local:      (σ_1, a_1, σ_2, a_2, …, σ_N, a_N)
///   collective: (σ_1, …, σ_N, b_1, …, b_N)
/// with the last factor running fastest. Spin digit 0 is |↑⟩ (σ_z = +1).
class FockBasis {
public:
    explicit FockBasis(BasisSpec spec, const ResourceBudget& budget = {});

    const BasisSpec& spec() const { return spec_; }
    int n_ions() const { return spec_.n_ions; }
    std::size_t size() const { return states_.size(); }
    std::uint64_t full_size() const { return full_size_; }

    std::uint64_t full_index(std::size_t k) const { return states_[k]; }
    /// Position of a product state in this basis, or -1 outside the sector.
    std::int64_t index_of(std::uint64_t full) const {
        return full < lookup_.size() ? lookup_[full] : -1;
    }

    int spin_factor(int ion) const;
    int mode_factor(int mode) const;
    int factor_count() const { return static_cast<int>(dims_.size()); }
    int factor_dim(int f) const { return dims_[static_cast<std::size_t>(f)]; }
    std::uint64_t stride(int f) const { return strides_[static_cast<std::size_t>(f)]; }

    int digit(std::uint64_t full, int f) const {
        return static_cast<int>((full / strides_[static_cast<std::size_t>(f)]) % dims_[static_cast<std::size_t>(f)]);
    }
    /// +1 for |↑⟩, −1 for |↓⟩.
    int spin(std::uint64_t full, int ion) const { return digit(full, spin_factor(ion)) == 0 ? 1 : -1; }
    int occupation(std::uint64_t full, int mode) const { return digit(full, mode_factor(mode)); }
    int parity(std::uint64_t full) const;

    /// Full index of the product state with the given spins (+1/−1) and occupations.
    std::uint64_t product_index(const std::vector<int>& spins, const std::vector<int>& occupations) const;

private:
    BasisSpec spec_;
    std::vector<int> dims_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t full_size_ = 0;
    std::vector<std::uint64_t> states_;
    std::vector<std::int64_t> lookup_;
};

using CVec = Eigen::VectorXcd;

/// State vector over a FockBasis.
struct QuantumState {
    std::shared_ptr<const FockBasis> basis;
    CVec amplitudes;
    double time = 0.0;

    double norm() const { return amplitudes.norm(); }
};

/// Product state with the given spins (+1 up, −1 down) and occupations.
QuantumState product_state(std::shared_ptr<const FockBasis> basis, const std::vector<int>& spins,
                           const std::vector<int>& occupations);
/// |↓,0⟩^⊗N, the g = 0 ground state of equilibrium models.
QuantumState all_down(std::shared_ptr<const FockBasis> basis);
/// |↑,0⟩^⊗N, the initial state of the dynamics experiments.
QuantumState all_up(std::shared_ptr<const FockBasis> basis);

}  // namespace rhlab
