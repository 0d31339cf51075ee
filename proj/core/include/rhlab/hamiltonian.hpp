#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rhlab/basis.hpp"
#include "rhlab/chain.hpp"

namespace rhlab {

/// Compressed-row real sparse matrix.
struct SparseRows {
    std::vector<std::int64_t> row_start{0};
    std::vector<std::int32_t> cols;
    std::vector<double> vals;

    std::size_t rows() const { return row_start.size() - 1; }
    std::size_t nonzeros() const { return vals.size(); }
    double row_abs_sum(std::size_t r) const;
};

/// H(g) = H₀ + g V in a FockBasis. H₀ holds the spin splitting, mode
/// energies and (local representation) hoppings; V is the σ_x(a + a†)
/// coupling per unit g. In the collective representation the hoppings are
/// absorbed into the diagonal δ_k.
class HamiltonianOperator {
public:
    HamiltonianOperator(const RHModel& model, std::shared_ptr<const FockBasis> basis);

    const RHModel& model() const { return model_; }
    const ModeSpectrum& modes() const { return modes_; }
    const std::shared_ptr<const FockBasis>& basis() const { return basis_; }
    std::size_t size() const { return basis_->size(); }
    double coupling() const { return model_.coupling; }

    /// y = H(g) x.
    void apply(const Vec& x, Vec& y, double g) const;
    void apply(const CVec& x, CVec& y, double g) const;
    void apply(const Vec& x, Vec& y) const { apply(x, y, coupling()); }
    void apply(const CVec& x, CVec& y) const { apply(x, y, coupling()); }

    /// Gershgorin bound on ‖H(g)‖.
    double norm_bound(double g) const;
    double expectation(const QuantumState& psi, double g) const;
    double expectation(const QuantumState& psi) const { return expectation(psi, coupling()); }

    /// Matrix element ⟨row|H(g)|col⟩ by lookup.
    double element(std::size_t row, std::size_t col, double g) const;
    /// Dense copy, for small bases.
    Mat dense(double g) const;

    const SparseRows& diagonal_part() const { return h0_; }
    const SparseRows& coupling_part() const { return v_; }

private:
    RHModel model_;
    ModeSpectrum modes_;
    std::shared_ptr<const FockBasis> basis_;
    SparseRows h0_;
    SparseRows v_;
};

/// Enumerate a basis; throws ResourceError, quoting the dimension
/// estimate, when it exceeds the budget.
std::shared_ptr<const FockBasis> make_basis(const BasisSpec& spec, const ResourceBudget& budget = {});

}  // namespace rhlab
