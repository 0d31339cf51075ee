#include "rhlab/basis.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "rhlab/error.hpp"
#include "rhlab/estimate.hpp"

namespace rhlab {

BasisSpec BasisSpec::local(int n_ions, int cutoff, ParitySector sector) {
    return BasisSpec{n_ions, Representation::local_modes, std::vector<int>(static_cast<std::size_t>(n_ions), cutoff),
                     sector};
}

BasisSpec BasisSpec::collective(std::vector<int> cutoffs, ParitySector sector) {
    const int n = static_cast<int>(cutoffs.size());
    return BasisSpec{n, Representation::collective_modes, std::move(cutoffs), sector};
}

void BasisSpec::validate() const {
    if (n_ions < 1) throw DomainError("basis needs at least one ion");
    if (static_cast<int>(cutoffs.size()) != n_ions)
        throw DomainError("basis needs one phonon cutoff per mode (" + std::to_string(n_ions) + ")");
    for (int c : cutoffs)
        if (c < 0) throw DomainError("phonon cutoffs must be nonnegative");
}

double BasisSpec::full_dimension() const { return std::exp2(estimate_dimension(n_ions, cutoffs).log2); }

FockBasis::FockBasis(BasisSpec spec, const ResourceBudget& budget) : spec_(std::move(spec)) {
    spec_.validate();
    const int n = spec_.n_ions;
    const DimensionEstimate est = estimate_dimension(n, spec_.cutoffs);
    const double sector_states = spec_.sector == ParitySector::full ? std::exp2(est.log2) : std::exp2(est.log2 - 1.0);
    if (n > budget.max_ions || sector_states > static_cast<double>(budget.max_states)) {
        std::ostringstream os;
        os << "basis of " << n << " ions needs about 2^" << est.log2 << " product states";
        if (spec_.sector != ParitySector::full) os << " (about " << sector_states << " in the parity sector)";
        os << ", over the budget of " << budget.max_states << " states / " << budget.max_ions << " ions";
        throw ResourceError(os.str());
    }

    if (spec_.representation == Representation::local_modes) {
        for (int i = 0; i < n; ++i) {
            dims_.push_back(2);
            dims_.push_back(spec_.cutoffs[static_cast<std::size_t>(i)] + 1);
        }
    } else {
        for (int i = 0; i < n; ++i) dims_.push_back(2);
        for (int k = 0; k < n; ++k) dims_.push_back(spec_.cutoffs[static_cast<std::size_t>(k)] + 1);
    }
    strides_.assign(dims_.size(), 1);
    for (int f = static_cast<int>(dims_.size()) - 2; f >= 0; --f)
        strides_[static_cast<std::size_t>(f)] = strides_[static_cast<std::size_t>(f) + 1] * dims_[static_cast<std::size_t>(f) + 1];
    full_size_ = strides_[0] * dims_[0];

    lookup_.assign(full_size_, -1);
    const int want = spec_.sector == ParitySector::even ? 1 : -1;
    for (std::uint64_t s = 0; s < full_size_; ++s) {
        if (spec_.sector != ParitySector::full && parity(s) != want) continue;
        lookup_[s] = static_cast<std::int64_t>(states_.size());
        states_.push_back(s);
    }
}

int FockBasis::spin_factor(int ion) const {
    return spec_.representation == Representation::local_modes ? 2 * ion : ion;
}

int FockBasis::mode_factor(int mode) const {
    return spec_.representation == Representation::local_modes ? 2 * mode + 1 : spec_.n_ions + mode;
}

int FockBasis::parity(std::uint64_t full) const {
    int p = 1;
    int total = 0;
    for (int i = 0; i < spec_.n_ions; ++i) {
        p *= spin(full, i);
        total += occupation(full, i);
    }
    return (total % 2 == 0) ? p : -p;
}

std::uint64_t FockBasis::product_index(const std::vector<int>& spins, const std::vector<int>& occupations) const {
    if (static_cast<int>(spins.size()) != spec_.n_ions || static_cast<int>(occupations.size()) != spec_.n_ions)
        throw DomainError("product state needs one spin and one occupation per ion");
    std::uint64_t idx = 0;
    for (int i = 0; i < spec_.n_ions; ++i) {
        const int s = spins[static_cast<std::size_t>(i)];
        if (s != 1 && s != -1) throw DomainError("spin values must be +1 (up) or -1 (down)");
        const int occ = occupations[static_cast<std::size_t>(i)];
        if (occ < 0 || occ > spec_.cutoffs[static_cast<std::size_t>(i)])
            throw DomainError("occupation " + std::to_string(occ) + " outside the cutoff of mode " + std::to_string(i));
        idx += stride(spin_factor(i)) * (s == 1 ? 0u : 1u);
        idx += stride(mode_factor(i)) * static_cast<std::uint64_t>(occ);
    }
    return idx;
}

QuantumState product_state(std::shared_ptr<const FockBasis> basis, const std::vector<int>& spins,
                           const std::vector<int>& occupations) {
    const std::int64_t k = basis->index_of(basis->product_index(spins, occupations));
    if (k < 0) throw DomainError("product state lies outside the basis parity sector");
    QuantumState psi{basis, CVec::Zero(static_cast<Eigen::Index>(basis->size())), 0.0};
    psi.amplitudes[k] = 1.0;
    return psi;
}

QuantumState all_down(std::shared_ptr<const FockBasis> basis) {
    const auto n = static_cast<std::size_t>(basis->n_ions());
    return product_state(basis, std::vector<int>(n, -1), std::vector<int>(n, 0));
}

QuantumState all_up(std::shared_ptr<const FockBasis> basis) {
    const auto n = static_cast<std::size_t>(basis->n_ions());
    return product_state(basis, std::vector<int>(n, 1), std::vector<int>(n, 0));
}

}  // namespace rhlab
