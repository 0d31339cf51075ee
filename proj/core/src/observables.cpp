#include "rhlab/observables.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "rhlab/error.hpp"

namespace rhlab {

namespace {

using cd = std::complex<double>;

const FockBasis& basis_of(const QuantumState& psi) {
    if (!psi.basis) throw DomainError("state has no basis");
    if (static_cast<std::size_t>(psi.amplitudes.size()) != psi.basis->size())
        throw DomainError("state vector does not match its basis");
    return *psi.basis;
}

void check_ion(const FockBasis& b, int i) {
    if (i < 0 || i >= b.n_ions())
        throw DomainError("ion index " + std::to_string(i) + " outside [0, " + std::to_string(b.n_ions()) + ")");
}

// Spin-flip image of product state s at ion i, with the matrix elements of
// σ_x and σ_y connecting them: ⟨flip|σ|s⟩.
struct Flip {
    std::uint64_t target;
    cd x;
    cd y;
};

Flip flip(const FockBasis& b, std::uint64_t s, int i) {
    const std::uint64_t stride = b.stride(b.spin_factor(i));
    if (b.spin(s, i) == 1) return {s + stride, 1.0, cd(0.0, 1.0)};  // σ_y|↑⟩ = i|↓⟩
    return {s - stride, 1.0, cd(0.0, -1.0)};                         // σ_y|↓⟩ = −i|↑⟩
}

// ⟨ψ| σ_a^i σ_b^j |ψ⟩ for all a, b ∈ {x, y}, or single-site moments when j < 0.
struct Moments {
    cd x = 0.0, y = 0.0;
    cd xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;
};

Moments moments(const QuantumState& psi, int i, int j) {
    const FockBasis& b = basis_of(psi);
    Moments m;
    for (std::size_t k = 0; k < b.size(); ++k) {
        const cd amp = psi.amplitudes[static_cast<Eigen::Index>(k)];
        if (amp == 0.0) continue;
        const std::uint64_t s = b.full_index(k);
        if (j < 0) {
            const Flip f = flip(b, s, i);
            const auto t = b.index_of(f.target);
            if (t < 0) continue;
            const cd c = std::conj(psi.amplitudes[t]) * amp;
            m.x += c * f.x;
            m.y += c * f.y;
        } else {
            const Flip fj = flip(b, s, j);
            const Flip fi = flip(b, fj.target, i);
            const auto t = b.index_of(fi.target);
            if (t < 0) continue;
            const cd c = std::conj(psi.amplitudes[t]) * amp;
            m.xx += c * fi.x * fj.x;
            m.xy += c * fi.x * fj.y;
            m.yx += c * fi.y * fj.x;
            m.yy += c * fi.y * fj.y;
        }
    }
    return m;
}

}  // namespace

double sigma_x(const QuantumState& psi, int ion) {
    check_ion(basis_of(psi), ion);
    return moments(psi, ion, -1).x.real();
}

double sigma_y(const QuantumState& psi, int ion) {
    check_ion(basis_of(psi), ion);
    return moments(psi, ion, -1).y.real();
}

double sigma_z(const QuantumState& psi, int ion) {
    const FockBasis& b = basis_of(psi);
    check_ion(b, ion);
    double s = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k)
        s += b.spin(b.full_index(k), ion) * std::norm(psi.amplitudes[static_cast<Eigen::Index>(k)]);
    return s;
}

double mean_sigma_z(const QuantumState& psi) {
    const int n = basis_of(psi).n_ions();
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += sigma_z(psi, i);
    return s / n;
}

SpinPairMoments spin_pair_moments(const QuantumState& psi, int i, int j) {
    const FockBasis& b = basis_of(psi);
    check_ion(b, i);
    check_ion(b, j);
    if (i == j) throw DomainError("pair moments need two distinct ions");
    const Moments mi = moments(psi, i, -1);
    const Moments mj = moments(psi, j, -1);
    const Moments mp = moments(psi, i, j);
    return {mi.x.real(), mi.y.real(), mj.x.real(), mj.y.real(), mp.xx.real(), mp.xy.real(), mp.yx.real(), mp.yy.real()};
}

double correlation(const QuantumState& psi, int i, int j) {
    const SpinPairMoments m = spin_pair_moments(psi, i, j);
    return m.xx - m.sx_i * m.sx_j;
}

double parity_expectation(const QuantumState& psi) {
    const FockBasis& b = basis_of(psi);
    double p = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k)
        p += b.parity(b.full_index(k)) * std::norm(psi.amplitudes[static_cast<Eigen::Index>(k)]);
    return p;
}

Eigen::MatrixXcd phonon_density(const QuantumState& psi) {
    const FockBasis& b = basis_of(psi);
    const int n = b.n_ions();
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t k = 0; k < b.size(); ++k) {
        const cd amp = psi.amplitudes[static_cast<Eigen::Index>(k)];
        if (amp == 0.0) continue;
        const std::uint64_t s = b.full_index(k);
        for (int j = 0; j < n; ++j) {
            const int nj = b.occupation(s, j);
            if (nj == 0) continue;
            d(j, j) += std::norm(amp) * double(nj);
            // ⟨ψ| c_i† c_j |ψ⟩ picks up ψ*(s + e_i − e_j) ψ(s) √(n_j (n_i+1)).
            for (int i = 0; i < n; ++i) {
                if (i == j) continue;
                const int ni = b.occupation(s, i);
                if (ni >= b.spec().cutoffs[static_cast<std::size_t>(i)]) continue;
                const auto t = b.index_of(s + b.stride(b.mode_factor(i)) - b.stride(b.mode_factor(j)));
                if (t < 0) continue;
                d(i, j) += std::conj(psi.amplitudes[t]) * amp * std::sqrt(double(nj) * (ni + 1));
            }
        }
    }
    return d;
}

PhononNumbers phonon_numbers(const QuantumState& psi, const ModeSpectrum& modes) {
    const FockBasis& b = basis_of(psi);
    const int n = b.n_ions();
    if (modes.size() != n) throw DomainError("mode spectrum size does not match the state");
    const Eigen::MatrixXcd d = phonon_density(psi);
    const Eigen::MatrixXcd v = modes.vectors.cast<cd>();
    // b_k = Σ_i v_ik a_i, so ⟨b†b⟩ = Vᵀ D V and ⟨a†a⟩ = V D Vᵀ.
    const bool local = b.spec().representation == Representation::local_modes;
    const Eigen::MatrixXcd other = local ? Eigen::MatrixXcd(v.transpose() * d * v) : Eigen::MatrixXcd(v * d * v.transpose());
    PhononNumbers out;
    for (int k = 0; k < n; ++k) {
        const double own = d(k, k).real();
        const double rotated = std::max(0.0, other(k, k).real());
        out.local.push_back(local ? own : rotated);
        out.collective.push_back(local ? rotated : own);
    }
    return out;
}

std::vector<double> top_level_population(const QuantumState& psi) {
    const FockBasis& b = basis_of(psi);
    std::vector<double> pop(static_cast<std::size_t>(b.n_ions()), 0.0);
    for (std::size_t k = 0; k < b.size(); ++k) {
        const std::uint64_t s = b.full_index(k);
        for (int m = 0; m < b.n_ions(); ++m)
            if (b.occupation(s, m) == b.spec().cutoffs[static_cast<std::size_t>(m)])
                pop[static_cast<std::size_t>(m)] += std::norm(psi.amplitudes[static_cast<Eigen::Index>(k)]);
    }
    return pop;
}

double entanglement_entropy(const QuantumState& psi, int cut) {
    const FockBasis& b = basis_of(psi);
    if (b.spec().representation != Representation::local_modes)
        throw DomainError("entanglement entropy needs the local-mode representation");
    if (cut < 0 || cut > b.n_ions()) throw DomainError("bipartition cut outside the chain");
    if (cut == 0 || cut == b.n_ions()) return 0.0;

    // Factors are laid out site by site, so the left block is the leading digits.
    const std::uint64_t right_dim = b.stride(2 * cut - 1);
    const std::uint64_t left_dim = b.full_size() / right_dim;
    const bool left_small = left_dim <= right_dim;
    const std::uint64_t small = left_small ? left_dim : right_dim;
    if (small > 8192) throw ResourceError("reduced density matrix of dimension " + std::to_string(small) + " is too large");

    // ρ = M M† on the smaller side; M is stored column-wise by the larger index.
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(small), static_cast<Eigen::Index>(small));
    std::vector<std::vector<std::pair<std::uint64_t, cd>>> by_big(left_small ? right_dim : left_dim);
    for (std::size_t k = 0; k < b.size(); ++k) {
        const cd amp = psi.amplitudes[static_cast<Eigen::Index>(k)];
        if (amp == 0.0) continue;
        const std::uint64_t s = b.full_index(k);
        const std::uint64_t l = s / right_dim;
        const std::uint64_t r = s % right_dim;
        by_big[left_small ? r : l].emplace_back(left_small ? l : r, amp);
    }
    for (const auto& col : by_big)
        for (const auto& [a, va] : col)
            for (const auto& [c, vc] : col) rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) += va * std::conj(vc);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()[i];
        if (p > 1e-16) s -= p * std::log2(p);
    }
    return s;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
    if (a.amplitudes.size() != b.amplitudes.size()) throw DomainError("fidelity between states of different bases");
    return std::norm(a.amplitudes.dot(b.amplitudes));
}

}  // namespace rhlab
