#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rhlab/hamiltonian.hpp"

namespace rhlab {

struct LanczosOptions {
    int krylov_dim = 80;
    int max_restarts = 400;
    /// Residual ‖Hx − θx‖ relative to the spectral scale seen by the Krylov space.
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
    /// 1: ground state only. 2: also the next state of the same sector.
    int n_states = 2;
};

struct Eigenpair {
    double value = 0.0;
    Vec vector;
    double residual = 0.0;
    int matvecs = 0;
};

/// Lowest eigenpair of a real symmetric operator by restarted Lanczos with
/// full reorthogonalization; the search is kept orthogonal to `deflate`.
Eigenpair lowest_eigenpair(const std::function<void(const Vec&, Vec&)>& apply, std::size_t dim,
                           const std::vector<Vec>& deflate, const LanczosOptions& options);

struct GroundStateResult {
    double energy = 0.0;
    QuantumState state;
    /// Next level in the same parity sector, when requested.
    std::optional<double> excited_energy;
    std::optional<QuantumState> excited_state;
    int matvecs = 0;

    std::optional<double> gap() const {
        if (!excited_energy) return std::nullopt;
        return *excited_energy - energy;
    }
};

/// Lowest states of H(g) in the basis's parity sector. Refuses models whose
/// collective spectrum is not positive.
GroundStateResult ground_state(const HamiltonianOperator& h, const LanczosOptions& options = {});

}  // namespace rhlab
