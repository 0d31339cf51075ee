#pragma once

#include <functional>
#include <vector>

#include "rhlab/hamiltonian.hpp"

namespace rhlab {

/// Coupling as a function of time (seconds → rad/s).
using CouplingSchedule = std::function<double(double)>;

struct EvolveOptions {
    int krylov_dim = 30;
    /// Bound on the a-posteriori Krylov error of each accepted substep.
    double tolerance = 1e-12;
    /// Longest step of the fourth-order Magnus integrator used for a
    /// time-dependent coupling.
    double max_magnus_step = 2e-6;
    /// Substeps shorter than this fraction of the requested span abort the run.
    double min_step_fraction = 1e-12;
};

struct EvolveStats {
    long steps = 0;
    long matvecs = 0;
    double max_norm_drift = 0.0;  // largest |‖ψ‖ change| over one step
    double smallest_step = 0.0;
};

/// Called at every grid time with the state at that time.
using Observer = std::function<void(const QuantumState&)>;

/// Integrate i dψ/dt = H(g(t)) ψ through the ascending times `t_grid`
/// (all ≥ psi.time), invoking `observe` at each of them. An empty schedule
/// means the constant coupling of `h`. On return psi holds the state at the
/// last grid time.
EvolveStats evolve(QuantumState& psi, const HamiltonianOperator& h, const std::vector<double>& t_grid,
                   const Observer& observe, const CouplingSchedule& schedule = {}, const EvolveOptions& options = {});

/// ψ ← exp(−i dt H(g)) ψ by adaptive Krylov substeps.
EvolveStats propagate_constant(CVec& psi, const HamiltonianOperator& h, double g, double dt,
                               const EvolveOptions& options = {});

}  // namespace rhlab
