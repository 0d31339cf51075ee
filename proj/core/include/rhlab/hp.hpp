#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rhlab/chain.hpp"

namespace rhlab {

/// Heisenberg equations dv/dt = A v of the Holstein–Primakoff-linearized
/// model, for v = (s₁, s₁†, a₁, a₁†, …, s_N, s_N†, a_N, a_N†).
struct LinearizedSystem {
    Eigen::MatrixXcd a;
    RHModel model;

    int n_sites() const { return static_cast<int>(a.rows() / 4); }

    static int s(int i) { return 4 * i; }
    static int s_dag(int i) { return 4 * i + 1; }
    static int b(int i) { return 4 * i + 2; }
    static int b_dag(int i) { return 4 * i + 3; }
};

LinearizedSystem build_A(const RHModel& model);

struct Propagation {
    Eigen::MatrixXcd b;
    /// max Re λ · t: the log of the largest growth factor.
    double growth_exponent = 0.0;
    std::vector<std::string> warnings;
};

/// B(t) = e^{At}.
Propagation propagate(const LinearizedSystem& sys, double t);

/// ⟨σ_z^i⟩ for the all-up initial state (vacuum of every s and a) from B(t).
double sigma_z_hp(const Eigen::MatrixXcd& b, int i);
double sigma_z_hp(const LinearizedSystem& sys, int i, double t);

/// ⟨σ_z^i⟩(t) on a time grid, indexed [time][ion].
std::vector<std::vector<double>> sigma_z_hp_trajectory(const LinearizedSystem& sys, const std::vector<double>& times);

/// Σ_i ⟨s_i†s_i + a_i†a_i⟩ from the vacuum.
double total_excitation(const Eigen::MatrixXcd& b);

struct StabilityReport {
    bool stable = true;
    double max_real_part = 0.0;
    double tolerance = 0.0;
    Eigen::VectorXcd eigenvalues;
};

/// Stable iff every eigenvalue of A has Re λ ≤ 1e-9 ‖A‖.
StabilityReport stability(const LinearizedSystem& sys);

/// Classification over a grid: rows are common shifts of the site
/// frequencies ω_i (a change of the sideband detuning difference), columns
/// are couplings g.
struct StabilityMap {
    std::vector<double> site_shifts;
    std::vector<double> couplings;
    std::vector<std::vector<bool>> stable;
    std::vector<std::vector<double>> max_real_part;
};

StabilityMap stability_map(const RHModel& base, const std::vector<double>& couplings,
                           const std::vector<double>& site_shifts = {0.0});

/// Smallest unstable coupling in [g_lo, g_hi], bracketed by bisection to
/// `tolerance`, assuming g_lo is stable and g_hi unstable; empty otherwise.
std::optional<double> instability_threshold(const RHModel& model, double g_lo, double g_hi, double tolerance);

}  // namespace rhlab
