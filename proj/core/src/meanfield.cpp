#include "rhlab/meanfield.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "rhlab/error.hpp"

namespace rhlab {

double MeanFieldSolution::mean_spin_x() const {
    if (spin_x.empty()) return 0.0;
    return std::accumulate(spin_x.begin(), spin_x.end(), 0.0) / static_cast<double>(spin_x.size());
}

double critical_coupling(double spin_freq, double lowest_mode) {
    if (!(spin_freq > 0.0) || !(lowest_mode > 0.0))
        throw DomainError("critical coupling needs positive spin frequency and lowest mode frequency");
    return 0.5 * std::sqrt(spin_freq * lowest_mode);
}

MeanFieldSolution solve_b0(double g, double spin_freq, double lowest_mode, const Vec& v, double rel_tol) {
    if (!(lowest_mode > 0.0)) throw DomainError("mean-field solver needs a positive lowest mode frequency");
    if (!(spin_freq > 0.0)) throw DomainError("mean-field solver needs a positive spin frequency");
    const auto n = static_cast<std::size_t>(v.size());

    MeanFieldSolution sol;
    sol.spin_x.assign(n, 0.0);
    sol.spin_angles.assign(n, std::numbers::pi / 2);
    g = std::abs(g);

    const double w0sq = spin_freq * spin_freq;
    auto rhs = [&](double b) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const double gv2 = g * g * v[i] * v[i];
            s += 4.0 * gv2 / (lowest_mode * std::sqrt(w0sq + 16.0 * gv2 * b * b));
        }
        return s;
    };

    if (4.0 * g * g * v.squaredNorm() / (lowest_mode * spin_freq) <= 1.0) return sol;

    // rhs(b) ≤ Σ g|v_i| / (δ₀ b), so rhs(hi) < 1 at twice that bound.
    double lo = 0.0;
    double hi = 2.0 * g * v.cwiseAbs().sum() / lowest_mode;
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (rhs(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    const double b = 0.5 * (lo + hi);
    sol.b0_amplitude = b;
    sol.branch = Branch::broken;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = 4.0 * v[static_cast<Eigen::Index>(i)] * g * b;
        sol.spin_angles[i] = std::atan2(spin_freq, h);
        sol.spin_x[i] = -std::cos(sol.spin_angles[i]);
    }
    return sol;
}

MeanFieldSolution solve_b0(const RHModel& model, double rel_tol) {
    const ModeSpectrum spec = model.modes();
    MeanFieldSolution sol = solve_b0(model.coupling, model.spin_freq, spec.freqs[0], spec.vectors.col(0), rel_tol);
    sol.other_modes = other_mode_amplitudes(sol, model.coupling, model.spin_freq, spec);
    return sol;
}

std::vector<double> other_mode_amplitudes(const MeanFieldSolution& solution, double g, double /*spin_freq*/,
                                          const ModeSpectrum& spectrum) {
    const int n = spectrum.size();
    std::vector<double> amps(static_cast<std::size_t>(n), 0.0);
    if (solution.branch == Branch::trivial) return amps;
    if (static_cast<int>(solution.spin_x.size()) != n)
        throw DomainError("mean-field solution and mode spectrum disagree on the number of sites");
    g = std::abs(g);
    for (int k = 0; k < n; ++k) {
        if (spectrum.freqs[k] == 0.0)
            throw NumericalError("collective mode " + std::to_string(k) + " has zero frequency (singular mode)");
        double drive = 0.0;
        for (int i = 0; i < n; ++i) drive += spectrum.vectors(i, k) * solution.spin_x[static_cast<std::size_t>(i)];
        amps[static_cast<std::size_t>(k)] = -g * drive / spectrum.freqs[k];
    }
    return amps;
}

}  // namespace rhlab
