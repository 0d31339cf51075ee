#include "rhlab/quench.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rhlab/error.hpp"
#include "rhlab/observables.hpp"

namespace rhlab {

QuenchSchedule QuenchSchedule::exponential(double g_max, double tau, std::optional<double> duration) {
    QuenchSchedule s{RampShape::exponential_ramp, tau, g_max, duration.value_or(5.0 * tau)};
    s.validate();
    return s;
}

QuenchSchedule QuenchSchedule::reversed(double g_max, double tau, std::optional<double> forward) {
    QuenchSchedule s{RampShape::reverse_appended, tau, g_max, 2.0 * forward.value_or(5.0 * tau)};
    s.validate();
    return s;
}

QuenchSchedule QuenchSchedule::constant(double g, double duration) {
    QuenchSchedule s{RampShape::constant, 0.0, g, duration};
    s.validate();
    return s;
}

void QuenchSchedule::validate() const {
    if (!(g_max >= 0.0)) throw DomainError("quench g_max must be nonnegative");
    if (!(t_total >= 0.0)) throw DomainError("quench duration must be nonnegative");
    if (shape != RampShape::constant && !(tau > 0.0)) throw DomainError("ramp time constant tau must be positive");
}

double QuenchSchedule::operator()(double t) const {
    switch (shape) {
        case RampShape::constant:
            return g_max;
        case RampShape::exponential_ramp:
            return (1.0 - std::exp(-std::max(t, 0.0) / tau)) * g_max;
        case RampShape::reverse_appended: {
            const double u = std::clamp(std::min(t, t_total - t), 0.0, 0.5 * t_total);
            return (1.0 - std::exp(-u / tau)) * g_max;
        }
    }
    return 0.0;
}

double g_at(const QuenchSchedule& schedule, double t) { return schedule(t); }

std::vector<double> sample_times(const QuenchSchedule& schedule, int points_per_ramp) {
    if (points_per_ramp < 1) throw DomainError("need at least one sample interval per ramp");
    const int n = points_per_ramp * schedule.segments();
    std::vector<double> t(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) t[static_cast<std::size_t>(k)] = schedule.t_total * k / n;
    return t;
}

QuenchResult run_quench(const RHModel& model, const QuenchSchedule& schedule, BasisSpec spec,
                        const QuenchOptions& options) {
    schedule.validate();
    const ModeSpectrum modes = model.modes();
    if (!(modes.freqs.minCoeff() > 0.0))
        throw DomainError("quench studies need an equilibrium model (all collective modes positive)");
    const int n = model.n_sites();
    if (options.adiabaticity && n > 4) throw ResourceError("adiabaticity diagnostics are limited to N <= 4");
    if (spec.sector == ParitySector::full) spec.sector = n % 2 == 0 ? ParitySector::even : ParitySector::odd;

    const auto basis = make_basis(spec);
    const bool constant = schedule.shape == RampShape::constant;
    const HamiltonianOperator h(model.with_coupling(constant ? schedule.g_max : 0.0), basis);
    QuenchResult result;
    result.final_state = all_down(basis);
    result.max_top_level_population.assign(static_cast<std::size_t>(n), 0.0);

    auto observe = [&](const QuantumState& psi) {
        QuenchSample s;
        s.time = psi.time;
        s.coupling = schedule(psi.time);
        for (int i = 0; i < n; ++i) s.sigma_z.push_back(sigma_z(psi, i));
        s.mean_sigma_z = mean_sigma_z(psi);
        s.correlations = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s.correlations(i, j) = s.correlations(j, i) = correlation(psi, i, j);
        const auto top = top_level_population(psi);
        for (int m = 0; m < n; ++m)
            result.max_top_level_population[static_cast<std::size_t>(m)] =
                std::max(result.max_top_level_population[static_cast<std::size_t>(m)], top[static_cast<std::size_t>(m)]);
        if (options.adiabaticity) {
            const HamiltonianOperator hg(model.with_coupling(s.coupling), basis);
            const GroundStateResult gs = ground_state(hg, options.lanczos);
            s.fidelity = fidelity(psi, gs.state);
            s.excitation_energy = hg.expectation(psi) - gs.energy;
        }
        result.samples.push_back(std::move(s));
    };

    const CouplingSchedule g = [&schedule](double t) { return schedule(t); };
    result.stats = evolve(result.final_state, h, sample_times(schedule, options.points_per_ramp), observe,
                          constant ? CouplingSchedule{} : g, options.evolve);
    for (int m = 0; m < n; ++m) {
        const double p = result.max_top_level_population[static_cast<std::size_t>(m)];
        if (p > 1e-3) {
            std::ostringstream os;
            os << "mode " << m << " reached top-level population " << p << " (> 0.1%); raise its phonon cutoff";
            result.warnings.push_back(os.str());
        }
    }
    return result;
}

AdiabaticityReport adiabaticity_report(const QuenchResult& result) {
    AdiabaticityReport r;
    for (const QuenchSample& s : result.samples) {
        if (!s.fidelity) throw DomainError("quench was run without adiabaticity tracking");
        r.times.push_back(s.time);
        r.couplings.push_back(s.coupling);
        r.fidelity.push_back(*s.fidelity);
        r.excitation_energy.push_back(*s.excitation_energy);
    }
    return r;
}

AdiabaticityReport adiabaticity_report(const RHModel& model, const QuenchSchedule& schedule, const BasisSpec& basis,
                                       QuenchOptions options) {
    options.adiabaticity = true;
    return adiabaticity_report(run_quench(model, schedule, basis, options));
}

std::vector<ScaledPoint> rescale_for_crossing(const std::vector<double>& correlations, int n_ions,
                                              const std::vector<double>& couplings, double g_c, double g_c_mf,
                                              double beta, double nu) {
    if (correlations.size() != couplings.size()) throw DomainError("one coupling per correlation value is required");
    if (n_ions < 1 || !(nu > 0.0) || g_c_mf == 0.0) throw DomainError("invalid scaling parameters");
    const double ny = std::pow(n_ions, 2.0 * beta / nu);
    const double nx = std::pow(n_ions, 1.0 / nu);
    std::vector<ScaledPoint> out;
    for (std::size_t k = 0; k < couplings.size(); ++k)
        out.push_back({nx * (couplings[k] - g_c) / g_c_mf, ny * correlations[k]});
    return out;
}

std::vector<ScaledPoint> unscale(const std::vector<ScaledPoint>& points, int n_ions, double g_c, double g_c_mf,
                                 double beta, double nu) {
    if (n_ions < 1 || !(nu > 0.0) || g_c_mf == 0.0) throw DomainError("invalid scaling parameters");
    const double ny = std::pow(n_ions, 2.0 * beta / nu);
    const double nx = std::pow(n_ions, 1.0 / nu);
    std::vector<ScaledPoint> out;
    for (const ScaledPoint& p : points) out.push_back({g_c + p.x * g_c_mf / nx, p.y / ny});
    return out;
}

std::optional<double> crossing_point(const std::vector<double>& grid, const std::vector<double>& a,
                                     const std::vector<double>& b) {
    if (a.size() != grid.size() || b.size() != grid.size()) throw DomainError("curves must share the sample grid");
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double d0 = a[k] - b[k];
        const double d1 = a[k + 1] - b[k + 1];
        if (d0 == 0.0) return grid[k];
        if ((d0 < 0.0) != (d1 < 0.0) && d1 != 0.0) return grid[k] + (grid[k + 1] - grid[k]) * d0 / (d0 - d1);
        if (d1 == 0.0) return grid[k + 1];
    }
    return std::nullopt;
}

}  // namespace rhlab
