#include "run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "rhlab/error.hpp"
#include "rhlab/estimate.hpp"
#include "rhlab/evolve.hpp"
#include "rhlab/hp.hpp"
#include "rhlab/lanczos.hpp"
#include "rhlab/meanfield.hpp"
#include "rhlab/measure.hpp"
#include "rhlab/observables.hpp"
#include "rhlab/presets.hpp"
#include "rhlab/quench.hpp"

namespace rhlab::cli {

namespace {

std::string pair_label(int i, int j) { return std::to_string(i) + "-" + std::to_string(j); }

UnitConvention units_of(const json& p) { return UnitConvention::from(p); }

RHModel model_of(const json& p) {
    if (!p.contains("model")) throw DomainError("missing \"model\"");
    RHModel m = parse_model(p.at("model"));
    if (p.contains("g")) m.coupling = units_of(p).to_angular(p.at("g").get<double>());
    return m;
}

ParitySector sector_of(int parity) { return parity > 0 ? ParitySector::even : ParitySector::odd; }

// ---------------------------------------------------------------- chain

void run_chain(const RunConfig& cfg, RunBundle& b) {
    const ChainSpec spec = parse_chain(cfg.params.at("chain"));
    const MotionalModel mm = motional_model(spec.geometry);
    const int n = spec.geometry.n_ions();
    CsvTable t({"quantity", "i", "j", "value"});
    for (int i = 0; i + 1 < n; ++i) t.add({"spacing_um", long(i), long(i + 1), to_um(spec.geometry.spacings[static_cast<std::size_t>(i)])});
    for (int i = 0; i < n; ++i) t.add({"local_freq_mhz", long(i), long(i), to_khz(mm.local_freqs[i]) / 1e3});
    for (int i = 0; i < n; ++i) t.add({"corrected_freq_mhz", long(i), long(i), to_khz(mm.corrected_freqs[i]) / 1e3});
    const ModeSpectrum lab = collective_modes(mm);
    for (int k = 0; k < n; ++k) t.add({"lab_mode_freq_mhz", long(k), long(k), to_khz(lab.freqs[k]) / 1e3});
    json summary{{"n_ions", n}, {"fitted", spec.fitted}, {"warnings", spec.warnings}};
    if (spec.has_detunings) {
        const RHModel r = interaction_picture(mm, spec.blue_detuning, spec.red_detuning);
        const ModeSpectrum modes = r.modes();
        t.add({"spin_freq_khz", -1L, -1L, to_khz(r.spin_freq)});
        for (int i = 0; i < n; ++i) t.add({"site_freq_khz", long(i), long(i), to_khz(r.site_freqs[i])});
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) t.add({"hopping_khz", long(i), long(j), to_khz(r.hoppings(i, j))});
        for (int k = 0; k < n; ++k) t.add({"mode_freq_khz", long(k), long(k), to_khz(modes.freqs[k])});
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) t.add({"mode_vector", long(i), long(k), modes.vectors(i, k)});
        summary["equilibrium"] = r.equilibrium();
    }
    b.add_csv("chain.csv", t);
    b.add_json("chain.json", summary);
    for (const auto& w : spec.warnings) b.log.push_back("warning: " + w);
}

// ---------------------------------------------------------------- calibrate

void run_calibrate(const RunConfig& cfg, RunBundle& b) {
    FitOptions opt;
    bool symmetric = false;
    ChainGeometry tmpl;
    const SpectrumMeasurement meas = parse_spectrum(cfg.params.at("spectrum"), opt, symmetric, tmpl);
    const SpacingFit fit = fit_spacings(meas, tmpl, symmetric, opt);
    CsvTable t({"spacing", "spacing_um"});
    for (std::size_t i = 0; i < fit.spacings.size(); ++i) t.add({long(i), to_um(fit.spacings[i])});
    b.add_csv("spacings.csv", t);
    ChainGeometry g = tmpl;
    g.spacings = fit.spacings;
    std::vector<double> model_mhz;
    if (!fit.spacings.empty())
        for (double f : model_spectrum(g)) model_mhz.push_back(to_khz(f) / 1e3);
    std::vector<double> spacings_um;
    for (double z : fit.spacings) spacings_um.push_back(to_um(z));
    b.add_json("fit.json", json{{"spacings_um", spacings_um},
                                {"residual_hz", to_hz(fit.residual)},
                                {"converged", fit.converged},
                                {"iterations", fit.iterations},
                                {"symmetric", symmetric},
                                {"model_modes_mhz", model_mhz},
                                {"warnings", fit.warnings}});
    for (const auto& w : fit.warnings) b.log.push_back("warning: " + w);
}

// ---------------------------------------------------------------- meanfield

void run_meanfield(const RunConfig& cfg, RunBundle& b) {
    const json& p = cfg.params;
    const RHModel model = model_of(p);
    const UnitConvention u = units_of(p);
    const ModeSpectrum modes = model.modes();
    CsvTable t({"g_khz", "b0", "mean_sigma_x", "branch", "mean_abs_sigma_x"});
    for (double g : parse_scan(p.value("g_scan", std::string("0:10:0.5")))) {
        const MeanFieldSolution s = solve_b0(model.with_coupling(u.to_angular(g)));
        double abs_sx = 0.0;
        for (double x : s.spin_x) abs_sx += std::abs(x) / static_cast<double>(s.spin_x.size());
        t.add({g, s.b0_amplitude, s.mean_spin_x(), std::string(s.branch == Branch::broken ? "broken" : "trivial"), abs_sx});
    }
    b.add_csv("meanfield.csv", t);
    b.add_json("meanfield.json", json{{"critical_coupling", u.from_angular(critical_coupling(model.spin_freq, modes.freqs[0]))},
                                      {"lowest_mode", u.from_angular(modes.freqs[0])},
                                      {"spin_freq", u.from_angular(model.spin_freq)}});
}

// ---------------------------------------------------------------- ground

void run_ground(const RunConfig& cfg, RunBundle& b) {
    const json& p = cfg.params;
    const RHModel model = model_of(p);
    const UnitConvention u = units_of(p);
    const int n = model.n_sites();
    const ModeSpectrum modes = model.modes();
    BasisSpec spec = parse_basis(p.value("basis", json::object()), n);
    if (spec.sector == ParitySector::full && p.value("basis", json::object()).value("sector", std::string("auto")) == "auto")
        spec.sector = sector_of(n % 2 == 0 ? 1 : -1);
    const auto basis = make_basis(spec);

    std::vector<double> gs;
    if (p.contains("g_scan")) {
        gs = parse_scan(p.at("g_scan").get<std::string>());
    } else if (p.contains("g_scan_over_gc")) {
        const double gc = critical_coupling(model.spin_freq, modes.freqs[0]);
        for (double r : parse_scan(p.at("g_scan_over_gc").get<std::string>())) gs.push_back(u.from_angular(r * gc));
    } else {
        gs.push_back(u.from_angular(model.coupling));
    }
    LanczosOptions lo;
    lo.seed = cfg.seed;
    lo.n_states = p.value("states", 2);

    CsvTable t({"g_khz", "quantity", "i", "j", "value"});
    for (double g : gs) {
        const HamiltonianOperator h(model.with_coupling(u.to_angular(g)), basis);
        const GroundStateResult r = ground_state(h, lo);
        const QuantumState& psi = r.state;
        t.add({g, "energy", -1L, -1L, u.from_angular(r.energy)});
        if (r.gap()) t.add({g, "gap", -1L, -1L, u.from_angular(*r.gap())});
        t.add({g, "mean_sigma_z", -1L, -1L, mean_sigma_z(psi)});
        for (int i = 0; i < n; ++i) t.add({g, "sigma_z", long(i), long(i), sigma_z(psi, i)});
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) t.add({g, "correlation", long(i), long(j), correlation(psi, i, j)});
        const PhononNumbers ph = phonon_numbers(psi, modes);
        for (int i = 0; i < n; ++i) t.add({g, "phonons_local", long(i), long(i), ph.local[static_cast<std::size_t>(i)]});
        for (int k = 0; k < n; ++k) t.add({g, "phonons_mode", long(k), long(k), ph.collective[static_cast<std::size_t>(k)]});
    }
    b.add_csv("ground.csv", t);
    b.add_json("ground.json", json{{"dimension", basis->size()},
                                   {"critical_coupling_mf", u.from_angular(critical_coupling(model.spin_freq, modes.freqs[0]))}});
}

// ---------------------------------------------------------------- dynamics

struct TrajectoryOptions {
    bool entropy = true;
    bool pairs = true;
};

// Appends every recorded observable of psi at its time.
void record(CsvTable& t, const QuantumState& psi, const HamiltonianOperator& h, const TrajectoryOptions& o,
            const UnitConvention& u) {
    const int n = psi.basis->n_ions();
    const double tu = psi.time * 1e6;
    for (int i = 0; i < n; ++i) {
        t.add({tu, std::to_string(i), "sz", sigma_z(psi, i)});
        t.add({tu, std::to_string(i), "sx", sigma_x(psi, i)});
        t.add({tu, std::to_string(i), "sy", sigma_y(psi, i)});
    }
    if (o.pairs)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const SpinPairMoments m = spin_pair_moments(psi, i, j);
                const std::string s = pair_label(i, j);
                t.add({tu, s, "xx", m.xx});
                t.add({tu, s, "xy", m.xy});
                t.add({tu, s, "yx", m.yx});
                t.add({tu, s, "yy", m.yy});
                t.add({tu, s, "C", m.xx - m.sx_i * m.sx_j});
            }
    const PhononNumbers ph = phonon_numbers(psi, h.modes());
    for (int i = 0; i < n; ++i) t.add({tu, std::to_string(i), "n_local", ph.local[static_cast<std::size_t>(i)]});
    for (int k = 0; k < n; ++k) t.add({tu, std::to_string(k), "n_mode", ph.collective[static_cast<std::size_t>(k)]});
    if (o.entropy && psi.basis->spec().representation == Representation::local_modes)
        t.add({tu, std::to_string(n / 2), "entropy", entanglement_entropy(psi, n / 2)});
    t.add({tu, "all", "mean_sz", mean_sigma_z(psi)});
    t.add({tu, "all", "norm", psi.norm()});
    t.add({tu, "all", "energy", u.from_angular(h.expectation(psi))});
    t.add({tu, "all", "parity", parity_expectation(psi)});
}

std::vector<double> time_grid(double t_max_us, double dt_us) {
    if (!(dt_us > 0.0) || !(t_max_us >= 0.0)) throw DomainError("need t_max >= 0 and dt > 0");
    std::vector<double> grid;
    const long steps = std::lround(std::floor(t_max_us / dt_us + 1e-9));
    for (long k = 0; k <= steps; ++k) grid.push_back(us(k * dt_us));
    return grid;
}

struct DynamicsRun {
    json summary;
    std::vector<std::vector<double>> sigma_z;  // [time][ion]
    std::vector<double> times;
};

DynamicsRun simulate(const RHModel& model, BasisSpec spec, bool up, const std::vector<double>& grid, CsvTable* table,
                     const TrajectoryOptions& o, const UnitConvention& u, bool auto_sector = true) {
    const int n = model.n_sites();
    if (auto_sector && spec.sector == ParitySector::full) spec.sector = sector_of(up ? 1 : (n % 2 == 0 ? 1 : -1));
    const auto basis = make_basis(spec);
    const HamiltonianOperator h(model, basis);
    QuantumState psi = up ? all_up(basis) : all_down(basis);
    const double e0 = h.expectation(psi);
    const double p0 = parity_expectation(psi);
    DynamicsRun out;
    double max_energy_drift = 0.0, max_parity_drift = 0.0, max_norm_error = 0.0;
    std::vector<double> leak(static_cast<std::size_t>(n), 0.0);
    auto observe = [&](const QuantumState& s) {
        std::vector<double> z;
        for (int i = 0; i < n; ++i) z.push_back(sigma_z(s, i));
        out.sigma_z.push_back(std::move(z));
        out.times.push_back(s.time);
        max_norm_error = std::max(max_norm_error, std::abs(s.norm() - 1.0));
        max_parity_drift = std::max(max_parity_drift, std::abs(parity_expectation(s) - p0));
        max_energy_drift = std::max(max_energy_drift, std::abs(h.expectation(s) - e0) / std::max(std::abs(e0), 1e-300));
        const auto top = top_level_population(s);
        for (int m = 0; m < n; ++m) leak[static_cast<std::size_t>(m)] = std::max(leak[static_cast<std::size_t>(m)], top[static_cast<std::size_t>(m)]);
        if (table) record(*table, s, h, o, u);
    };
    const EvolveStats st = evolve(psi, h, grid, observe);
    std::vector<std::string> warnings;
    for (int m = 0; m < n; ++m)
        if (leak[static_cast<std::size_t>(m)] > 1e-3) {
            std::ostringstream os;
            os << "mode " << m << " top Fock level reached population " << leak[static_cast<std::size_t>(m)] << " (> 0.1%)";
            warnings.push_back(os.str());
        }
    out.summary = json{{"dimension", basis->size()},
                       {"steps", st.steps},
                       {"matvecs", st.matvecs},
                       {"max_step_norm_drift", st.max_norm_drift},
                       {"max_norm_error", max_norm_error},
                       {"max_parity_drift", max_parity_drift},
                       {"max_relative_energy_drift", max_energy_drift},
                       {"max_top_level_population", leak},
                       {"warnings", warnings}};
    return out;
}

void run_dynamics(const RunConfig& cfg, RunBundle& b) {
    const json& p = cfg.params;
    const RHModel model = model_of(p);
    const UnitConvention u = units_of(p);
    const json basis_doc = p.value("basis", json::object());
    const BasisSpec spec = parse_basis(basis_doc, model.n_sites());
    const bool auto_sector = basis_doc.value("sector", std::string("auto")) == "auto";
    const std::string initial = p.value("initial", std::string("up"));
    if (initial != "up" && initial != "down") throw DomainError("\"initial\" must be \"up\" or \"down\"");
    TrajectoryOptions o;
    o.entropy = p.value("entropy", true);
    CsvTable t({"t_us", "site", "observable", "value"});
    const DynamicsRun r = simulate(model, spec, initial == "up", time_grid(p.value("t_max_us", 400.0), p.value("dt_us", 2.0)),
                                   &t, o, u, auto_sector);
    b.add_csv("trajectory.csv", t);
    b.add_json("summary.json", r.summary);
    for (const auto& w : r.summary.at("warnings")) b.log.push_back("warning: " + w.get<std::string>());
}

// ---------------------------------------------------------------- quench

void run_quench_cmd(const RunConfig& cfg, RunBundle& b) {
    const json& p = cfg.params;
    const RHModel model = model_of(p);
    const UnitConvention u = units_of(p);
    const int n = model.n_sites();
    const ModeSpectrum modes = model.modes();
    double g_max = 0.0;
    if (p.contains("g_max")) {
        g_max = u.to_angular(p.at("g_max").get<double>());
    } else if (p.contains("g_max_over_gc")) {
        g_max = p.at("g_max_over_gc").get<double>() * critical_coupling(model.spin_freq, modes.freqs[0]);
    } else {
        throw DomainError("quench needs \"g_max\" or \"g_max_over_gc\"");
    }
    const double tau = ms(p.value("tau_ms", 1.0));
    std::optional<double> forward;
    if (p.contains("duration_ms")) forward = ms(p.at("duration_ms").get<double>());
    const QuenchSchedule schedule =
        p.value("reverse", false) ? QuenchSchedule::reversed(g_max, tau, forward) : QuenchSchedule::exponential(g_max, tau, forward);
    QuenchOptions qo;
    qo.points_per_ramp = p.value("points", 50);
    qo.adiabaticity = p.value("adiabaticity", false);
    qo.lanczos.seed = cfg.seed;
    const QuenchResult r = run_quench(model, schedule, parse_basis(p.value("basis", json::object()), n), qo);

    CsvTable t({"t_us", "site", "observable", "value"});
    for (const QuenchSample& s : r.samples) {
        const double tu = s.time * 1e6;
        t.add({tu, "all", "g", u.from_angular(s.coupling)});
        t.add({tu, "all", "mean_sz", s.mean_sigma_z});
        for (int i = 0; i < n; ++i) t.add({tu, std::to_string(i), "sz", s.sigma_z[static_cast<std::size_t>(i)]});
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) t.add({tu, pair_label(i, j), "C", s.correlations(i, j)});
        if (s.fidelity) t.add({tu, "all", "fidelity", *s.fidelity});
        if (s.excitation_energy) t.add({tu, "all", "excitation_energy", u.from_angular(*s.excitation_energy)});
    }
    b.add_csv("quench.csv", t);
    const QuenchSample& f = r.final_sample();
    std::vector<std::vector<double>> c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(i)].push_back(f.correlations(i, j));
    b.add_json("summary.json", json{{"g_max", u.from_angular(g_max)},
                                    {"tau_ms", tau * 1e3},
                                    {"t_total_ms", schedule.t_total * 1e3},
                                    {"final_mean_sigma_z", f.mean_sigma_z},
                                    {"final_correlations", c},
                                    {"max_top_level_population", r.max_top_level_population},
                                    {"steps", r.stats.steps},
                                    {"warnings", r.warnings}});
    for (const auto& w : r.warnings) b.log.push_back("warning: " + w);
}

// ---------------------------------------------------------------- hp

json eigen_dump(const StabilityReport& s, const UnitConvention& u) {
    json ev = json::array();
    for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k)
        ev.push_back({u.from_angular(s.eigenvalues[k].real()), u.from_angular(s.eigenvalues[k].imag())});
    return json{{"stable", s.stable}, {"max_real_part", u.from_angular(s.max_real_part)}, {"eigenvalues_re_im", ev}};
}

void run_hp(const RunConfig& cfg, RunBundle& b) {
    const json& p = cfg.params;
    const RHModel model = model_of(p);
    const UnitConvention u = units_of(p);
    const LinearizedSystem sys = build_A(model);
    const std::vector<double> grid = time_grid(p.value("t_max_us", 400.0), p.value("dt_us", 2.0));
    const auto z = sigma_z_hp_trajectory(sys, grid);
    CsvTable t({"t_us", "site", "observable", "value"});
    for (std::size_t k = 0; k < grid.size(); ++k)
        for (int i = 0; i < sys.n_sites(); ++i) t.add({grid[k] * 1e6, std::to_string(i), "sz_hp", z[k][static_cast<std::size_t>(i)]});
    b.add_csv("hp.csv", t);
    const StabilityReport st = stability(sys);
    b.add_json("eigenvalues.json", eigen_dump(st, u));
    if (!st.stable && !grid.empty()) {
        std::ostringstream os;
        os << "linearized dynamics unstable: growth exponent " << st.max_real_part * grid.back() << " by the last sample";
        b.log.push_back("warning: " + os.str());
    }
    if (p.contains("stability_scan")) {
        CsvTable s({"g_khz", "stable", "max_real_part"});
        const std::vector<double> gs = parse_linspace(p.at("stability_scan").get<std::string>());
        std::vector<double> grad;
        for (double g : gs) grad.push_back(u.to_angular(g));
        const StabilityMap map = stability_map(model, grad);
        for (std::size_t k = 0; k < gs.size(); ++k)
            s.add({gs[k], long(map.stable[0][k]), u.from_angular(map.max_real_part[0][k])});
        b.add_csv("stability.csv", s);
    }
}

// ---------------------------------------------------------------- measure

SpinPairMoments moments_of(const json& m) {
    SpinPairMoments s;
    s.sx_i = m.at("sx_i");
    s.sy_i = m.at("sy_i");
    s.sx_j = m.at("sx_j");
    s.sy_j = m.at("sy_j");
    s.xx = m.at("xx");
    s.xy = m.at("xy");
    s.yx = m.at("yx");
    s.yy = m.at("yy");
    return s;
}

json fit_json(const CorrelationFit& f) {
    return json{{"amplitude", f.amplitude}, {"phase_offset", f.phase_offset}, {"offset", f.offset},
                {"residual", f.residual},   {"degenerate", f.degenerate}};
}

void run_measure(const RunConfig& cfg, RunBundle& b) {
    const json& p = cfg.params;
    json moments;
    if (p.contains("moments")) {
        moments = p.at("moments");
    } else if (p.contains("trajectory_file")) {
        const auto pair = p.at("pair").get<std::vector<int>>();
        moments = moments_from_trajectory(p.at("trajectory_file").get<std::string>(), pair.at(0), pair.at(1),
                                          p.value("time_us", -1.0));
    } else {
        throw DomainError("measure needs \"moments\" or \"trajectory_file\"");
    }
    const SpinPairMoments m = moments_of(moments);
    const auto pair = p.value("pair", std::vector<int>{0, 1});
    if (pair.size() != 2) throw DomainError("\"pair\" must list two ions");
    DetectionErrorModel err;
    err.crosstalk = p.value("eps_c", 0.0);
    err.flip = p.value("eps_0", 0.0);
    if (p.contains("distant_crosstalk")) err.distant_crosstalk = p.at("distant_crosstalk").get<std::vector<double>>();
    err.validate();
    const long shots = p.value("shots", 500L);
    const std::vector<double> phases = phase_grid(p.value("phases", 16));

    const PhaseScan ideal = phase_scan(m, pair[0], pair[1], phases);
    const int distance = std::abs(pair[0] - pair[1]);
    PhaseScan observed{pair[0], pair[1], phases, {}};
    if (shots > 0) {
        observed = sampled_phase_scan(m, pair[0], pair[1], phases, shots, cfg.seed, err);
    } else {
        for (double phi : phases)
            observed.correlations.push_back(distribution_correlation(apply_detection_errors(pair_distribution(m, phi), err, distance)));
    }
    CsvTable t({"phi", "C_ideal", "C_measured"});
    for (std::size_t k = 0; k < phases.size(); ++k) t.add({phases[k], ideal.correlations[k], observed.correlations[k]});
    b.add_csv("scan.csv", t);
    b.add_json("fit.json", json{{"pair", pair},
                                {"shots", shots},
                                {"eps_c", err.crosstalk_at(distance)},
                                {"eps_0", err.flip},
                                {"ideal", fit_json(fit_correlation(ideal))},
                                {"measured", fit_json(fit_correlation(observed))},
                                {"C_xx", m.xx - m.sx_i * m.sx_j}});
}

// ---------------------------------------------------------------- estimate

void run_estimate(const RunConfig& cfg, RunBundle& b) {
    const json& p = cfg.params;
    json out = json::object();
    if (p.contains("n_ions")) {
        const int n = p.at("n_ions").get<int>();
        const std::vector<int> cut = p.contains("cutoffs") ? p.at("cutoffs").get<std::vector<int>>()
                                                           : std::vector<int>{p.value("cutoff", 6)};
        const DimensionEstimate d = estimate_dimension(n, cut);
        out["log2_dimension"] = d.log2;
        if (d.exact) out["dimension"] = *d.exact;
    }
    if (p.contains("model")) {
        const RHModel model = model_of(p);
        const UnitConvention u = units_of(p);
        const auto sug = suggest_cutoffs(model, p.value("target_error", 1e-3));
        CsvTable t({"mode", "freq_khz", "mean_occupation", "cutoff"});
        std::vector<int> cutoffs;
        bool resonant = false;
        for (std::size_t k = 0; k < sug.size(); ++k) {
            t.add({long(k), u.from_angular(sug[k].mode_freq), sug[k].mean_occupation,
                   sug[k].cutoff ? Cell{long(*sug[k].cutoff)} : Cell{std::string("resonant")}});
            if (sug[k].cutoff) {
                cutoffs.push_back(*sug[k].cutoff);
            } else {
                resonant = true;
                b.log.push_back("warning: mode " + std::to_string(k) + " is resonant (delta_k = 0); set its cutoff manually");
            }
        }
        b.add_csv("cutoffs.csv", t);
        out["suggested_cutoffs"] = cutoffs;
        if (!resonant) {
            const DimensionEstimate d = estimate_dimension(model.n_sites(), cutoffs);
            out["suggested_log2_dimension"] = d.log2;
        }
    }
    if (out.empty()) throw DomainError("estimate needs \"n_ions\" or \"model\"");
    b.add_json("estimate.json", out);
}

}  // namespace

// ---------------------------------------------------------------- reproduce

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig2f-smallN", "fig3-smallN", "figS5", "figS6", "figS7", "figS8"};
    return ids;
}

namespace {

const UnitConvention kKhz{};

void fig2f(RunBundle& b) {
    CsvTable t({"n_ions", "g_over_gcmf", "correlation", "rescaled"});
    std::map<int, std::vector<double>> rescaled;
    std::vector<double> ratios;
    for (int k = 0; k <= 10; ++k) ratios.push_back(0.5 + 0.1 * k);
    for (int n : {2, 4}) {
        const RHModel model = presets::uniform_chain_model(n);
        const double gc = critical_coupling(model.spin_freq, model.modes().freqs[0]);
        const auto basis = make_basis(BasisSpec::local(n, 10, ParitySector::even));
        LanczosOptions lo;
        lo.n_states = 1;
        std::vector<double> c;
        for (double r : ratios) {
            const GroundStateResult gs = ground_state(HamiltonianOperator(model.with_coupling(r * gc), basis), lo);
            c.push_back(std::abs(correlation(gs.state, n / 2 - 1, n / 2)));
        }
        const auto pts = rescale_for_crossing(c, n, ratios, 1.0, 1.0);
        for (std::size_t k = 0; k < ratios.size(); ++k) {
            t.add({long(n), ratios[k], c[k], pts[k].y});
            rescaled[n].push_back(pts[k].y);
        }
    }
    b.add_csv("fig2f.csv", t);
    const auto cross = crossing_point(ratios, rescaled[2], rescaled[4]);
    b.add_json("fig2f.json", json{{"crossing_g_over_gcmf", cross ? json(*cross) : json(nullptr)}});
}

void dynamics_figure(RunBundle& b, const std::string& name, const std::vector<std::pair<int, double>>& runs, int cutoff) {
    CsvTable t({"n_ions", "g_khz", "t_us", "site", "observable", "value"});
    json summary = json::object();
    for (const auto& [n, g] : runs) {
        const RHModel model = presets::model_from_measurement(presets::dynamics_set(n)).with_coupling(khz(g));
        CsvTable inner({"t_us", "site", "observable", "value"});
        TrajectoryOptions o;
        o.pairs = false;
        const DynamicsRun r = simulate(model, BasisSpec::local(n, cutoff), true, time_grid(400.0, 4.0), &inner, o, kKhz);
        summary["N" + std::to_string(n) + "_g" + format_double(g)] = r.summary;
        // Re-emit with the run parameters in front.
        std::istringstream in(inner.render(b.config));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line.rfind("t_us", 0) == 0) continue;
            std::vector<std::string> f;
            std::stringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) f.push_back(cell);
            t.add({long(n), g, std::stod(f[0]), f[1], f[2], std::stod(f[3])});
        }
    }
    b.add_csv(name + ".csv", t);
    b.add_json(name + ".json", summary);
}

void figS5(RunBundle& b) {
    const RHModel base = presets::model_from_measurement(presets::phase_transition_set(2));
    RHModel model = tune_lowest_mode(base, khz(2.0));
    model.spin_freq = model.site_freqs[0];
    const double gc = critical_coupling(model.spin_freq, model.modes().freqs[0]);
    CsvTable t({"tau_ms", "t_us", "g_khz", "mean_sz"});
    json summary = json::object();
    for (double tau_ms : {1.0, 0.5}) {
        const QuenchSchedule s = QuenchSchedule::reversed(1.3 * gc, ms(tau_ms));
        const QuenchResult r = run_quench(model, s, BasisSpec::collective({30, 4}), {});
        for (const QuenchSample& q : r.samples) t.add({tau_ms, q.time * 1e6, to_khz(q.coupling), q.mean_sigma_z});
        summary["tau_" + format_double(tau_ms) + "ms_final_mean_sz"] = r.final_sample().mean_sigma_z;
    }
    b.add_csv("figS5.csv", t);
    b.add_json("figS5.json", summary);
}

void figS7(RunBundle& b) {
    const RHModel model = presets::model_from_measurement(presets::dynamics_set(4)).with_coupling(khz(6.0));
    const auto basis = make_basis(BasisSpec::local(4, 10, ParitySector::even));
    const HamiltonianOperator h(model, basis);
    QuantumState psi = all_up(basis);
    CsvTable t({"t_us", "mode", "n_mode"});
    std::vector<double> avg(4, 0.0);
    int samples = 0;
    evolve(psi, h, time_grid(400.0, 4.0), [&](const QuantumState& s) {
        const PhononNumbers ph = phonon_numbers(s, h.modes());
        for (int k = 0; k < 4; ++k) {
            t.add({s.time * 1e6, long(k), ph.collective[static_cast<std::size_t>(k)]});
            avg[static_cast<std::size_t>(k)] += ph.collective[static_cast<std::size_t>(k)];
        }
        ++samples;
    });
    for (double& a : avg) a /= samples;
    std::vector<double> heuristic;
    for (const ModeCutoff& c : suggest_cutoffs(model)) heuristic.push_back(c.mean_occupation);
    b.add_csv("figS7.csv", t);
    b.add_json("figS7.json", json{{"time_averaged", avg}, {"heuristic", heuristic}});
}

void figS8(RunBundle& b) {
    CsvTable ex({"g_khz", "t_us", "site", "sz"});
    CsvTable hp({"g_khz", "t_us", "site", "sz_hp"});
    const std::vector<double> grid = time_grid(400.0, 4.0);
    for (double g : {1.0, 6.0}) {
        const RHModel model = presets::model_from_measurement(presets::dynamics_set(4)).with_coupling(khz(g));
        const DynamicsRun r = simulate(model, BasisSpec::local(4, 8), true, grid, nullptr, {}, kKhz);
        const auto z = sigma_z_hp_trajectory(build_A(model), grid);
        for (std::size_t k = 0; k < grid.size(); ++k)
            for (int i = 0; i < 4; ++i) {
                ex.add({g, grid[k] * 1e6, long(i), r.sigma_z[k][static_cast<std::size_t>(i)]});
                hp.add({g, grid[k] * 1e6, long(i), z[k][static_cast<std::size_t>(i)]});
            }
    }
    b.add_csv("figS8_exact.csv", ex);
    b.add_csv("figS8_hp.csv", hp);
}

void figS6(RunBundle& b) {
    const RHModel model = presets::model_from_measurement(presets::dynamics_set(4)).with_coupling(khz(6.0));
    CsvTable t({"cutoff", "t_us", "site", "sz"});
    const std::vector<double> grid = time_grid(400.0, 2.0);
    for (int cut : {6, 8, 10}) {
        const DynamicsRun r = simulate(model, BasisSpec::local(4, cut), true, grid, nullptr, {}, kKhz);
        for (std::size_t k = 0; k < grid.size(); ++k)
            for (int i = 0; i < 4; ++i) t.add({long(cut), grid[k] * 1e6, long(i), r.sigma_z[k][static_cast<std::size_t>(i)]});
    }
    b.add_csv("figS6.csv", t);
}

void run_reproduce(const RunConfig& cfg, RunBundle& b) {
    const std::string id = cfg.params.value("figure", std::string());
    if (id == "fig2f-smallN") return fig2f(b);
    if (id == "fig3-smallN") return dynamics_figure(b, "fig3", {{2, 2.0}, {2, 7.0}, {4, 1.0}, {4, 6.0}}, 6);
    if (id == "figS5") return figS5(b);
    if (id == "figS6") return figS6(b);
    if (id == "figS7") return figS7(b);
    if (id == "figS8") return figS8(b);
    std::string valid;
    for (const auto& f : figure_ids()) valid += (valid.empty() ? "" : ", ") + f;
    throw DomainError("unknown figure \"" + id + "\"; valid ids: " + valid);
}

}  // namespace

RunBundle reproduce(const std::string& figure, std::uint64_t seed) {
    RunConfig c;
    c.command = "reproduce";
    c.params = json{{"figure", figure}};
    c.seed = seed;
    return run(c);
}

RunBundle run(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    RunBundle b;
    b.config = config;
    const std::string& c = config.command;
    if (c == "chain") {
        run_chain(config, b);
    } else if (c == "calibrate") {
        run_calibrate(config, b);
    } else if (c == "meanfield") {
        run_meanfield(config, b);
    } else if (c == "ground") {
        run_ground(config, b);
    } else if (c == "dynamics") {
        run_dynamics(config, b);
    } else if (c == "quench") {
        run_quench_cmd(config, b);
    } else if (c == "hp") {
        run_hp(config, b);
    } else if (c == "measure") {
        run_measure(config, b);
    } else if (c == "estimate") {
        run_estimate(config, b);
    } else if (c == "reproduce") {
        run_reproduce(config, b);
    } else {
        throw DomainError("unknown command \"" + c + "\"");
    }
    b.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return b;
}

json moments_from_trajectory(const std::string& path, int i, int j, double time_us) {
    if (i == j || i < 0 || j < 0) throw DomainError("measurement pair must name two distinct ions");
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open trajectory " + path);
    // time → (site, observable) → value
    std::map<double, std::map<std::pair<std::string, std::string>, double>> rows;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line.rfind("t_us,site,observable,value", 0) != 0) throw DomainError(path + " is not a trajectory CSV");
            header = true;
            continue;
        }
        std::stringstream ls(line);
        std::string t, site, obs, val;
        std::getline(ls, t, ',');
        std::getline(ls, site, ',');
        std::getline(ls, obs, ',');
        std::getline(ls, val, ',');
        try {
            rows[std::stod(t)][{site, obs}] = std::stod(val);
        } catch (const std::exception&) {
            throw DomainError("malformed trajectory row: " + line);
        }
    }
    if (rows.empty()) throw DomainError(path + " holds no samples");
    auto it = std::prev(rows.end());
    if (time_us >= 0.0) {
        double best = std::numeric_limits<double>::infinity();
        for (auto r = rows.begin(); r != rows.end(); ++r)
            if (std::abs(r->first - time_us) < best) {
                best = std::abs(r->first - time_us);
                it = r;
            }
    }
    const auto& at = it->second;
    auto get = [&](const std::string& site, const std::string& obs) {
        const auto f = at.find({site, obs});
        if (f == at.end()) throw DomainError("trajectory lacks " + obs + " for " + site + " at t = " + format_double(it->first) + " us");
        return f->second;
    };
    const bool forward = i < j;
    const std::string pl = forward ? pair_label(i, j) : pair_label(j, i);
    return json{{"time_us", it->first},
                {"sx_i", get(std::to_string(i), "sx")},
                {"sy_i", get(std::to_string(i), "sy")},
                {"sx_j", get(std::to_string(j), "sx")},
                {"sy_j", get(std::to_string(j), "sy")},
                {"xx", get(pl, "xx")},
                {"xy", get(pl, forward ? "xy" : "yx")},
                {"yx", get(pl, forward ? "yx" : "xy")},
                {"yy", get(pl, "yy")}};
}

}  // namespace rhlab::cli
