#include "rhlab/presets.hpp"

#include <algorithm>
#include <string>

#include "rhlab/calibrate.hpp"
#include "rhlab/error.hpp"

namespace rhlab::presets {

double ParameterSet::trap_freq() const { return mhz(measured_modes_mhz.back()); }

ChainGeometry ParameterSet::quoted_geometry() const {
    ChainGeometry g;
    for (double s : quoted_spacings_um) g.spacings.push_back(um(s));
    g.trap_freq = trap_freq();
    return g;
}

const std::vector<ParameterSet>& phase_transition_sets() {
    static const std::vector<ParameterSet> sets{
        {"transition-N2", {2.3995, 2.4577}, {5.262}, 88.0, -32.5, {}, {}},
        {"transition-N6",
         {2.3527, 2.386, 2.415, 2.439, 2.459, 2.4732},
         {5.847, 5.164, 4.990, 5.164, 5.847},
         171.49,
         -73.54,
         {},
         {}},
        {"transition-N10",
         {2.3590, 2.378, 2.393, 2.409, 2.423, 2.435, 2.446, 2.455, 2.462, 2.4675},
         {7.188, 6.071, 5.596, 5.427, 5.250, 5.427, 5.596, 6.071, 7.188},
         152.96,
         -67.94,
         {},
         {}},
        {"transition-N14",
         {2.3582, 2.373, 2.387, 2.400, 2.412, 2.424, 2.434, 2.444, 2.453, 2.461, 2.468, 2.473, 2.478, 2.4821},
         {7.585, 6.385, 5.807, 5.477, 5.267, 5.168, 5.119, 5.168, 5.267, 5.477, 5.807, 6.385, 7.585},
         179.36,
         -72.40,
         {},
         {}},
        {"transition-N16",
         {2.3524, 2.365, 2.377, 2.388, 2.399, 2.410, 2.419, 2.428, 2.437, 2.444, 2.451, 2.457, 2.463, 2.468, 2.471,
          2.4744},
         {7.764, 6.737, 6.018, 5.644, 5.437, 5.283, 5.195, 5.183, 5.195, 5.283, 5.437, 5.644, 6.018, 6.737, 7.764},
         175.22,
         -72.90,
         {},
         {}},
    };
    return sets;
}

const std::vector<ParameterSet>& dynamics_sets() {
    static const std::vector<ParameterSet> sets{
        {"dynamics-N2", {2.3837, 2.4422}, {5.266}, 31.25, -27.25, {0.0, 0.0}, {-29.25, 29.25}},
        {"dynamics-N4",
         {2.4021, 2.4264, 2.4460, 2.4607},
         {6.536, 6.113, 6.536},
         31.28,
         -27.28,
         {11.5, -6.5, -6.5, 11.5},
         {-29.4, -5.1, 15.2, 29.3}},
        {"dynamics-N16",
         {2.3442, 2.357, 2.370, 2.381, 2.393, 2.403, 2.413, 2.422, 2.431, 2.439, 2.446, 2.452, 2.458, 2.463, 2.467,
          2.4700},
         {7.772, 6.608, 5.993, 5.615, 5.378, 5.251, 5.116, 5.176, 5.116, 5.251, 5.378, 5.615, 5.993, 6.608, 7.772},
         65.0,
         -61.0,
         {51.5, 35.9, 22.9, 11.7, 2.5, -4.1, -9.3, -11.1, -11.1, -9.3, -4.1, 2.5, 11.7, 22.9, 35.9, 51.5},
         {-62.8, -50.0, -37.0, -26.0, -14.0, -4.0, 6.2, 15.2, 23.8, 31.6, 38.9, 45.5, 51.4, 56.4, 60.4, 63.0}},
    };
    return sets;
}

namespace {

const ParameterSet& find(const std::vector<ParameterSet>& sets, int n, const char* family) {
    const auto it = std::find_if(sets.begin(), sets.end(), [n](const ParameterSet& s) { return s.n_ions() == n; });
    if (it == sets.end()) {
        std::string valid;
        for (const auto& s : sets) valid += (valid.empty() ? "" : ", ") + std::to_string(s.n_ions());
        throw DomainError(std::string("no ") + family + " parameter set for N = " + std::to_string(n) + " (have " +
                          valid + ")");
    }
    return *it;
}

}  // namespace

const ParameterSet& phase_transition_set(int n_ions) { return find(phase_transition_sets(), n_ions, "phase-transition"); }
const ParameterSet& dynamics_set(int n_ions) { return find(dynamics_sets(), n_ions, "dynamics"); }

std::vector<double> n6_plot_spacings_um() { return {5.910, 5.142, 4.983, 5.142, 5.910}; }

RHModel model_from_measurement(const ParameterSet& set) {
    SpectrumMeasurement meas;
    for (double f : set.measured_modes_mhz) meas.freqs.push_back(mhz(f));
    meas.trap_freq = set.trap_freq();
    FitOptions opt;
    if (!set.quoted_spacings_um.empty()) opt.initial = set.quoted_geometry().spacings;
    ChainGeometry geom = set.quoted_geometry();
    const SpacingFit fit = fit_spacings(meas, geom, default_symmetric(set.n_ions()), opt);
    geom.spacings = fit.spacings;
    return interaction_picture(motional_model(geom), set.blue_detuning(), set.red_detuning());
}

RHModel model_from_quoted_spacings(const ParameterSet& set) {
    return interaction_picture(motional_model(set.quoted_geometry()), set.blue_detuning(), set.red_detuning());
}

RHModel uniform_chain_model(int n_ions, double nearest_hopping, double lowest_mode, double spacing, double trap_freq) {
    const MotionalModel m = motional_model(ChainGeometry::uniform(n_ions, spacing, trap_freq));
    RHModel r;
    r.site_freqs = m.local_freqs.array() - trap_freq;
    r.hoppings = power_law_hoppings(n_ions, nearest_hopping);
    r = tune_lowest_mode(r, lowest_mode);
    r.spin_freq = r.site_freqs[std::max(0, n_ions / 2 - 1)];
    return r;
}

}  // namespace rhlab::presets
