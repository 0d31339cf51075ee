#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rhlab/error.hpp"
#include "rhlab/presets.hpp"

namespace rhlab::cli {

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json RunConfig::to_json() const {
    json j{{"command", command}, {"params", params}, {"seed", seed}};
    if (!out_dir.empty()) j["out_dir"] = out_dir;
    return j;
}

RunConfig RunConfig::from_json(const json& j) {
    if (!j.is_object() || !j.contains("command")) throw DomainError("run config needs a \"command\" field");
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.params = j.value("params", json::object());
    c.seed = j.value("seed", std::uint64_t{0});
    c.out_dir = j.value("out_dir", std::string{});
    return c;
}

std::string RunConfig::hash() const {
    return fnv1a_hex(json{{"command", command}, {"params", params}, {"seed", seed}}.dump());
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError(path + ": " + e.what());
    }
}

UnitConvention UnitConvention::from(const json& j, FrequencyUnit fallback, const char* key) {
    UnitConvention u;
    u.unit = j.contains(key) ? parse_frequency_unit(j.at(key).get<std::string>()) : fallback;
    u.two_pi = j.value("two_pi", true);
    return u;
}

namespace {

std::vector<double> doubles(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) throw DomainError(std::string("\"") + key + "\" must be an array");
    return j.at(key).get<std::vector<double>>();
}

double number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) throw DomainError(std::string("\"") + key + "\" must be a number");
    return j.at(key).get<double>();
}

void apply_mass(const json& j, ChainGeometry& g) {
    if (j.contains("mass_amu")) g.mass = number(j, "mass_amu") * constants::atomic_mass_unit;
}

}  // namespace

SpectrumMeasurement parse_spectrum(const json& j, FitOptions& options, bool& symmetric, ChainGeometry& geom) {
    const UnitConvention mu = UnitConvention::from(j, FrequencyUnit::mhz, "modes_unit");
    SpectrumMeasurement m;
    for (double f : doubles(j, "measured_modes")) m.freqs.push_back(mu.to_angular(f));
    if (m.freqs.empty()) throw DomainError("\"measured_modes\" is empty");
    const UnitConvention tu = UnitConvention::from(j, FrequencyUnit::mhz, "trap_unit");
    m.trap_freq = j.contains("trap_freq") ? tu.to_angular(number(j, "trap_freq")) : m.freqs.back();
    if (j.contains("weights")) m.weights = doubles(j, "weights");
    symmetric = j.value("symmetric", default_symmetric(m.n_ions()));
    if (j.contains("initial_um")) {
        std::vector<double> init;
        for (double s : doubles(j, "initial_um")) init.push_back(um(s));
        options.initial = init;
    }
    if (j.contains("max_iterations")) options.max_iterations = j.at("max_iterations").get<int>();
    geom.trap_freq = m.trap_freq;
    apply_mass(j, geom);
    return m;
}

ChainSpec parse_chain(const json& j) {
    if (!j.is_object()) throw DomainError("chain description must be a JSON object");
    ChainSpec c;
    if (j.contains("measured_modes")) {
        FitOptions opt;
        bool symmetric = false;
        ChainGeometry tmpl;
        const SpectrumMeasurement m = parse_spectrum(j, opt, symmetric, tmpl);
        const SpacingFit fit = fit_spacings(m, tmpl, symmetric, opt);
        c.geometry = tmpl;
        c.geometry.spacings = fit.spacings;
        c.warnings = fit.warnings;
        c.fitted = true;
    } else {
        const UnitConvention tu = UnitConvention::from(j, FrequencyUnit::mhz, "trap_unit");
        c.geometry.trap_freq = tu.to_angular(number(j, "trap_freq"));
        if (j.contains("spacings_um")) {
            for (double s : doubles(j, "spacings_um")) c.geometry.spacings.push_back(um(s));
        } else if (j.contains("uniform_spacing_um")) {
            const int n = j.value("n_ions", 0);
            if (n < 1) throw DomainError("\"n_ions\" must be a positive integer");
            c.geometry.spacings.assign(static_cast<std::size_t>(n - 1), um(number(j, "uniform_spacing_um")));
        } else {
            throw DomainError("chain needs \"spacings_um\", \"uniform_spacing_um\" or \"measured_modes\"");
        }
        apply_mass(j, c.geometry);
    }
    if (j.contains("n_ions") && j.at("n_ions").get<int>() != c.geometry.n_ions())
        throw DomainError("\"n_ions\" disagrees with the spacing or mode list");
    c.geometry.validate();
    if (j.contains("detunings")) {
        const json& d = j.at("detunings");
        const UnitConvention du = UnitConvention::from(d, FrequencyUnit::khz);
        c.blue_detuning = du.to_angular(number(d, "blue"));
        c.red_detuning = du.to_angular(number(d, "red"));
        c.has_detunings = true;
    }
    return c;
}

namespace {

RHModel model_from_preset(const std::string& name) {
    auto tail_n = [&](const std::string& prefix) -> int {
        try {
            return std::stoi(name.substr(prefix.size()));
        } catch (const std::exception&) {
            throw DomainError("malformed preset name " + name);
        }
    };
    if (name.rfind("dynamics-N", 0) == 0) return presets::model_from_measurement(presets::dynamics_set(tail_n("dynamics-N")));
    if (name.rfind("transition-N", 0) == 0) {
        // Fig. 2 style: tune δ₀ to 2 kHz and set ω₀ to the central local frequency.
        const auto& set = presets::phase_transition_set(tail_n("transition-N"));
        RHModel m = tune_lowest_mode(presets::model_from_measurement(set), khz(2.0));
        m.spin_freq = m.site_freqs[std::max(0, set.n_ions() / 2 - 1)];
        return m;
    }
    if (name.rfind("uniform-N", 0) == 0) return presets::uniform_chain_model(tail_n("uniform-N"));
    throw DomainError("unknown preset " + name + " (use dynamics-N<n>, transition-N<n> or uniform-N<n>)");
}

}  // namespace

RHModel parse_model(const json& j) {
    if (!j.is_object()) throw DomainError("model description must be a JSON object");
    const UnitConvention u = UnitConvention::from(j);
    RHModel m;
    if (j.contains("preset")) {
        m = model_from_preset(j.at("preset").get<std::string>());
    } else if (j.contains("uniform_chain")) {
        const json& c = j.at("uniform_chain");
        const int n = c.value("n_ions", 0);
        if (n < 1) throw DomainError("\"uniform_chain.n_ions\" must be positive");
        m = presets::uniform_chain_model(n, u.to_angular(c.value("nearest_hopping", 26.0)),
                                         u.to_angular(c.value("lowest_mode", 2.0)), um(c.value("spacing_um", 5.4)),
                                         mhz(c.value("trap_freq_mhz", 2.5)));
    } else if (j.contains("chain")) {
        const ChainSpec c = parse_chain(j.at("chain"));
        if (!c.has_detunings) throw DomainError("a chain-derived model needs \"detunings\"");
        m = interaction_picture(motional_model(c.geometry), c.blue_detuning, c.red_detuning);
    } else {
        m.spin_freq = u.to_angular(number(j, "spin_freq"));
        const std::vector<double> w = doubles(j, "site_freqs");
        const int n = static_cast<int>(w.size());
        m.site_freqs = Vec(n);
        for (int i = 0; i < n; ++i) m.site_freqs[i] = u.to_angular(w[static_cast<std::size_t>(i)]);
        if (j.contains("hoppings")) {
            const auto rows = j.at("hoppings").get<std::vector<std::vector<double>>>();
            if (static_cast<int>(rows.size()) != n) throw DomainError("\"hoppings\" must be an N x N matrix");
            m.hoppings = Mat::Zero(n, n);
            for (int a = 0; a < n; ++a) {
                if (static_cast<int>(rows[static_cast<std::size_t>(a)].size()) != n)
                    throw DomainError("\"hoppings\" must be an N x N matrix");
                for (int b = 0; b < n; ++b) m.hoppings(a, b) = u.to_angular(rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
            }
        } else if (j.contains("hopping")) {
            const json& h = j.at("hopping");
            m.hoppings = power_law_hoppings(n, u.to_angular(number(h, "nearest")), h.value("exponent", 3.0));
        } else {
            m.hoppings = Mat::Zero(n, n);
        }
    }
    if (j.contains("lowest_mode")) m = tune_lowest_mode(m, u.to_angular(number(j, "lowest_mode")));
    if (j.contains("spin_freq_from_site")) {
        const int site = j.at("spin_freq_from_site").get<int>();
        if (site < 0 || site >= m.n_sites()) throw DomainError("\"spin_freq_from_site\" out of range");
        m.spin_freq = m.site_freqs[site];
    }
    if (j.contains("spin_freq") && (j.contains("preset") || j.contains("chain") || j.contains("uniform_chain")))
        m.spin_freq = u.to_angular(number(j, "spin_freq"));
    m.coupling = j.contains("coupling") ? u.to_angular(number(j, "coupling")) : 0.0;
    m.validate();
    return m;
}

BasisSpec parse_basis(const json& j, int n_ions) {
    BasisSpec b;
    b.n_ions = n_ions;
    const std::string rep = j.value("representation", std::string("local"));
    if (rep == "local") {
        b.representation = Representation::local_modes;
    } else if (rep == "collective") {
        b.representation = Representation::collective_modes;
    } else {
        throw DomainError("representation must be \"local\" or \"collective\"");
    }
    if (j.contains("cutoffs")) {
        b.cutoffs = j.at("cutoffs").get<std::vector<int>>();
    } else {
        b.cutoffs.assign(static_cast<std::size_t>(n_ions), j.value("cutoff", 6));
    }
    const std::string sector = j.value("sector", std::string("auto"));
    if (sector == "even") {
        b.sector = ParitySector::even;
    } else if (sector == "odd") {
        b.sector = ParitySector::odd;
    } else if (sector == "full" || sector == "auto") {
        b.sector = ParitySector::full;
    } else {
        throw DomainError("sector must be even, odd, full or auto");
    }
    b.validate();
    return b;
}

namespace {

std::vector<double> split3(const std::string& text, const char* what) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DomainError(std::string("malformed ") + what + " \"" + text + "\"");
        }
    }
    if (parts.size() != 3) throw DomainError(std::string("malformed ") + what + " \"" + text + "\"");
    return parts;
}

}  // namespace

std::vector<double> parse_scan(const std::string& text) {
    const auto p = split3(text, "scan start:stop:step");
    if (!(p[2] > 0.0)) throw DomainError("scan step must be positive");
    std::vector<double> out;
    const long n = static_cast<long>(std::floor((p[1] - p[0]) / p[2] + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(p[0] + k * p[2]);
    return out;
}

std::vector<double> parse_linspace(const std::string& text) {
    const auto p = split3(text, "range a:b:n");
    const long n = std::lround(p[2]);
    if (n < 0 || std::abs(p[2] - n) > 1e-9) throw DomainError("point count must be a nonnegative integer");
    std::vector<double> out;
    for (long k = 0; k < n; ++k) out.push_back(n == 1 ? p[0] : p[0] + (p[1] - p[0]) * k / (n - 1));
    return out;
}

}  // namespace rhlab::cli
