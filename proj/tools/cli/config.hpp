#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rhlab/basis.hpp"
#include "rhlab/calibrate.hpp"
#include "rhlab/chain.hpp"
#include "rhlab/units.hpp"

namespace rhlab::cli {

using nlohmann::json;

/// A fully self-contained run description. The hash covers command,
/// parameters and seed, not the output directory.
struct RunConfig {
    std::string command;
    json params = json::object();
    std::uint64_t seed = 0;
    std::string out_dir;

    json to_json() const;
    static RunConfig from_json(const json& j);
    std::string hash() const;
};

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

json read_json_file(const std::string& path);

/// Frequency in rad/s from a number in `unit` (default kHz, ×2π unless two_pi is false).
struct UnitConvention {
    FrequencyUnit unit = FrequencyUnit::khz;
    bool two_pi = true;

    double to_angular(double v) const { return rhlab::to_angular(v, unit, two_pi); }
    double from_angular(double w) const { return rhlab::from_angular(w, unit, two_pi); }
    static UnitConvention from(const json& j, FrequencyUnit fallback = FrequencyUnit::khz, const char* key = "unit");
};

/// Chain geometry from a chain document: explicit `spacings_um`, or
/// `uniform_spacing_um` with `n_ions`, or `measured_modes` to be fitted.
struct ChainSpec {
    ChainGeometry geometry;
    std::vector<std::string> warnings;
    bool fitted = false;
    double blue_detuning = 0.0;
    double red_detuning = 0.0;
    bool has_detunings = false;
};
ChainSpec parse_chain(const json& j);

SpectrumMeasurement parse_spectrum(const json& j, FitOptions& options, bool& symmetric, ChainGeometry& geom_template);

/// RH model from a model document (explicit parameters, a chain with
/// detunings, a named preset, or a uniform chain).
RHModel parse_model(const json& j);

BasisSpec parse_basis(const json& j, int n_ions);

/// "start:stop:step" → inclusive list; an empty range yields no points.
std::vector<double> parse_scan(const std::string& text);
/// "a:b:n" → n evenly spaced points from a to b.
std::vector<double> parse_linspace(const std::string& text);

}  // namespace rhlab::cli
