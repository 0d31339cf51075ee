#include "rhlab/units.hpp"

#include <string>

#include "rhlab/error.hpp"

namespace rhlab {

FrequencyUnit parse_frequency_unit(std::string_view name) {
    if (name == "Hz" || name == "hz") return FrequencyUnit::hz;
    if (name == "kHz" || name == "khz") return FrequencyUnit::khz;
    if (name == "MHz" || name == "mhz") return FrequencyUnit::mhz;
    if (name == "rad/s") return FrequencyUnit::rad_per_s;
    throw DomainError("unknown frequency unit '" + std::string(name) + "' (expected Hz, kHz, MHz or rad/s)");
}

std::string_view to_string(FrequencyUnit unit) {
    switch (unit) {
        case FrequencyUnit::hz: return "Hz";
        case FrequencyUnit::khz: return "kHz";
        case FrequencyUnit::mhz: return "MHz";
        case FrequencyUnit::rad_per_s: return "rad/s";
    }
    return "?";
}

namespace {
double scale(FrequencyUnit unit) {
    switch (unit) {
        case FrequencyUnit::hz: return 1.0;
        case FrequencyUnit::khz: return 1e3;
        case FrequencyUnit::mhz: return 1e6;
        case FrequencyUnit::rad_per_s: return 1.0;
    }
    return 1.0;
}
}  // namespace

double to_angular(double value, FrequencyUnit unit, bool two_pi) {
    if (unit == FrequencyUnit::rad_per_s) return value;
    return value * scale(unit) * (two_pi ? kTwoPi : 1.0);
}

double from_angular(double omega, FrequencyUnit unit, bool two_pi) {
    if (unit == FrequencyUnit::rad_per_s) return omega;
    return omega / (scale(unit) * (two_pi ? kTwoPi : 1.0));
}

}  // namespace rhlab
