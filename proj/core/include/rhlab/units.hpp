#pragma once

#include <numbers>
#include <string_view>

namespace rhlab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace constants {
// CODATA 2018
inline constexpr double elementary_charge = 1.602176634e-19;    // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;    // kg
inline constexpr double electron_mass_amu = 5.48579909065e-4;

/// 171Yb atomic mass minus one electron.
inline constexpr double yb171_ion_mass_amu = 170.9363258 - electron_mass_amu;
}  // namespace constants

enum class FrequencyUnit { hz, khz, mhz, rad_per_s };

FrequencyUnit parse_frequency_unit(std::string_view name);
std::string_view to_string(FrequencyUnit unit);

/// Convert a configured frequency to rad/s. With `two_pi` set, values are
/// read as ordinary frequencies and multiplied by 2π (the convention every
/// number in the lab notebooks is quoted in).
double to_angular(double value, FrequencyUnit unit, bool two_pi = true);
double from_angular(double omega, FrequencyUnit unit, bool two_pi = true);

inline constexpr double khz(double f) { return kTwoPi * 1e3 * f; }
inline constexpr double mhz(double f) { return kTwoPi * 1e6 * f; }
inline constexpr double to_khz(double omega) { return omega / (kTwoPi * 1e3); }
inline constexpr double to_hz(double omega) { return omega / kTwoPi; }

inline constexpr double um(double x) { return x * 1e-6; }
inline constexpr double to_um(double x) { return x * 1e6; }
inline constexpr double us(double t) { return t * 1e-6; }
inline constexpr double ms(double t) { return t * 1e-3; }

}  // namespace rhlab
