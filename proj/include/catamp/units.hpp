#pragma once

#include <numbers>

// Internal unit system: time in microseconds, frequencies as angular
// frequencies in rad/us. Helpers below take ordinary frequencies f = w/2pi.
namespace catamp::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double ghz(double f) { return kTwoPi * 1.0e3 * f; }
constexpr double mhz(double f) { return kTwoPi * f; }
constexpr double khz(double f) { return kTwoPi * 1.0e-3 * f; }

constexpr double to_ghz(double w) { return w / (kTwoPi * 1.0e3); }
constexpr double to_mhz(double w) { return w / kTwoPi; }
constexpr double to_khz(double w) { return w / (kTwoPi * 1.0e-3); }

// SI conversions used by the config layer (Hz and seconds).
constexpr double from_hz(double f_hz) { return kTwoPi * f_hz * 1.0e-6; }
constexpr double to_hz(double w) { return w / (kTwoPi * 1.0e-6); }
constexpr double from_seconds(double t) { return t * 1.0e6; }
constexpr double to_seconds(double t_us) { return t_us * 1.0e-6; }

}  // namespace catamp::units
