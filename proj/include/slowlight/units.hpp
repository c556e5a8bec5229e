// units.hpp - internal unit system
//
// Time in microseconds, length in micrometres, angular frequency in rad/us,
// hbar = 1. With these units 1 m/s == 1 um/us.

#pragma once

#include <complex>
#include <numbers>

namespace slowlight {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace units {

inline constexpr double speed_of_light = 2.998e8;  // um/us
inline constexpr double um_per_mm = 1.0e3;
inline constexpr double us_per_s = 1.0e6;
inline constexpr double us_per_ms = 1.0e3;

/// Converts an ordinary frequency in Hz to angular frequency in rad/us.
constexpr double hz_to_rad_per_us(double hz) { return two_pi * hz / us_per_s; }

/// Converts a rate in 1/s to 1/us.
constexpr double per_s_to_per_us(double rate) { return rate / us_per_s; }

/// um/us to km/s.
constexpr double um_per_us_to_km_per_s(double v) { return v * 1.0e-3; }

}  // namespace units
}  // namespace slowlight
