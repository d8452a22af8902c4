#pragma once

#include <numbers>

// CODATA 2018 exact/recommended values, SI units.
namespace optoent::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J / K
inline constexpr double speed_of_light = 299792458.0; // m / s

inline constexpr double hz_to_rad(double hz) { return two_pi * hz; }
inline constexpr double rad_to_hz(double rad_s) { return rad_s / two_pi; }

} // namespace optoent::constants
