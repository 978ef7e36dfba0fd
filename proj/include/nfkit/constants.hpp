#pragma once

#include <numbers>

namespace nfkit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;      // m/s
inline constexpr double kFreeSpaceImpedance = 376.730313668; // ohm

inline double wavelength_from_frequency(double frequency_hz) { return kSpeedOfLight / frequency_hz; }

} // namespace nfkit
