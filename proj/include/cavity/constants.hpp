#pragma once

#include <numbers>

namespace cavity {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double angular_frequency(double wavelength) { return kTwoPi * kSpeedOfLight / wavelength; }
inline constexpr double wavelength_of(double omega) { return kTwoPi * kSpeedOfLight / omega; }

}  // namespace cavity
