#pragma once

namespace optomech {

// CODATA 2018 values, fixed so golden outputs stay bit-stable.
inline constexpr double kHBar = 1.054571817e-34;         // J s
inline constexpr double kBoltzmann = 1.380649e-23;       // J / K
inline constexpr double kGravitation = 6.67430e-11;      // m^3 kg^-1 s^-2
inline constexpr double kSpeedOfLight = 299792458.0;     // m / s

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr double kTungstenDensity = 19300.0;      // kg / m^3

inline constexpr const char* kVersion = "0.1.0";

}  // namespace optomech
