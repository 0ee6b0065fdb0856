#pragma once

// Unit conversions used at API boundaries. Core code works in SI units
// (watts, meters, hertz); dB/dBm appear only here and in the config layer.

#include <cmath>

namespace swifi {

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s
inline constexpr double kSquareMetersPerSquareKm = 1e6;

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

/// (1 - e^-x) / x, continuous through x = 0.
inline double one_minus_exp_over(double x) {
  if (std::fabs(x) < 1e-8) return 1.0 - x / 2.0 + x * x / 6.0;
  return -std::expm1(-x) / x;
}

}  // namespace swifi
