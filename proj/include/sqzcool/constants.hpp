#pragma once

#include <numbers>

namespace sqzcool {

/// SI defining constants (2019 redefinition, exact values).
struct PhysicalConstants {
  /// Planck constant h, J s.
  static constexpr double planck = 6.62607015e-34;
  /// Reduced Planck constant h / 2pi = 1.054571817...e-34 J s.
  static constexpr double hbar = planck / (2.0 * std::numbers::pi);
  /// Boltzmann constant, J/K.
  static constexpr double k_B = 1.380649e-23;
  /// Speed of light in vacuum, m/s.
  static constexpr double c = 299792458.0;
};

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double hz_to_rad_s(double hz) noexcept { return two_pi * hz; }
constexpr double rad_s_to_hz(double w) noexcept { return w / two_pi; }

}  // namespace sqzcool
