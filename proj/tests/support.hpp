#pragma once

// Shared fixtures for the test binaries: the membrane regime and a small
// seeded generator for parameter draws.

#include <cmath>
#include <random>

#include "sqzcool/operating_point.hpp"
#include "sqzcool/params.hpp"

namespace sqzcool::testing {

inline constexpr double kBathT = 0.037;

/// omega_m = 2pi x 10.1 MHz, gamma_m = 2pi x 150 Hz, g_m = 2pi x 260 Hz.
inline SystemParams membrane(double kappa_wm = 0.2, double G_wm = 0.3, double delta_wm = 1.0) {
  SystemParams p;
  p.omega_m = hz_to_rad_s(10.1e6);
  p.gamma_m = hz_to_rad_s(150.0);
  p.g_m = hz_to_rad_s(260.0);
  p.bath_temperature = kBathT;
  p.kappa = kappa_wm * p.omega_m;
  p.direct_G = G_wm * p.omega_m;
  p.direct_delta = delta_wm * p.omega_m;
  return p;
}

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

  /// Membrane regime with random (kappa, delta, G); not filtered for stability.
  SystemParams any_direct() {
    const double kappa = log_uniform(0.02, 3.0);
    const double delta = uniform(-2.0, 2.0);
    const double G = uniform(0.0, 1.0);
    return membrane(kappa, G, delta);
  }

  /// Red-detuned draw that is stable, away from the margin band.
  SystemParams stable_direct() {
    for (;;) {
      const double kappa = log_uniform(0.05, 2.0);
      const double delta = uniform(0.1, 2.0);
      const double G = uniform(0.0, 0.5);
      auto p = membrane(kappa, G, delta);
      const auto op = resolve_operating_point(p);
      if (op.stable && op.stability.max_real_part < -1e-6 * p.omega_m) return p;
    }
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace sqzcool::testing
