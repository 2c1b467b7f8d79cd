#pragma once

// Physical parameters of the driven optomechanical cavity and the squeezed
// input field. Everything here is stored in SI units with angular
// frequencies (rad/s); ordinary-frequency inputs are converted at the
// configuration boundary.

#include <cmath>
#include <optional>
#include <string>

#include "sqzcool/constants.hpp"
#include "sqzcool/error.hpp"

namespace sqzcool {

/// Mechanical, cavity, drive and bath parameters.
///
/// The drive strength comes from exactly one of two sources: an input laser
/// power (the steady state is then solved self-consistently), or a direct
/// effective coupling G together with the effective detuning. The second mode
/// mirrors how results are usually parameterized (G as a fraction of omega_m).
struct SystemParams {
  double omega_m = 0.0;  ///< mechanical angular frequency, rad/s
  double gamma_m = 0.0;  ///< mechanical half-damping rate, rad/s (full rate 2*gamma_m)
  std::optional<double> mass;  ///< effective mass, kg

  std::optional<double> omega_p;        ///< laser angular frequency, rad/s
  std::optional<double> omega_c;        ///< cavity angular frequency, rad/s
  std::optional<double> cavity_length;  ///< m

  double kappa = 0.0;   ///< cavity half-damping rate, rad/s (full rate 2*kappa)
  double delta0 = 0.0;  ///< bare detuning omega_c - omega_p, rad/s
  double g_m = 0.0;     ///< single-photon coupling, rad/s

  std::optional<double> input_power;  ///< W; power-driven mode
  std::optional<double> direct_G;     ///< rad/s; direct-coupling mode
  std::optional<double> direct_delta; ///< effective detuning for direct mode, rad/s

  double bath_temperature = 0.0;  ///< K

  bool power_driven() const noexcept { return input_power.has_value(); }

  /// Throws DomainError describing the first violated invariant.
  void validate() const {
    if (!(omega_m > 0.0)) throw DomainError("omega_m must be > 0");
    if (!(gamma_m > 0.0)) throw DomainError("gamma_m must be > 0");
    if (gamma_m < 1e-12 * omega_m)
      throw DomainError("gamma_m below 1e-12*omega_m: thermal integral diverges in the undamped limit");
    if (!(kappa > 0.0)) throw DomainError("kappa must be > 0");
    if (!(bath_temperature > 0.0)) throw DomainError("bath temperature must be > 0");
    if (!(g_m >= 0.0)) throw DomainError("g_m must be >= 0");
    const bool power = input_power.has_value();
    const bool direct = direct_G.has_value();
    if (power == direct)
      throw DomainError("exactly one of input_power or direct G must supply the drive");
    if (power) {
      if (!(*input_power >= 0.0)) throw DomainError("input_power must be >= 0");
      if (!omega_p || !(*omega_p > 0.0))
        throw DomainError("power-driven mode needs a positive laser frequency");
    } else {
      if (!(*direct_G >= 0.0)) throw DomainError("G must be >= 0");
      if (!direct_delta) throw DomainError("direct mode needs the effective detuning");
    }
  }
};

/// Squeezed-vacuum reservoir: squeezing parameter r, phase phi, and the photon
/// statistics N = sinh^2 r, M = sinh r cosh r (magnitude; the phase is phi).
struct SqueezeField {
  double r = 0.0;
  double phi = 0.0;     ///< rad, in [0, 2pi)
  double n_stat = 0.0;  ///< N
  double m_stat = 0.0;  ///< |M|
};

/// Wraps an angle into [0, 2pi).
inline double canonical_phase(double phi) {
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;
  return w;
}

inline SqueezeField derive_photon_stats(double r, double phi) {
  if (!(r >= 0.0)) throw DomainError("squeezing parameter r must be >= 0");
  if (!std::isfinite(phi)) throw DomainError("squeezing phase must be finite");
  const double s = std::sinh(r);
  const double c = std::cosh(r);
  return SqueezeField{r, canonical_phase(phi), s * s, s * c};
}

/// Pump amplitude epsilon_p = sqrt(P kappa / (2 hbar omega_p)), in s^-1.
inline double pump_amplitude(double input_power, double omega_p, double kappa) {
  if (!(input_power >= 0.0) || !(omega_p > 0.0) || !(kappa > 0.0))
    throw DomainError("pump_amplitude: need P >= 0, omega_p > 0, kappa > 0");
  return std::sqrt(input_power * kappa / (2.0 * PhysicalConstants::hbar * omega_p));
}

struct GeometricCoupling {
  double g_m;    ///< rad/s
  double x_zpf;  ///< zero-point displacement, m
};

/// g_m = (omega_c / L_c) * x_zpf, x_zpf = sqrt(hbar / (2 m omega_m)).
inline GeometricCoupling coupling_from_geometry(double omega_c, double cavity_length, double mass,
                                                double omega_m) {
  if (!(omega_c > 0.0) || !(cavity_length > 0.0) || !(mass > 0.0) || !(omega_m > 0.0))
    throw DomainError("coupling_from_geometry: all arguments must be > 0");
  const double x_zpf = std::sqrt(PhysicalConstants::hbar / (2.0 * mass * omega_m));
  return {omega_c / cavity_length * x_zpf, x_zpf};
}

/// Bose-Einstein occupancy 1 / (exp(hbar w / k_B T) - 1).
inline double thermal_occupancy(double temperature, double omega) {
  if (!(temperature > 0.0) || !(omega > 0.0))
    throw DomainError("thermal_occupancy: need T > 0 and omega > 0");
  const double x = PhysicalConstants::hbar * omega / (PhysicalConstants::k_B * temperature);
  return 1.0 / std::expm1(x);
}

/// Laser angular frequency from vacuum wavelength.
inline double omega_from_wavelength(double wavelength) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be > 0");
  return two_pi * PhysicalConstants::c / wavelength;
}

}  // namespace sqzcool
