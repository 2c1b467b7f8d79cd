#pragma once

// Frequency-domain kernels of the linearized system and the phonon spectrum
// S_q(omega), split into coefficients of the squeezing statistics so that
// the (r, phi) dependence can be applied after integration.

#include <cmath>
#include <complex>

#include "sqzcool/constants.hpp"
#include "sqzcool/error.hpp"
#include "sqzcool/operating_point.hpp"
#include "sqzcool/params.hpp"

namespace sqzcool {

/// Pointwise phonon spectrum with its decomposition. Units: s.
struct SpectrumPoint {
  double omega = 0.0;
  double s_th = 0.0;   ///< mechanical-bath term
  double s_ba = 0.0;   ///< vacuum back-action term
  double s_n = 0.0;    ///< coefficient of N
  double s_mc = 0.0;   ///< coefficient of M cos(phi)
  double s_ms = 0.0;   ///< coefficient of M sin(phi), entering with a minus sign
  double s_q_total = 0.0;
};

struct EffectiveResponse {
  double omega_eff_sq = 0.0;
  double gamma_eff = 0.0;
};

/// (omega - Delta)^2 + kappa^2
inline double lorentz_minus(double w, double delta, double kappa) {
  return (w - delta) * (w - delta) + kappa * kappa;
}

/// (omega + Delta)^2 + kappa^2
inline double lorentz_plus(double w, double delta, double kappa) {
  return (w + delta) * (w + delta) + kappa * kappa;
}

inline cplx denominator_d(double w, const OperatingPoint& op, const SystemParams& p) {
  const cplx i{0.0, 1.0};
  const double d = op.delta;
  const double k = p.kappa;
  return 2.0 * d * op.G * op.G * p.omega_m +
         (w + i * k - d) * (w + i * k + d) * (p.omega_m * p.omega_m - w * w - i * w * p.gamma_m);
}

/// d(omega) / [Delta^2 + (kappa - i omega)^2]. Equals
/// -(omega_eff^2 - omega^2 - i omega gamma_eff); only |d_s|^2 enters any result.
inline cplx reduced_denominator(double w, const OperatingPoint& op, const SystemParams& p) {
  const cplx i{0.0, 1.0};
  const cplx divisor = op.delta * op.delta + (p.kappa - i * w) * (p.kappa - i * w);
  if (divisor == cplx{0.0, 0.0}) throw ComputationError("reduced_denominator: vanishing divisor");
  return denominator_d(w, op, p) / divisor;
}

inline EffectiveResponse effective_freq_damping(double w, const OperatingPoint& op,
                                                const SystemParams& p) {
  const double d = op.delta;
  const double k = p.kappa;
  const double lorentz_product = lorentz_minus(w, d, k) * lorentz_plus(w, d, k);
  const double g2wm = op.G * op.G * p.omega_m;
  return {p.omega_m * p.omega_m + g2wm * 2.0 * d * (w * w - d * d - k * k) / lorentz_product,
          p.gamma_m + g2wm * k * 4.0 * d / lorentz_product};
}

/// omega [coth(hbar omega / 2 k_B T) + 1], finite through omega = 0.
inline double thermal_bracket(double w, double temperature) {
  const double kt_over_hbar = PhysicalConstants::k_B * temperature / PhysicalConstants::hbar;
  const double x = w / (2.0 * kt_over_hbar);
  if (std::abs(x) < 1e-4) return 2.0 * kt_over_hbar * (1.0 + x + x * x / 3.0);
  return w * (-2.0 / std::expm1(-2.0 * x));
}

inline SpectrumPoint spectrum_at(double w, const OperatingPoint& op, const SystemParams& p,
                                 const SqueezeField& sq, double temperature) {
  const double d = op.delta;
  const double k = p.kappa;
  const double lm = lorentz_minus(w, d, k);
  const double lp = lorentz_plus(w, d, k);
  const double lorentz_product = lm * lp;
  const double chi = p.omega_m * p.omega_m / std::norm(reduced_denominator(w, op, p));
  const double g2k = op.G * op.G * k;

  SpectrumPoint s;
  s.omega = w;
  s.s_th = chi * (p.gamma_m / p.omega_m) * thermal_bracket(w, temperature);
  s.s_ba = chi * 2.0 * g2k / lm;
  s.s_n = chi * 2.0 * g2k * (1.0 / lm + 1.0 / lp);
  s.s_mc = chi * 4.0 * g2k * (w * w - d * d + k * k) / lorentz_product;
  s.s_ms = chi * 4.0 * g2k * 2.0 * k * d / lorentz_product;
  s.s_q_total = s.s_th + s.s_ba + sq.n_stat * s.s_n +
                sq.m_stat * (s.s_mc * std::cos(sq.phi) - s.s_ms * std::sin(sq.phi));
  return s;
}

/// S_p = (omega / omega_m)^2 S_q, from dp = (-i omega / omega_m) dq.
inline double momentum_spectrum_at(double w, const OperatingPoint& op, const SystemParams& p,
                                   const SqueezeField& sq, double temperature) {
  const double ratio = w / p.omega_m;
  return ratio * ratio * spectrum_at(w, op, p, sq, temperature).s_q_total;
}

}  // namespace sqzcool
