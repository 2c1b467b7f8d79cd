#pragma once

// Mechanical energy from the phonon spectrum:
//   E_m = (hbar omega_m / 2) (<q^2> + <p^2>),  <q^2> = (1/2pi) int S_q d omega,
// decomposed as E_m = E_th + N E_N + M (E_Mc cos phi - E_Ms sin phi).
//
// The quantum thermal noise omega [coth(.) + 1] grows linearly in omega, which
// makes <p^2> diverge logarithmically for an ohmic bath. The mechanical bath
// spectrum is therefore cut off at |omega| = bath_cutoff_factor * omega_m.
// With the default factor the cut tail is ~1e-5 hbar omega_m.

#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "sqzcool/constants.hpp"
#include "sqzcool/error.hpp"
#include "sqzcool/operating_point.hpp"
#include "sqzcool/params.hpp"
#include "sqzcool/quadrature.hpp"
#include "sqzcool/spectra.hpp"

namespace sqzcool {

/// How T_eff and n_eff are read off E_m.
enum class Convention {
  /// E_m = k_B T_eff / 2 and E_m = hbar omega_m (n_eff + 1/2) / 2 (default)
  half_kT,
  /// E_m = k_B T_eff and E_m = hbar omega_m (n_eff + 1/2)
  equipartition,
};

inline std::string_view to_string(Convention c) {
  return c == Convention::half_kT ? "half_kT" : "equipartition";
}

struct EnergyOptions {
  double tol = 1e-8;
  double bath_cutoff_factor = 100.0;
  std::size_t max_panels = 50000;
  Convention convention = Convention::half_kT;
};

enum class Component { th, thermal_only, vacuum_only, n_coeff, mc_coeff, ms_coeff, total };

struct EnergyDecomposition {
  double e_th = 0.0;  ///< J; bath + vacuum back-action, independent of (r, phi)
  double e_n = 0.0;
  double e_mc = 0.0;
  double e_ms = 0.0;
  double quadrature_error = 0.0;  ///< J; sum of the four estimates
  double err_th = 0.0, err_n = 0.0, err_mc = 0.0, err_ms = 0.0;
  // diagnostic split of e_th; not part of the E_m accounting
  double e_th_thermal = 0.0;
  double e_th_vacuum = 0.0;
  double omega_m = 0.0;
};

struct EnergyReport {
  double e_m = 0.0;
  double delta_e = 0.0;
  double t_eff = 0.0;
  double n_eff = 0.0;
  Convention convention = Convention::half_kT;
  double t_eff_half_kT = 0.0;
  double n_eff_half_kT = 0.0;
  double t_eff_equipartition = 0.0;
  double n_eff_equipartition = 0.0;
};

namespace detail {

inline double bath_cutoff(const SystemParams& p, const EnergyOptions& opt) {
  return opt.bath_cutoff_factor * p.omega_m;
}

/// hbar omega_m / (2 pi) * (1 + (omega / omega_m)^2) / 2
inline double energy_weight(double w, double omega_m) {
  const double ratio = w / omega_m;
  return PhysicalConstants::hbar * omega_m / (2.0 * std::numbers::pi) * 0.5 * (1.0 + ratio * ratio);
}

inline double select(const SpectrumPoint& s, Component c, bool bath_on) {
  const double th = bath_on ? s.s_th : 0.0;
  switch (c) {
    case Component::th: return th + s.s_ba;
    case Component::thermal_only: return th;
    case Component::vacuum_only: return s.s_ba;
    case Component::n_coeff: return s.s_n;
    case Component::mc_coeff: return s.s_mc;
    case Component::ms_coeff: return s.s_ms;
    case Component::total: return s.s_q_total - s.s_th + th;
  }
  return 0.0;
}

}  // namespace detail

/// Panel boundaries at the structure of the integrand: the mechanical peak
/// and its width scales, the optical resonances, and the bath cutoff.
inline std::vector<double> spectral_breakpoints(const OperatingPoint& op, const SystemParams& p,
                                                const EnergyOptions& opt) {
  const double cutoff = detail::bath_cutoff(p, opt);
  std::vector<double> pts{0.0, p.omega_m, std::abs(op.delta), std::abs(op.delta) + p.kappa, cutoff};
  if (std::abs(op.delta) > p.kappa) pts.push_back(std::abs(op.delta) - p.kappa);
  if (op.G > 0.0 && op.G < p.omega_m) {
    pts.push_back(p.omega_m - op.G);
    pts.push_back(p.omega_m + op.G);
  }
  const auto resp = effective_freq_damping(p.omega_m, op, p);
  if (resp.omega_eff_sq > 0.0) {
    const double peak = std::sqrt(resp.omega_eff_sq);
    const double width = std::max(effective_freq_damping(peak, op, p).gamma_eff, p.gamma_m);
    pts.push_back(peak);
    for (double k : {0.5, 5.0, 50.0, 500.0}) {
      pts.push_back(peak + k * width);
      if (peak - k * width > 0.0) pts.push_back(peak - k * width);
    }
  }
  std::vector<double> out;
  for (double x : pts) {
    out.push_back(x);
    if (x > 0.0) out.push_back(-x);
  }
  return out;
}

/// Energy contribution (J) of one coefficient spectrum; `sq` is only used by
/// Component::total.
inline quad::Result integrate_component(Component c, const OperatingPoint& op, const SystemParams& p,
                                        double temperature, const EnergyOptions& opt,
                                        const SqueezeField& sq = {}) {
  if (!(opt.tol > 1e-12 && opt.tol < 1e-2))
    throw DomainError("integrate_component: tol must lie in (1e-12, 1e-2)");
  const double cutoff = detail::bath_cutoff(p, opt);
  auto f = [&](double w) {
    const auto s = spectrum_at(w, op, p, sq, temperature);
    return detail::energy_weight(w, p.omega_m) * detail::select(s, c, std::abs(w) <= cutoff);
  };
  quad::Options qo;
  qo.rel_tol = opt.tol;
  qo.max_panels = opt.max_panels;
  return quad::integrate_real_line(f, spectral_breakpoints(op, p, opt), qo);
}

inline EnergyDecomposition energy_decomposition(const OperatingPoint& op, const SystemParams& p,
                                                double temperature, const EnergyOptions& opt = {}) {
  if (!op.stable) throw UnstableError("energy_decomposition: operating point is unstable; " +
                                      op.stability.diagnostics());
  EnergyDecomposition dec;
  dec.omega_m = p.omega_m;
  const auto th = integrate_component(Component::th, op, p, temperature, opt);
  dec.e_th = th.value;
  dec.err_th = th.error;
  if (op.G == 0.0) {
    dec.e_th_thermal = th.value;
  } else {
    const auto n = integrate_component(Component::n_coeff, op, p, temperature, opt);
    const auto mc = integrate_component(Component::mc_coeff, op, p, temperature, opt);
    const auto ms = integrate_component(Component::ms_coeff, op, p, temperature, opt);
    dec.e_n = n.value;
    dec.e_mc = mc.value;
    dec.e_ms = ms.value;
    dec.err_n = n.error;
    dec.err_mc = mc.error;
    dec.err_ms = ms.error;
    dec.e_th_thermal = integrate_component(Component::thermal_only, op, p, temperature, opt).value;
    dec.e_th_vacuum = integrate_component(Component::vacuum_only, op, p, temperature, opt).value;
  }
  dec.quadrature_error = dec.err_th + dec.err_n + dec.err_mc + dec.err_ms;
  return dec;
}

inline EnergyReport assemble_energy(const EnergyDecomposition& dec, const SqueezeField& sq,
                                    Convention convention = Convention::half_kT) {
  constexpr double hbar = PhysicalConstants::hbar;
  constexpr double kb = PhysicalConstants::k_B;
  EnergyReport rep;
  rep.delta_e = sq.n_stat * dec.e_n + sq.m_stat * (dec.e_mc * std::cos(sq.phi) - dec.e_ms * std::sin(sq.phi));
  rep.e_m = dec.e_th + rep.delta_e;
  rep.t_eff_half_kT = 2.0 * rep.e_m / kb;
  rep.n_eff_half_kT = 2.0 * rep.e_m / (hbar * dec.omega_m) - 0.5;
  rep.t_eff_equipartition = rep.e_m / kb;
  rep.n_eff_equipartition = rep.e_m / (hbar * dec.omega_m) - 0.5;
  rep.convention = convention;
  if (convention == Convention::half_kT) {
    rep.t_eff = rep.t_eff_half_kT;
    rep.n_eff = rep.n_eff_half_kT;
  } else {
    rep.t_eff = rep.t_eff_equipartition;
    rep.n_eff = rep.n_eff_equipartition;
  }
  return rep;
}

/// dE_m / dphi = -M (E_Mc sin phi + E_Ms cos phi)
inline double energy_phase_derivative(const EnergyDecomposition& dec, const SqueezeField& sq) {
  return -sq.m_stat * (dec.e_mc * std::sin(sq.phi) + dec.e_ms * std::cos(sq.phi));
}

}  // namespace sqzcool
