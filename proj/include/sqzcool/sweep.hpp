#pragma once

// Sweeps over the squeezing phase and strength, families of spectra over the
// coupling, stability maps, and calibration of the unspecified (kappa, Delta,
// G) against a target no-squeezing temperature.
//
// A phase sweep costs one EnergyDecomposition: the integrals do not depend on
// (r, phi), only the assembly does.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sqzcool/energetics.hpp"
#include "sqzcool/error.hpp"
#include "sqzcool/operating_point.hpp"
#include "sqzcool/params.hpp"
#include "sqzcool/spectra.hpp"

namespace sqzcool {

struct Axis {
  std::string name;
  std::string unit;
  std::vector<double> values;
};

/// Inputs a sweep was evaluated with.
struct Provenance {
  SystemParams params;
  SqueezeField squeeze;
  double temperature = 0.0;
  double G = 0.0;
  double delta = 0.0;
};

/// phi in {0, 2pi/n, ..., 2pi (n-1)/n}
inline std::vector<double> uniform_phase_grid(std::size_t n) {
  if (n == 0) throw DomainError("phase grid needs at least one point");
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = two_pi * static_cast<double>(k) / static_cast<double>(n);
  return g;
}

namespace detail {

inline void require_monotone(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw DomainError(std::string(what) + ": empty grid");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw DomainError(std::string(what) + ": grid must be strictly increasing");
}

inline void require_stable(const OperatingPoint& op, const char* what) {
  if (!op.stable)
    throw UnstableError(std::string(what) + ": unstable operating point; " + op.stability.diagnostics());
}

}  // namespace detail

struct PhaseSweepResult {
  Axis phi;
  double r = 0.0;
  EnergyDecomposition dec;
  std::vector<EnergyReport> reports;
  std::size_t argmin = 0;
  std::size_t argmax = 0;
  StabilityReport stability;
  Provenance provenance;
};

/// Angle in [0, 2pi) minimizing e_mc cos(phi) - e_ms sin(phi).
///
/// The sinusoid is R cos(phi + alpha) with alpha = atan2(e_ms, e_mc). Both
/// stationary candidates -alpha and pi - alpha are evaluated and the lower one
/// is returned, so no branch convention of arctan is relied on.
inline double optimal_phase(double e_mc, double e_ms) {
  if (e_mc == 0.0 && e_ms == 0.0) throw DomainError("optimal_phase: phase undefined when E_Mc = E_Ms = 0");
  const double alpha = std::atan2(e_ms, e_mc);
  auto f = [&](double phi) { return e_mc * std::cos(phi) - e_ms * std::sin(phi); };
  const double a = canonical_phase(-alpha);
  const double b = canonical_phase(std::numbers::pi - alpha);
  return f(a) < f(b) ? a : b;
}

inline double optimal_phase(const EnergyDecomposition& dec) { return optimal_phase(dec.e_mc, dec.e_ms); }

/// Closed-form minimum over phi: e_th + N e_n - M sqrt(e_mc^2 + e_ms^2).
inline double minimum_energy_over_phase(const EnergyDecomposition& dec, double r) {
  const auto s = derive_photon_stats(r, 0.0);
  return dec.e_th + s.n_stat * dec.e_n - s.m_stat * std::hypot(dec.e_mc, dec.e_ms);
}

/// Assembles E_m(phi) on a grid from an existing decomposition.
inline PhaseSweepResult phase_sweep_from(const EnergyDecomposition& dec, double r,
                                         const std::vector<double>& phi_grid, Convention conv) {
  detail::require_monotone(phi_grid, "phase_sweep");
  PhaseSweepResult res;
  res.phi = {"phi", "rad", phi_grid};
  res.r = r;
  res.dec = dec;
  for (double phi : phi_grid) res.reports.push_back(assemble_energy(dec, derive_photon_stats(r, phi), conv));
  for (std::size_t k = 1; k < res.reports.size(); ++k) {
    if (res.reports[k].e_m < res.reports[res.argmin].e_m) res.argmin = k;
    if (res.reports[k].e_m > res.reports[res.argmax].e_m) res.argmax = k;
  }
  return res;
}

inline PhaseSweepResult phase_sweep(double r, const std::vector<double>& phi_grid, const OperatingPoint& op,
                                    const SystemParams& p, double temperature,
                                    const EnergyOptions& opt = {}) {
  detail::require_stable(op, "phase_sweep");
  auto res = phase_sweep_from(energy_decomposition(op, p, temperature, opt), r, phi_grid, opt.convention);
  res.stability = op.stability;
  res.provenance = {p, derive_photon_stats(r, 0.0), temperature, op.G, op.delta};
  return res;
}

struct RFamilyRow {
  double r = 0.0;
  double phi_argmin = 0.0;  ///< grid argmin
  double phi_m = 0.0;       ///< closed-form optimum (r > 0); 0 for r = 0
  EnergyReport at_min;      ///< report at the grid argmin
  double e_min_closed = 0.0;
};

struct RFamilyResult {
  Axis phi;
  RFamilyRow baseline;  ///< r = 0
  std::vector<RFamilyRow> rows;
  EnergyDecomposition dec;
  StabilityReport stability;
  Provenance provenance;
};

inline RFamilyResult r_family_minima(const std::vector<double>& r_values, const std::vector<double>& phi_grid,
                                     const OperatingPoint& op, const SystemParams& p, double temperature,
                                     const EnergyOptions& opt = {}) {
  detail::require_stable(op, "r_family_minima");
  RFamilyResult res;
  res.dec = energy_decomposition(op, p, temperature, opt);
  res.phi = {"phi", "rad", phi_grid};
  res.stability = op.stability;
  res.provenance = {p, SqueezeField{}, temperature, op.G, op.delta};

  auto row_for = [&](double r) {
    const auto sweep = phase_sweep_from(res.dec, r, phi_grid, opt.convention);
    RFamilyRow row;
    row.r = r;
    row.phi_argmin = phi_grid[sweep.argmin];
    row.at_min = sweep.reports[sweep.argmin];
    row.e_min_closed = minimum_energy_over_phase(res.dec, r);
    if (r > 0.0 && (res.dec.e_mc != 0.0 || res.dec.e_ms != 0.0)) row.phi_m = optimal_phase(res.dec);
    return row;
  };
  res.baseline = row_for(0.0);
  for (double r : r_values) {
    if (!(r >= 0.0)) throw DomainError("r_family_minima: r must be >= 0");
    res.rows.push_back(row_for(r));
  }
  return res;
}

struct CouplingMember {
  double G = 0.0;
  bool stable = false;
  std::string diagnostic;  ///< set when the member was skipped
  std::vector<SpectrumPoint> spectrum;
  double peak_height = 0.0;
  double peak_omega = 0.0;
};

struct CouplingFamilyResult {
  Axis omega;
  std::vector<CouplingMember> members;
  Provenance provenance;
};

/// S_q(omega) for each G at the effective detuning `delta`. Unstable members
/// are kept with stable = false and a diagnostic, and carry no spectrum.
inline CouplingFamilyResult coupling_family_spectra(const std::vector<double>& G_values,
                                                    const std::vector<double>& omega_grid, double delta,
                                                    const SystemParams& p, const SqueezeField& sq,
                                                    double temperature) {
  detail::require_monotone(omega_grid, "coupling_family_spectra");
  CouplingFamilyResult res;
  res.omega = {"omega", "rad/s", omega_grid};
  res.provenance = {p, sq, temperature, 0.0, delta};
  for (double G : G_values) {
    CouplingMember m;
    m.G = G;
    const auto op = direct_operating_point(G, delta, p);
    m.stable = op.stable;
    if (!op.stable) {
      m.diagnostic = op.stability.diagnostics();
      res.members.push_back(std::move(m));
      continue;
    }
    for (double w : omega_grid) {
      m.spectrum.push_back(spectrum_at(w, op, p, sq, temperature));
      if (m.spectrum.back().s_q_total > m.peak_height) {
        m.peak_height = m.spectrum.back().s_q_total;
        m.peak_omega = w;
      }
    }
    res.members.push_back(std::move(m));
  }
  return res;
}

/// Parameters that a stability map or calibration may vary.
enum class Knob { kappa, delta, G, delta0, input_power };

inline const char* knob_name(Knob k) {
  switch (k) {
    case Knob::kappa: return "kappa";
    case Knob::delta: return "delta";
    case Knob::G: return "G";
    case Knob::delta0: return "delta0";
    case Knob::input_power: return "input_power";
  }
  return "";
}

inline const char* knob_unit(Knob k) { return k == Knob::input_power ? "W" : "rad/s"; }

/// Sets one knob in SI units. delta and G address the direct-coupling mode,
/// delta0 and input_power the power-driven mode.
inline void set_knob(SystemParams& p, Knob k, double v) {
  switch (k) {
    case Knob::kappa: p.kappa = v; return;
    case Knob::delta:
      if (p.power_driven()) throw DomainError("knob 'delta' needs direct-coupling mode");
      p.direct_delta = v;
      return;
    case Knob::G:
      if (p.power_driven()) throw DomainError("knob 'G' needs direct-coupling mode");
      p.direct_G = v;
      return;
    case Knob::delta0: p.delta0 = v; return;
    case Knob::input_power:
      if (!p.power_driven()) throw DomainError("knob 'input_power' needs power-driven mode");
      p.input_power = v;
      return;
  }
}

struct StabilityCell {
  double x = 0.0;
  double y = 0.0;
  bool stable = false;
  bool routh_stable = false;
  bool agree = true;
  double max_real_part = 0.0;
  double G = 0.0;
  double delta = 0.0;
};

struct StabilityMapResult {
  Axis x;
  Axis y;
  std::vector<StabilityCell> cells;  ///< row-major, x fastest
  Provenance provenance;
};

inline StabilityMapResult stability_map(Knob kx, const std::vector<double>& xs, Knob ky,
                                        const std::vector<double>& ys, const SystemParams& p) {
  if (kx == ky) throw DomainError("stability_map: the two axes must differ");
  detail::require_monotone(xs, "stability_map x");
  detail::require_monotone(ys, "stability_map y");
  StabilityMapResult res;
  res.x = {knob_name(kx), knob_unit(kx), xs};
  res.y = {knob_name(ky), knob_unit(ky), ys};
  res.provenance = {p, SqueezeField{}, p.bath_temperature, 0.0, 0.0};
  for (double y : ys) {
    for (double x : xs) {
      SystemParams q = p;
      set_knob(q, kx, x);
      set_knob(q, ky, y);
      const auto op = resolve_operating_point(q);
      res.cells.push_back({x, y, op.stable, op.stability.routh_stable, op.stability.agree,
                           op.stability.max_real_part, op.G, op.delta});
    }
  }
  return res;
}

/// Search box for calibration, in rad/s.
struct CalibrationBox {
  double kappa_lo, kappa_hi;
  double delta_lo, delta_hi;
  double G_lo, G_hi;

  static CalibrationBox in_units_of(double omega_m, double k_lo, double k_hi, double d_lo, double d_hi,
                                    double g_lo, double g_hi) {
    return {k_lo * omega_m, k_hi * omega_m, d_lo * omega_m, d_hi * omega_m, g_lo * omega_m, g_hi * omega_m};
  }
};

struct CalibrationOptions {
  std::size_t grid_points = 7;   ///< per axis for the coarse stage
  double tolerance = 0.1;        ///< accepted |T - target| / target
  double refine_to = 1e-6;       ///< stop refining below this relative residual
  int max_refine_iterations = 200;
  EnergyOptions energy{};
};

struct CalibrationResult {
  SystemParams params;  ///< direct-coupling mode with the recovered (kappa, delta, G)
  double kappa = 0.0;
  double delta = 0.0;
  double G = 0.0;
  double achieved_t_eff = 0.0;
  double target_t_eff = 0.0;
  double residual = 0.0;  ///< |achieved - target| / target
  std::size_t evaluations = 0;
  std::size_t stable_grid_points = 0;
};

/// No-squeezing T_eff at direct (kappa, delta, G); nullopt when unstable.
inline std::optional<double> baseline_t_eff(SystemParams p, double kappa, double delta, double G,
                                            const EnergyOptions& opt) {
  p.kappa = kappa;
  p.input_power.reset();
  p.direct_G = G;
  p.direct_delta = delta;
  const auto op = direct_operating_point(G, delta, p);
  if (!op.stable) return std::nullopt;
  const auto dec = energy_decomposition(op, p, p.bath_temperature, opt);
  return assemble_energy(dec, SqueezeField{}, opt.convention).t_eff;
}

/// Finds (kappa, delta, G) inside `box` whose r = 0 effective temperature is
/// closest to `target`: coarse grid, then compass search from the best grid
/// point with step halving. Deterministic.
inline CalibrationResult calibrate_baseline(double target, const CalibrationBox& box, const SystemParams& p,
                                            const CalibrationOptions& copt = {}) {
  if (!(target > 0.0)) throw DomainError("calibrate_baseline: target must be > 0");
  if (copt.grid_points < 2) throw DomainError("calibrate_baseline: need >= 2 grid points per axis");
  const std::array<double, 3> lo{box.kappa_lo, box.delta_lo, box.G_lo};
  const std::array<double, 3> hi{box.kappa_hi, box.delta_hi, box.G_hi};
  for (int i = 0; i < 3; ++i)
    if (!(hi[i] >= lo[i])) throw DomainError("calibrate_baseline: malformed box");
  if (!(box.kappa_lo > 0.0) || !(box.G_lo >= 0.0))
    throw DomainError("calibrate_baseline: need kappa > 0 and G >= 0 throughout the box");

  CalibrationResult res;
  res.target_t_eff = target;
  auto objective = [&](const std::array<double, 3>& x) -> std::optional<double> {
    ++res.evaluations;
    const auto t = baseline_t_eff(p, x[0], x[1], x[2], copt.energy);
    if (!t) return std::nullopt;
    return *t;
  };

  const std::size_t n = copt.grid_points;
  auto at = [&](int axis, std::size_t k) {
    return lo[axis] + (hi[axis] - lo[axis]) * static_cast<double>(k) / static_cast<double>(n - 1);
  };
  std::array<double, 3> best_x{};
  double best_t = 0.0;
  double best_res = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const std::array<double, 3> x{at(0, i), at(1, j), at(2, k)};
        const auto t = objective(x);
        if (!t) continue;
        ++res.stable_grid_points;
        const double r = std::abs(*t - target) / target;
        if (r < best_res) {
          best_res = r;
          best_x = x;
          best_t = *t;
        }
      }
  if (res.stable_grid_points == 0)
    throw CalibrationError("calibrate_baseline: no stable point in the search box", 0.0,
                           std::numeric_limits<double>::infinity());

  std::array<double, 3> step;
  for (int a = 0; a < 3; ++a) step[a] = 0.5 * (hi[a] - lo[a]) / static_cast<double>(n - 1);
  for (int it = 0; it < copt.max_refine_iterations && best_res > copt.refine_to; ++it) {
    bool moved = false;
    for (int a = 0; a < 3 && !moved; ++a) {
      for (double sgn : {1.0, -1.0}) {
        std::array<double, 3> x = best_x;
        x[a] = std::clamp(x[a] + sgn * step[a], lo[a], hi[a]);
        if (x[a] == best_x[a]) continue;
        const auto t = objective(x);
        if (!t) continue;
        const double r = std::abs(*t - target) / target;
        if (r < best_res) {
          best_res = r;
          best_x = x;
          best_t = *t;
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      for (auto& s : step) s *= 0.5;
      if (step[0] <= 1e-12 * (hi[0] - lo[0] + box.kappa_lo)) break;
    }
  }

  res.kappa = best_x[0];
  res.delta = best_x[1];
  res.G = best_x[2];
  res.achieved_t_eff = best_t;
  res.residual = best_res;
  res.params = p;
  res.params.kappa = res.kappa;
  res.params.input_power.reset();
  res.params.direct_G = res.G;
  res.params.direct_delta = res.delta;
  if (best_res > copt.tolerance)
    throw CalibrationError("calibrate_baseline: best point misses the target by more than the tolerance",
                           best_t, best_res);
  return res;
}

}  // namespace sqzcool
