#pragma once

// Steady state of the driven cavity, the linearized drift matrix around it,
// and the stability verdict.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sqzcool/error.hpp"
#include "sqzcool/params.hpp"
#include "sqzcool/polynomial.hpp"

namespace sqzcool {

using cplx = std::complex<double>;

/// Linearized dynamics over the fluctuation basis (da, da^dag, dp, dq).
struct DriftMatrix {
  Eigen::Matrix4cd m;
  /// max(kappa, omega_m); sets the stability margin.
  double frequency_scale = 0.0;
};

struct StabilityReport {
  bool stable = false;           ///< eigenvalue verdict: all Re(lambda) < -margin
  bool routh_stable = false;     ///< Routh-Hurwitz verdict on the real quartic
  bool agree = true;
  bool in_margin_band = false;   ///< |max Re(lambda)| < margin; verdicts may legitimately differ
  double max_real_part = 0.0;
  double margin = 0.0;
  std::array<cplx, 4> eigenvalues{};
  std::array<double, 5> char_poly{};  ///< det(lambda I - A), highest degree first
  double char_poly_imag_residue = 0.0;
  std::vector<double> routh_first_column;

  std::string diagnostics() const {
    std::ostringstream os;
    os.precision(6);
    os << "max Re(lambda) = " << max_real_part << " rad/s (margin " << margin << ")"
       << "; eigen verdict " << (stable ? "stable" : "unstable") << "; Routh-Hurwitz verdict "
       << (routh_stable ? "stable" : "unstable");
    if (!agree) os << (in_margin_band ? " [disagree inside margin band]" : " [DISAGREE]");
    return os.str();
  }
};

struct OperatingPoint {
  std::optional<double> q_s;  ///< steady displacement (dimensionless); unset in direct mode with g_m = 0
  std::optional<double> a_s;  ///< steady intracavity amplitude, real >= 0
  double p_s = 0.0;
  double delta = 0.0;  ///< effective detuning, rad/s
  double G = 0.0;      ///< effective coupling g_m a_s, rad/s
  bool stable = false;
  bool principal = true;
  StabilityReport stability;
};

/// Eigenvalue verdict plus Routh-Hurwitz cross-check.
inline StabilityReport is_stable(const DriftMatrix& dm) {
  StabilityReport rep;
  rep.margin = 1e-9 * dm.frequency_scale;

  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(dm.m, false);
  if (es.info() != Eigen::Success) throw ComputationError("drift-matrix eigen-solver did not converge");
  rep.max_real_part = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    rep.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    rep.max_real_part = std::max(rep.max_real_part, es.eigenvalues()(i).real());
  }
  rep.stable = rep.max_real_part < -rep.margin;
  rep.in_margin_band = std::abs(rep.max_real_part) < rep.margin;

  // Faddeev-LeVerrier: det(lambda I - A) = sum_k c_k lambda^k
  const Eigen::Matrix4cd& a = dm.m;
  std::array<cplx, 5> c{};  // c[k] multiplies lambda^k
  c[4] = 1.0;
  Eigen::Matrix4cd mk = Eigen::Matrix4cd::Zero();
  for (int k = 1; k <= 4; ++k) {
    mk = a * mk + c[static_cast<std::size_t>(5 - k)] * Eigen::Matrix4cd::Identity();
    c[static_cast<std::size_t>(4 - k)] = -(a * mk).trace() / static_cast<double>(k);
  }
  std::vector<double> coeffs;
  double worst = 0.0;
  for (int k = 4; k >= 0; --k) {
    const cplx ck = c[static_cast<std::size_t>(k)];
    rep.char_poly[static_cast<std::size_t>(4 - k)] = ck.real();
    coeffs.push_back(ck.real());
    if (ck != cplx{0.0, 0.0}) worst = std::max(worst, std::abs(ck.imag()) / std::abs(ck));
  }
  rep.char_poly_imag_residue = worst;

  const auto routh = poly::routh_hurwitz(coeffs);
  rep.routh_stable = routh.stable;
  rep.routh_first_column = routh.first_column;
  rep.agree = rep.routh_stable == rep.stable;
  return rep;
}

/// Drift matrix of the linearized Langevin equations, basis (da, da^dag, dp, dq).
/// The steady field is taken real, so G* = G.
inline DriftMatrix drift_matrix(const OperatingPoint& op, const SystemParams& p) {
  const cplx i{0.0, 1.0};
  const double k = p.kappa;
  const double d = op.delta;
  const double g = op.G;
  DriftMatrix dm;
  dm.m << -(k + i * d), 0.0, 0.0, i * g,
          0.0, -(k - i * d), 0.0, -i * g,
          g, g, -p.gamma_m, -p.omega_m,
          0.0, 0.0, p.omega_m, 0.0;
  dm.frequency_scale = std::max(p.kappa, p.omega_m);
  return dm;
}

namespace detail {

inline void attach_stability(OperatingPoint& op, const SystemParams& p) {
  op.stability = is_stable(drift_matrix(op, p));
  op.stable = op.stability.stable;
}

/// Real roots u of u^3 - 2 d u^2 + (1 + d^2) u - P = 0, where u = g_m q / kappa,
/// d = Delta0 / kappa and P = g_m^2 eps^2 / (omega_m kappa^3).
inline std::vector<double> scaled_steady_roots(double d, double load) {
  return poly::real_roots({1.0, -2.0 * d, 1.0 + d * d, -load});
}

}  // namespace detail

/// Operating point with G and the effective detuning prescribed directly.
inline OperatingPoint direct_operating_point(double G, double delta, const SystemParams& p) {
  if (!(G >= 0.0)) throw DomainError("direct_operating_point: G must be >= 0");
  OperatingPoint op;
  op.G = G;
  op.delta = delta;
  if (p.g_m > 0.0) {
    op.a_s = G / p.g_m;
    op.q_s = G * G / (p.g_m * p.omega_m);
  } else if (G == 0.0) {
    op.a_s = 0.0;
    op.q_s = 0.0;
  }
  detail::attach_stability(op, p);
  return op;
}

/// All steady states of the power-driven cavity, ascending in q_s. The
/// `principal` flag marks the branch reached by ramping the input power up
/// from zero.
inline std::vector<OperatingPoint> solve_steady_state(const SystemParams& p) {
  if (!p.input_power) throw DomainError("solve_steady_state: needs input_power mode");
  if (!(p.kappa > 0.0)) throw DomainError("solve_steady_state: kappa must be > 0");
  const double eps = pump_amplitude(*p.input_power, *p.omega_p, p.kappa);

  auto make = [&](double q) {
    OperatingPoint op;
    op.q_s = q;
    op.delta = p.delta0 - p.g_m * q;
    const double a = eps / std::sqrt(p.kappa * p.kappa + op.delta * op.delta);
    op.a_s = a;
    op.G = p.g_m * a;
    op.principal = false;
    detail::attach_stability(op, p);
    return op;
  };

  if (p.g_m == 0.0 || eps == 0.0) {
    auto op = make(0.0);
    op.principal = true;
    return {op};
  }

  const double d = p.delta0 / p.kappa;
  const double load = p.g_m * p.g_m * eps * eps / (p.omega_m * p.kappa * p.kappa * p.kappa);
  const auto roots = detail::scaled_steady_roots(d, load);
  if (roots.empty()) throw ComputationError("steady-state cubic returned no real root");

  // follow the branch that starts at u = 0 while the load grows from zero
  constexpr int ramp_steps = 400;
  double tracked = 0.0;
  for (int s = 1; s <= ramp_steps; ++s) {
    const auto rs = detail::scaled_steady_roots(d, load * s / ramp_steps);
    double best = rs.front();
    for (double u : rs)
      if (std::abs(u - tracked) < std::abs(best - tracked)) best = u;
    tracked = best;
  }

  std::vector<OperatingPoint> out;
  std::size_t principal = 0;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    out.push_back(make(p.kappa * roots[j] / p.g_m));
    if (std::abs(roots[j] - tracked) < std::abs(roots[principal] - tracked)) principal = j;
  }
  out[principal].principal = true;
  return out;
}

/// The operating point used for spectra: principal steady state in power
/// mode, the prescribed (G, Delta) in direct mode.
inline OperatingPoint resolve_operating_point(const SystemParams& p) {
  p.validate();
  if (p.power_driven()) {
    for (const auto& op : solve_steady_state(p))
      if (op.principal) return op;
    throw ComputationError("no principal steady state");
  }
  return direct_operating_point(*p.direct_G, *p.direct_delta, p);
}

}  // namespace sqzcool
