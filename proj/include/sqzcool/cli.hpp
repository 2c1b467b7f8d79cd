#pragma once

// Subcommand dispatch for the sqzcool tool. Kept in a header so the tests can
// drive it in-process; tools/sqzcool.cpp only forwards argv.
//
// Exit codes: 0 ok, 2 unstable operating point, 3 configuration or usage
// error, 4 numerical non-convergence, 5 calibration failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sqzcool/config.hpp"
#include "sqzcool/energetics.hpp"
#include "sqzcool/error.hpp"
#include "sqzcool/operating_point.hpp"
#include "sqzcool/spectra.hpp"
#include "sqzcool/sweep.hpp"

#ifndef SQZCOOL_VERSION
#define SQZCOOL_VERSION "0.0.0"
#endif

namespace sqzcool::cli {

enum ExitCode : int { ok = 0, unstable = 2, config = 3, numerics = 4, calibration = 5 };

/// Shortest-free fixed format: %.{precision}g, 17 digits by default so that
/// every double round-trips.
inline std::string num(double x, int precision = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

class Writer {
 public:
  Writer(std::ostream& os, int precision) : os_(os), precision_(precision) {}

  std::string n(double x) const { return num(x, precision_); }
  void comment(const std::string& s) { os_ << "# " << s << '\n'; }
  void kv(const std::string& key, const std::string& value) { os_ << key << " = " << value << '\n'; }
  void kv(const std::string& key, double value) { kv(key, n(value)); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }

 private:
  std::ostream& os_;
  int precision_;
};

inline std::string convention_note(Convention c) {
  return c == Convention::half_kT ? "half_kT (T_eff = 2 E_m / k_B, n_eff = 2 E_m / (hbar omega_m) - 1/2)"
                                  : "equipartition (T_eff = E_m / k_B, n_eff = E_m / (hbar omega_m) - 1/2)";
}

/// Resolved configuration in canonical SI units, as '#' lines.
inline void provenance(Writer& w, const std::string& command, const RunConfig& cfg) {
  const auto& p = cfg.params;
  w.comment(std::string("sqzcool ") + SQZCOOL_VERSION + " " + command);
  w.comment("convention: " + convention_note(cfg.numerics.convention));
  w.comment("[mechanical] omega_m_rad_s = " + w.n(p.omega_m));
  w.comment("[mechanical] gamma_m_rad_s = " + w.n(p.gamma_m));
  if (p.mass) w.comment("[mechanical] mass_kg = " + w.n(*p.mass));
  w.comment("[cavity] kappa_rad_s = " + w.n(p.kappa));
  w.comment("[cavity] g_m_rad_s = " + w.n(p.g_m));
  if (p.omega_c) w.comment("[cavity] omega_c_rad_s = " + w.n(*p.omega_c));
  if (p.cavity_length) w.comment("[cavity] length_m = " + w.n(*p.cavity_length));
  if (p.power_driven()) {
    w.comment("[drive] input_power_w = " + w.n(*p.input_power));
    w.comment("[drive] omega_p_rad_s = " + w.n(*p.omega_p));
    w.comment("[drive] delta0_rad_s = " + w.n(p.delta0));
  } else {
    w.comment("[drive] G_rad_s = " + w.n(*p.direct_G));
    w.comment("[drive] delta_rad_s = " + w.n(*p.direct_delta));
  }
  w.comment("[squeeze] r = " + w.n(cfg.squeeze.r));
  w.comment("[squeeze] phi_rad = " + w.n(cfg.squeeze.phi));
  w.comment("[bath] T_K = " + w.n(p.bath_temperature));
  const auto& n = cfg.numerics;
  w.comment("[numerics] quad_tol = " + w.n(n.quad_tol) + ", bath_cutoff_factor = " + w.n(n.bath_cutoff_factor) +
            ", max_panels = " + std::to_string(n.max_panels));
  if (!cfg.defaulted.empty()) {
    std::string d;
    for (const auto& s : cfg.defaulted) d += (d.empty() ? "" : ", ") + s;
    w.comment("figure defaults applied for: " + d + " (kappa = 0.2 omega_m, G = 0.3 omega_m, delta = omega_m)");
  }
}

inline void operating_point_lines(Writer& w, const OperatingPoint& op) {
  w.comment("operating point: G_rad_s = " + w.n(op.G) + ", delta_rad_s = " + w.n(op.delta) +
            (op.q_s ? ", q_s = " + w.n(*op.q_s) : std::string()));
  w.comment("stability: " + op.stability.diagnostics());
}

inline OperatingPoint stable_op(const RunConfig& cfg) {
  const auto op = resolve_operating_point(cfg.params);
  if (!op.stable) throw UnstableError("operating point is unstable: " + op.stability.diagnostics());
  return op;
}

inline std::vector<double> omega_grid(const NumericsConfig& n, double omega_m) {
  std::vector<double> g(n.omega_points);
  if (n.omega_points == 1) return {n.omega_min_wm * omega_m};
  for (std::size_t k = 0; k < n.omega_points; ++k)
    g[k] = omega_m * (n.omega_min_wm + (n.omega_max_wm - n.omega_min_wm) * static_cast<double>(k) /
                                           static_cast<double>(n.omega_points - 1));
  return g;
}

inline void cmd_spectrum(const RunConfig& cfg, Writer& w) {
  const auto op = stable_op(cfg);
  provenance(w, "spectrum", cfg);
  operating_point_lines(w, op);
  w.row({"omega_rad_s", "s_th", "s_ba", "s_n_coeff", "s_mc_coeff", "s_ms_coeff", "s_q_total"});
  for (double om : omega_grid(cfg.numerics, cfg.params.omega_m)) {
    const auto s = spectrum_at(om, op, cfg.params, cfg.squeeze, cfg.params.bath_temperature);
    w.row({w.n(om), w.n(s.s_th), w.n(s.s_ba), w.n(s.s_n), w.n(s.s_mc), w.n(s.s_ms), w.n(s.s_q_total)});
  }
}

inline void cmd_energy(const RunConfig& cfg, Writer& w) {
  const auto op = stable_op(cfg);
  const auto opt = cfg.energy_options();
  const auto dec = energy_decomposition(op, cfg.params, cfg.params.bath_temperature, opt);
  const auto rep = assemble_energy(dec, cfg.squeeze, opt.convention);
  provenance(w, "energy", cfg);
  operating_point_lines(w, op);
  w.kv("stability", op.stable ? "stable" : "unstable");
  w.kv("e_th_J", dec.e_th);
  w.kv("e_n_J", dec.e_n);
  w.kv("e_mc_J", dec.e_mc);
  w.kv("e_ms_J", dec.e_ms);
  w.kv("e_m_J", rep.e_m);
  w.kv("delta_e_J", rep.delta_e);
  w.kv("t_eff_K", rep.t_eff);
  w.kv("n_eff", rep.n_eff);
  w.kv("quadrature_error_J", dec.quadrature_error);
  w.kv("convention", std::string(to_string(rep.convention)));
  w.kv("t_eff_K_half_kT", rep.t_eff_half_kT);
  w.kv("n_eff_half_kT", rep.n_eff_half_kT);
  w.kv("t_eff_K_equipartition", rep.t_eff_equipartition);
  w.kv("n_eff_equipartition", rep.n_eff_equipartition);
  w.kv("e_th_thermal_J", dec.e_th_thermal);
  w.kv("e_th_vacuum_J", dec.e_th_vacuum);
  if (dec.e_mc != 0.0 || dec.e_ms != 0.0) w.kv("phi_m_rad", optimal_phase(dec));
}

inline void cmd_sweep(const RunConfig& cfg, const std::string& axis, Writer& w) {
  const auto& p = cfg.params;
  const auto opt = cfg.energy_options();
  if (axis == "G") {
    if (p.power_driven()) throw DomainError("sweep --axis G needs the direct-coupling drive (G, delta)");
    std::vector<double> gs;
    for (double g : cfg.numerics.G_values_wm) gs.push_back(g * p.omega_m);
    const auto fam = coupling_family_spectra(gs, omega_grid(cfg.numerics, p.omega_m), *p.direct_delta, p,
                                             cfg.squeeze, p.bath_temperature);
    provenance(w, "sweep G", cfg);
    for (const auto& m : fam.members) {
      if (m.stable)
        w.comment("G_rad_s = " + w.n(m.G) + ": peak_omega_rad_s = " + w.n(m.peak_omega) +
                  ", peak_s_q = " + w.n(m.peak_height));
      else
        w.comment("G_rad_s = " + w.n(m.G) + ": UNSTABLE, skipped; " + m.diagnostic);
    }
    w.row({"G_rad_s", "stable", "omega_rad_s", "s_q_total"});
    for (const auto& m : fam.members) {
      if (!m.stable) {
        w.row({w.n(m.G), "0", "", ""});
        continue;
      }
      for (const auto& s : m.spectrum) w.row({w.n(m.G), "1", w.n(s.omega), w.n(s.s_q_total)});
    }
    return;
  }

  const auto op = stable_op(cfg);
  const auto grid = uniform_phase_grid(cfg.numerics.phi_points);
  if (axis == "phi") {
    const auto sw = phase_sweep(cfg.squeeze.r, grid, op, p, p.bath_temperature, opt);
    provenance(w, "sweep phi", cfg);
    operating_point_lines(w, op);
    w.comment("argmin_phi_rad = " + w.n(grid[sw.argmin]));
    if (sw.dec.e_mc != 0.0 || sw.dec.e_ms != 0.0) w.comment("phi_m_rad = " + w.n(optimal_phase(sw.dec)));
    w.row({"phi_rad", "e_m_J", "delta_e_J", "t_eff_K", "n_eff", "stable"});
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto& r = sw.reports[k];
      w.row({w.n(grid[k]), w.n(r.e_m), w.n(r.delta_e), w.n(r.t_eff), w.n(r.n_eff), "1"});
    }
  } else if (axis == "r") {
    const auto fam = r_family_minima(cfg.numerics.r_values, grid, op, p, p.bath_temperature, opt);
    provenance(w, "sweep r", cfg);
    operating_point_lines(w, op);
    w.row({"r", "phi_argmin_rad", "phi_m_rad", "e_min_J", "e_min_closed_J", "t_eff_min_K", "n_eff_min", "stable"});
    auto emit = [&](const RFamilyRow& row) {
      w.row({w.n(row.r), w.n(row.phi_argmin), w.n(row.phi_m), w.n(row.at_min.e_m), w.n(row.e_min_closed),
             w.n(row.at_min.t_eff), w.n(row.at_min.n_eff), "1"});
    };
    emit(fam.baseline);
    for (const auto& row : fam.rows) emit(row);
  } else {
    throw DomainError("sweep: --axis must be phi, r or G");
  }
}

inline Knob parse_knob(const std::string& s) {
  for (Knob k : {Knob::kappa, Knob::delta, Knob::G, Knob::delta0, Knob::input_power})
    if (s == knob_name(k)) return k;
  throw DomainError("unknown axis '" + s + "' (kappa, delta, G, delta0, input_power)");
}

/// "lo:hi:n" -> n points from lo to hi inclusive.
inline std::vector<double> parse_range(const std::string& s, double unit) {
  std::vector<double> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("range '" + s + "': '" + item + "' is not a number");
    }
  }
  if (parts.size() != 3 || parts[2] < 2 || parts[2] != std::floor(parts[2]) || !(parts[1] > parts[0]))
    throw DomainError("range '" + s + "' must be lo:hi:n with hi > lo and integer n >= 2");
  const auto n = static_cast<std::size_t>(parts[2]);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = unit * (parts[0] + (parts[1] - parts[0]) * static_cast<double>(k) / static_cast<double>(n - 1));
  return out;
}

inline std::pair<double, double> parse_interval(const std::string& s, double unit) {
  const auto c = s.find(':');
  if (c == std::string::npos) throw DomainError("interval '" + s + "' must be lo:hi");
  try {
    const double lo = std::stod(s.substr(0, c));
    const double hi = std::stod(s.substr(c + 1));
    if (!(hi >= lo)) throw DomainError("interval '" + s + "' needs hi >= lo");
    return {lo * unit, hi * unit};
  } catch (const std::invalid_argument&) {
    throw DomainError("interval '" + s + "' is not numeric");
  }
}

inline void cmd_stability_map(const RunConfig& cfg, const std::string& xk, const std::string& xr,
                              const std::string& yk, const std::string& yr, Writer& w) {
  const auto kx = parse_knob(xk);
  const auto ky = parse_knob(yk);
  const double om = cfg.params.omega_m;
  const auto xs = parse_range(xr, kx == Knob::input_power ? 1.0 : om);
  const auto ys = parse_range(yr, ky == Knob::input_power ? 1.0 : om);
  const auto map = stability_map(kx, xs, ky, ys, cfg.params);
  provenance(w, "stability-map", cfg);
  w.comment("x axis " + map.x.name + " [" + map.x.unit + "], y axis " + map.y.name + " [" + map.y.unit + "]");
  w.row({map.x.name, map.y.name, "stable", "routh_stable", "agree", "max_re_lambda_rad_s", "G_rad_s", "delta_rad_s"});
  for (const auto& c : map.cells)
    w.row({w.n(c.x), w.n(c.y), c.stable ? "1" : "0", c.routh_stable ? "1" : "0", c.agree ? "1" : "0",
           w.n(c.max_real_part), w.n(c.G), w.n(c.delta)});
}

struct CalibrateArgs {
  double target_K = 1e-3;
  std::string kappa = "0.05:0.5";
  std::string delta = "0.5:1.5";
  std::string G = "0.05:0.35";
  double tolerance = 0.1;
};

inline void cmd_calibrate(const RunConfig& cfg, const CalibrateArgs& a, Writer& w, std::ostream& err) {
  const double om = cfg.params.omega_m;
  const auto [klo, khi] = parse_interval(a.kappa, om);
  const auto [dlo, dhi] = parse_interval(a.delta, om);
  const auto [glo, ghi] = parse_interval(a.G, om);
  CalibrationOptions co;
  co.grid_points = cfg.numerics.calib_grid_points;
  co.tolerance = a.tolerance;
  co.energy = cfg.energy_options();
  try {
    const auto res = calibrate_baseline(a.target_K, {klo, khi, dlo, dhi, glo, ghi}, cfg.params, co);
    provenance(w, "calibrate", cfg);
    w.comment("box (units of omega_m): kappa " + a.kappa + ", delta " + a.delta + ", G " + a.G);
    w.kv("kappa_rad_s", res.kappa);
    w.kv("delta_rad_s", res.delta);
    w.kv("G_rad_s", res.G);
    w.kv("kappa_wm", res.kappa / om);
    w.kv("delta_wm", res.delta / om);
    w.kv("G_wm", res.G / om);
    w.kv("target_t_eff_K", res.target_t_eff);
    w.kv("achieved_t_eff_K", res.achieved_t_eff);
    w.kv("residual", res.residual);
    w.kv("evaluations", std::to_string(res.evaluations));
    w.kv("stable_grid_points", std::to_string(res.stable_grid_points));
  } catch (const CalibrationError& e) {
    err << "calibration failed: " << e.what() << "; best achieved t_eff_K = " << num(e.best_achieved())
        << ", relative residual = " << num(e.residual()) << '\n';
    throw;
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(ConfigError::Kind::syntax, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mechanical cooling with a squeezed-vacuum drive: spectra, energies, sweeps"};
  app.set_version_flag("--version", std::string(SQZCOOL_VERSION));
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_path;
  app.add_option("-c,--config", config_path, "configuration file")->required();
  app.add_option("--set", overrides, "override a key: section.key=value (repeatable)");
  app.add_option("-o,--output", output_path, "write to this file instead of stdout");
  app.require_subcommand(1);

  auto* spectrum = app.add_subcommand("spectrum", "S_q(omega) and its components on the numerics omega grid");
  auto* energy = app.add_subcommand("energy", "energy decomposition, T_eff and n_eff");
  auto* sweep = app.add_subcommand("sweep", "phase sweep, r-family minima or coupling family");
  std::string axis = "phi";
  sweep->add_option("--axis", axis, "phi, r or G")->check(CLI::IsMember({"phi", "r", "G"}));
  auto* smap = app.add_subcommand("stability-map", "stability verdicts over two parameters");
  std::string xk, xr, yk, yr;
  smap->add_option("--x", xk, "x parameter: kappa, delta, G, delta0, input_power")->required();
  smap->add_option("--x-range", xr, "lo:hi:n (units of omega_m; W for input_power)")->required();
  smap->add_option("--y", yk, "y parameter")->required();
  smap->add_option("--y-range", yr, "lo:hi:n")->required();
  auto* calib = app.add_subcommand("calibrate", "fit (kappa, delta, G) to a no-squeezing T_eff");
  CalibrateArgs ca;
  calib->add_option("--target-K", ca.target_K, "target T_eff at r = 0, K");
  calib->add_option("--kappa-wm", ca.kappa, "search interval lo:hi, units of omega_m");
  calib->add_option("--delta-wm", ca.delta, "search interval lo:hi, units of omega_m");
  calib->add_option("--G-wm", ca.G, "search interval lo:hi, units of omega_m");
  calib->add_option("--tolerance", ca.tolerance, "accepted relative residual");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForVersion&) {
    out << SQZCOOL_VERSION << '\n';
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return config;
  }

  try {
    const auto cfg = parse_config(read_file(config_path), overrides);
    std::ostringstream buf;
    Writer w(buf, cfg.output.precision);
    if (*spectrum) cmd_spectrum(cfg, w);
    else if (*energy) cmd_energy(cfg, w);
    else if (*sweep) cmd_sweep(cfg, axis, w);
    else if (*smap) cmd_stability_map(cfg, xk, xr, yk, yr, w);
    else if (*calib) cmd_calibrate(cfg, ca, w, err);
    if (output_path.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(output_path, std::ios::binary);
      if (!f) throw ConfigError(ConfigError::Kind::invalid_value, "cannot write '" + output_path + "'");
      f << buf.str();
    }
    return ok;
  } catch (const ConfigError& e) {
    err << "config error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return config;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return config;
  } catch (const UnstableError& e) {
    err << "unstable: " << e.what() << '\n';
    return unstable;
  } catch (const CalibrationError&) {
    return calibration;
  } catch (const ComputationError& e) {
    err << "numerical failure: " << e.what() << " (best estimate " << num(e.best_estimate()) << ", error bound "
        << num(e.error_bound()) << ")\n";
    return numerics;
  }
}

}  // namespace sqzcool::cli
