#pragma once

// Sectioned key = value configuration. Every physical key names its unit in
// a suffix (omega_m_hz, kappa_wm, T_K, ...); values are converted to SI and
// angular frequency here and nowhere else.
//
//   [mechanical]  omega_m  gamma_m  mass
//   [cavity]      kappa  g_m  omega_c  length
//   [drive]       input_power  wavelength  omega_p  delta0  |  G  delta
//   [squeeze]     r  phi
//   [bath]        T
//   [numerics]    quad_tol bath_cutoff_factor max_panels phi_points r_values
//                 omega_min_wm omega_max_wm omega_points G_values_wm convention
//                 calib_grid_points
//   [output]      precision
//
// Frequency suffixes: _hz (ordinary, times 2 pi), _rad_s, _wm (multiples of
// omega_m). Other suffixes: _K _mK, _w _mw, _m _nm, _kg, _rad _pi.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sqzcool/constants.hpp"
#include "sqzcool/energetics.hpp"
#include "sqzcool/params.hpp"

namespace sqzcool {

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { syntax, unknown_key, missing_key, unit_mismatch, duplicate_key, invalid_value };

  ConfigError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline const char* to_string(ConfigError::Kind k) {
  switch (k) {
    case ConfigError::Kind::syntax: return "syntax error";
    case ConfigError::Kind::unknown_key: return "unknown key";
    case ConfigError::Kind::missing_key: return "missing key";
    case ConfigError::Kind::unit_mismatch: return "unit mismatch";
    case ConfigError::Kind::duplicate_key: return "duplicate key";
    case ConfigError::Kind::invalid_value: return "invalid value";
  }
  return "";
}

struct NumericsConfig {
  double quad_tol = 1e-8;
  double bath_cutoff_factor = 100.0;
  std::size_t max_panels = 50000;
  std::size_t phi_points = 720;
  std::vector<double> r_values{0.3, 0.5, 1.0, 1.5, 2.0};
  double omega_min_wm = 0.0;
  double omega_max_wm = 2.0;
  std::size_t omega_points = 2001;
  std::vector<double> G_values_wm{0.0, 0.15, 0.2, 0.25, 0.3};
  Convention convention = Convention::half_kT;
  std::size_t calib_grid_points = 7;
};

struct OutputConfig {
  int precision = 17;
};

struct RunConfig {
  SystemParams params;
  SqueezeField squeeze;
  NumericsConfig numerics;
  OutputConfig output;
  /// Physics values taken from the figure defaults rather than the file.
  std::vector<std::string> defaulted;

  EnergyOptions energy_options() const {
    EnergyOptions o;
    o.tol = numerics.quad_tol;
    o.bath_cutoff_factor = numerics.bath_cutoff_factor;
    o.max_panels = numerics.max_panels;
    o.convention = numerics.convention;
    return o;
  }
};

namespace config_detail {

enum class Quantity { frequency, frequency_no_wm, temperature, power, length, mass, angle, dimensionless };

struct KeySpec {
  std::string_view section;
  std::string_view base;
  Quantity quantity;
};

inline constexpr KeySpec physical_keys[] = {
    {"mechanical", "omega_m", Quantity::frequency_no_wm},
    {"mechanical", "gamma_m", Quantity::frequency},
    {"mechanical", "mass", Quantity::mass},
    {"cavity", "kappa", Quantity::frequency},
    {"cavity", "g_m", Quantity::frequency},
    {"cavity", "omega_c", Quantity::frequency_no_wm},
    {"cavity", "length", Quantity::length},
    {"drive", "input_power", Quantity::power},
    {"drive", "wavelength", Quantity::length},
    {"drive", "omega_p", Quantity::frequency_no_wm},
    {"drive", "delta0", Quantity::frequency},
    {"drive", "G", Quantity::frequency},
    {"drive", "delta", Quantity::frequency},
    {"squeeze", "r", Quantity::dimensionless},
    {"squeeze", "phi", Quantity::angle},
    {"bath", "T", Quantity::temperature},
};

inline constexpr std::string_view numerics_keys[] = {
    "quad_tol",     "bath_cutoff_factor", "max_panels", "phi_points", "r_values",          "omega_min_wm",
    "omega_max_wm", "omega_points",       "G_values_wm", "convention", "calib_grid_points"};
inline constexpr std::string_view output_keys[] = {"precision"};

inline constexpr std::string_view sections[] = {"mechanical", "cavity",   "drive", "squeeze",
                                                "bath",       "numerics", "output"};

inline std::vector<std::string_view> suffixes(Quantity q) {
  switch (q) {
    case Quantity::frequency: return {"hz", "rad_s", "wm"};
    case Quantity::frequency_no_wm: return {"hz", "rad_s"};
    case Quantity::temperature: return {"K", "mK"};
    case Quantity::power: return {"w", "mw"};
    case Quantity::length: return {"m", "nm"};
    case Quantity::mass: return {"kg"};
    case Quantity::angle: return {"rad", "pi"};
    case Quantity::dimensionless: return {""};
  }
  return {};
}

/// A key = value line after lexing.
struct Entry {
  std::string section;
  std::string key;
  std::string base;  ///< key stripped of its unit suffix (== key for non-physical keys)
  std::string unit;
  std::string value;
  int line = 0;
  int value_column = 0;
};

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string where(int line, int col) {
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

/// Splits `key` into (base, unit) against the known keys of `section`.
inline Entry classify(Entry e) {
  const bool numeric_section = e.section == "numerics" || e.section == "output";
  if (numeric_section) {
    const bool known = e.section == "numerics"
                           ? std::find(std::begin(numerics_keys), std::end(numerics_keys), e.key) != std::end(numerics_keys)
                           : std::find(std::begin(output_keys), std::end(output_keys), e.key) != std::end(output_keys);
    if (!known)
      throw ConfigError(ConfigError::Kind::unknown_key,
                        "unknown key '" + e.key + "' in [" + e.section + "] at line " + std::to_string(e.line));
    e.base = e.key;
    return e;
  }
  const KeySpec* match = nullptr;
  for (const auto& ks : physical_keys) {
    if (ks.section != e.section) continue;
    const bool exact = e.key == ks.base;
    const bool prefixed = e.key.size() > ks.base.size() + 1 && e.key.compare(0, ks.base.size(), ks.base) == 0 &&
                          e.key[ks.base.size()] == '_';
    if (exact || prefixed) match = &ks;
  }
  if (!match)
    throw ConfigError(ConfigError::Kind::unknown_key,
                      "unknown key '" + e.key + "' in [" + e.section + "] at line " + std::to_string(e.line));
  e.base = std::string(match->base);
  e.unit = e.key.size() > match->base.size() ? e.key.substr(match->base.size() + 1) : "";
  const auto allowed = suffixes(match->quantity);
  if (std::find(allowed.begin(), allowed.end(), e.unit) == allowed.end()) {
    std::string list;
    for (auto s : allowed) list += (list.empty() ? "" : ", ") + (s.empty() ? std::string("(none)") : "_" + std::string(s));
    throw ConfigError(ConfigError::Kind::unit_mismatch,
                      "key '" + e.key + "' at line " + std::to_string(e.line) +
                          (e.unit.empty() ? " has no unit suffix" : " has unit suffix '_" + e.unit + "'") +
                          "; accepted: " + list);
  }
  return e;
}

inline std::vector<Entry> lex(std::string_view text) {
  std::vector<Entry> out;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    const int col0 = static_cast<int>(first) + 1;
    line = trim(line);

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(ConfigError::Kind::syntax,
                          where(line_no, col0 + static_cast<int>(line.size())) + ": section header must end with ']'");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (std::find(std::begin(sections), std::end(sections), section) == std::end(sections))
        throw ConfigError(ConfigError::Kind::syntax, where(line_no, col0 + 1) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = raw.find('=');
    if (eq == std::string_view::npos || eq >= first + line.size())
      throw ConfigError(ConfigError::Kind::syntax, where(line_no, col0) + ": expected 'key = value'");
    if (section.empty())
      throw ConfigError(ConfigError::Kind::syntax, where(line_no, col0) + ": key outside any [section]");
    Entry e;
    e.section = section;
    e.key = std::string(trim(raw.substr(first, eq - first)));
    if (e.key.empty()) throw ConfigError(ConfigError::Kind::syntax, where(line_no, col0) + ": empty key");
    for (std::size_t i = 0; i < e.key.size(); ++i) {
      const char ch = e.key[i];
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
        throw ConfigError(ConfigError::Kind::syntax,
                          where(line_no, col0 + static_cast<int>(i)) + ": invalid character in key");
    }
    const std::string_view rest = raw.substr(eq + 1, first + line.size() - eq - 1);
    const auto vstart = rest.find_first_not_of(" \t");
    e.value = std::string(trim(rest));
    e.value_column = static_cast<int>(eq + 2 + (vstart == std::string_view::npos ? 0 : vstart));
    if (e.value.empty())
      throw ConfigError(ConfigError::Kind::syntax, where(line_no, e.value_column) + ": missing value");
    e.line = line_no;
    out.push_back(classify(std::move(e)));
  }
  return out;
}

inline double parse_number(const Entry& e, std::string_view s, int column) {
  double v = 0.0;
  const auto* b = s.data();
  const auto* end = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw ConfigError(ConfigError::Kind::syntax, where(e.line, column) + ": '" + std::string(s) +
                                                     "' is not a finite number (key '" + e.key + "')");
  return v;
}

inline double parse_number(const Entry& e) { return parse_number(e, e.value, e.value_column); }

inline std::vector<double> parse_list(const Entry& e) {
  std::vector<double> out;
  std::size_t start = 0;
  const std::string_view v = e.value;
  while (start <= v.size()) {
    auto comma = v.find(',', start);
    if (comma == std::string_view::npos) comma = v.size();
    const auto item = trim(v.substr(start, comma - start));
    const int col = e.value_column + static_cast<int>(start);
    if (item.empty()) throw ConfigError(ConfigError::Kind::syntax, where(e.line, col) + ": empty list item");
    out.push_back(parse_number(e, item, col));
    start = comma + 1;
  }
  return out;
}

inline std::size_t parse_count(const Entry& e) {
  const double v = parse_number(e);
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9)
    throw ConfigError(ConfigError::Kind::invalid_value, "key '" + e.key + "' at line " + std::to_string(e.line) +
                                                            " must be a positive integer");
  return static_cast<std::size_t>(v);
}

}  // namespace config_detail

/// Parses configuration text; `overrides` are "section.key=value" strings
/// that replace any same-quantity entry of the file.
inline RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {}) {
  using namespace config_detail;
  auto entries = lex(text);

  for (const auto& ov : overrides) {
    const auto dot = ov.find('.');
    const auto eq = ov.find('=');
    if (dot == std::string::npos || eq == std::string::npos || dot > eq)
      throw ConfigError(ConfigError::Kind::syntax, "override '" + ov + "': expected section.key=value");
    const std::string synthetic = "[" + ov.substr(0, dot) + "]\n" + ov.substr(dot + 1) + "\n";
    auto extra = lex(synthetic);
    for (auto& e : extra) {
      e.line = 0;
      std::erase_if(entries, [&](const Entry& x) { return x.section == e.section && x.base == e.base; });
      entries.push_back(e);
    }
  }

  std::map<std::pair<std::string, std::string>, const Entry*> by_base;
  for (const auto& e : entries) {
    auto [it, fresh] = by_base.try_emplace({e.section, e.base}, &e);
    if (!fresh)
      throw ConfigError(ConfigError::Kind::duplicate_key,
                        "[" + e.section + "] '" + e.base + "' given twice: '" + it->second->key + "' at line " +
                            std::to_string(it->second->line) + " and '" + e.key + "' at line " +
                            std::to_string(e.line));
  }
  auto get = [&](std::string_view section, std::string_view base) -> const Entry* {
    const auto it = by_base.find({std::string(section), std::string(base)});
    return it == by_base.end() ? nullptr : it->second;
  };

  // malformed numbers are reported before anything that depends on them
  for (const auto& e : entries) {
    if (e.key == "convention") continue;
    if (e.key == "r_values" || e.key == "G_values_wm")
      parse_list(e);
    else
      parse_number(e);
  }

  RunConfig cfg;
  // required physics
  std::vector<std::string> missing;
  const bool geometric = get("mechanical", "mass") && get("cavity", "omega_c") && get("cavity", "length");
  if (!get("mechanical", "omega_m")) missing.push_back("[mechanical] omega_m_hz | omega_m_rad_s");
  if (!get("mechanical", "gamma_m")) missing.push_back("[mechanical] gamma_m_hz | gamma_m_rad_s | gamma_m_wm");
  if (!get("cavity", "g_m") && !geometric)
    missing.push_back("[cavity] g_m_hz | g_m_rad_s | g_m_wm (or mass + omega_c + length)");
  if (!get("bath", "T")) missing.push_back("[bath] T_K | T_mK");
  const bool power = get("drive", "input_power") != nullptr;
  if (power) {
    if (!get("drive", "omega_p") && !get("drive", "wavelength"))
      missing.push_back("[drive] omega_p_hz | omega_p_rad_s | wavelength_m | wavelength_nm");
    if (!get("drive", "delta0")) missing.push_back("[drive] delta0_hz | delta0_rad_s | delta0_wm");
  } else if (get("drive", "G") && !get("drive", "delta")) {
    missing.push_back("[drive] delta_hz | delta_rad_s | delta_wm");
  }
  if (!missing.empty()) {
    std::string msg = "missing required keys:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw ConfigError(ConfigError::Kind::missing_key, msg);
  }
  if (power && (get("drive", "G") || get("drive", "delta")))
    throw ConfigError(ConfigError::Kind::invalid_value,
                      "[drive] input_power selects the power-driven mode; G and delta must not be given");
  if (!power && get("drive", "delta0"))
    throw ConfigError(ConfigError::Kind::invalid_value, "[drive] delta0 needs input_power (power-driven mode)");

  // omega_m first, since _wm values refer to it
  auto& p = cfg.params;
  auto freq = [&](const Entry& e) {
    const double v = parse_number(e);
    if (e.unit == "hz") return hz_to_rad_s(v);
    if (e.unit == "wm") return v * p.omega_m;
    return v;
  };
  p.omega_m = freq(*get("mechanical", "omega_m"));
  if (!(p.omega_m > 0.0)) throw ConfigError(ConfigError::Kind::invalid_value, "omega_m must be > 0");
  p.gamma_m = freq(*get("mechanical", "gamma_m"));
  if (const auto* e = get("mechanical", "mass")) p.mass = parse_number(*e);

  if (const auto* e = get("cavity", "kappa")) {
    p.kappa = freq(*e);
  } else {
    p.kappa = 0.2 * p.omega_m;
    cfg.defaulted.push_back("kappa");
  }
  if (const auto* e = get("cavity", "omega_c")) p.omega_c = freq(*e);
  if (const auto* e = get("cavity", "length")) {
    const double v = parse_number(*e);
    p.cavity_length = e->unit == "nm" ? v * 1e-9 : v;
  }
  if (const auto* e = get("cavity", "g_m")) {
    p.g_m = freq(*e);
  } else {
    p.g_m = coupling_from_geometry(*p.omega_c, *p.cavity_length, *p.mass, p.omega_m).g_m;
  }

  if (power) {
    const auto* e = get("drive", "input_power");
    const double v = parse_number(*e);
    p.input_power = e->unit == "mw" ? v * 1e-3 : v;
    if (const auto* w = get("drive", "omega_p")) {
      p.omega_p = freq(*w);
    } else {
      const auto* l = get("drive", "wavelength");
      const double lv = parse_number(*l);
      p.omega_p = omega_from_wavelength(l->unit == "nm" ? lv * 1e-9 : lv);
    }
    p.delta0 = freq(*get("drive", "delta0"));
  } else if (const auto* e = get("drive", "G")) {
    p.direct_G = freq(*e);
    p.direct_delta = freq(*get("drive", "delta"));
  } else {
    p.direct_G = 0.3 * p.omega_m;
    p.direct_delta = p.omega_m;
    cfg.defaulted.push_back("G");
    cfg.defaulted.push_back("delta");
  }

  {
    const auto* e = get("bath", "T");
    const double v = parse_number(*e);
    p.bath_temperature = e->unit == "mK" ? v * 1e-3 : v;
  }

  double r = 0.0;
  double phi = 0.0;
  if (const auto* e = get("squeeze", "r")) r = parse_number(*e);
  if (const auto* e = get("squeeze", "phi")) {
    const double v = parse_number(*e);
    phi = e->unit == "pi" ? v * std::numbers::pi : v;
  }

  auto& n = cfg.numerics;
  if (const auto* e = get("numerics", "quad_tol")) n.quad_tol = parse_number(*e);
  if (const auto* e = get("numerics", "bath_cutoff_factor")) n.bath_cutoff_factor = parse_number(*e);
  if (const auto* e = get("numerics", "max_panels")) n.max_panels = parse_count(*e);
  if (const auto* e = get("numerics", "phi_points")) n.phi_points = parse_count(*e);
  if (const auto* e = get("numerics", "r_values")) n.r_values = parse_list(*e);
  if (const auto* e = get("numerics", "omega_min_wm")) n.omega_min_wm = parse_number(*e);
  if (const auto* e = get("numerics", "omega_max_wm")) n.omega_max_wm = parse_number(*e);
  if (const auto* e = get("numerics", "omega_points")) n.omega_points = parse_count(*e);
  if (const auto* e = get("numerics", "G_values_wm")) n.G_values_wm = parse_list(*e);
  if (const auto* e = get("numerics", "calib_grid_points")) n.calib_grid_points = parse_count(*e);
  if (const auto* e = get("numerics", "convention")) {
    if (e->value == "half_kT")
      n.convention = Convention::half_kT;
    else if (e->value == "equipartition")
      n.convention = Convention::equipartition;
    else
      throw ConfigError(ConfigError::Kind::invalid_value, "[numerics] convention must be half_kT or equipartition (line " +
                                                              std::to_string(e->line) + ")");
  }
  if (const auto* e = get("output", "precision")) {
    const auto v = parse_count(*e);
    if (v > 17) throw ConfigError(ConfigError::Kind::invalid_value, "[output] precision must be in 1..17");
    cfg.output.precision = static_cast<int>(v);
  }

  if (!(n.quad_tol > 1e-12 && n.quad_tol < 1e-2))
    throw ConfigError(ConfigError::Kind::invalid_value, "[numerics] quad_tol must lie in (1e-12, 1e-2)");
  if (!(n.bath_cutoff_factor > 1.0))
    throw ConfigError(ConfigError::Kind::invalid_value, "[numerics] bath_cutoff_factor must be > 1");
  if (!(n.omega_max_wm > n.omega_min_wm))
    throw ConfigError(ConfigError::Kind::invalid_value, "[numerics] omega_max_wm must exceed omega_min_wm");

  try {
    p.validate();
    cfg.squeeze = derive_photon_stats(r, phi);
  } catch (const DomainError& ex) {
    throw ConfigError(ConfigError::Kind::invalid_value, ex.what());
  }
  return cfg;
}

}  // namespace sqzcool
