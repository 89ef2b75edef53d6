#include "slowlight/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "slowlight/csv.hpp"
#include "slowlight/errors.hpp"

namespace slowlight {

namespace {

constexpr double kAmu = 1.66053906660e-27;

// Display-unit conversions shared by the parser and the echo.
double from_mhz(double v) { return 2.0 * std::numbers::pi * v * 1e6; }
double from_nm(double v) { return v * 1e-9; }
double from_us(double v) { return v * 1e-6; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view v, int line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ParseError("expected a number, got '" + std::string(v) + "'", line);
  return out;
}

long to_int(std::string_view v, int line) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ParseError("expected an integer, got '" + std::string(v) + "'", line);
  return out;
}

std::size_t to_count(std::string_view v, int line) {
  const long n = to_int(v, line);
  if (n < 1) throw ParseError("expected a positive count", line);
  return static_cast<std::size_t>(n);
}

bool to_bool(std::string_view v, int line) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ParseError("expected a boolean, got '" + std::string(v) + "'", line);
}

int to_sign(std::string_view v, int line) {
  if (v == "+" || v == "+1" || v == "1") return 1;
  if (v == "-" || v == "-1") return -1;
  throw ParseError("dipole sign must be + or -", line);
}

struct KeySpec {
  std::string section;
  std::function<void(ScenarioConfig&, std::string_view, int)> set;
};

using Registry = std::map<std::string, KeySpec, std::less<>>;

// Physical quantity keys: base name + unit suffix.
void number(Registry& r, const std::string& section, const std::string& key,
            std::function<void(ScenarioConfig&, double)> set) {
  r[key] = {section, [set](ScenarioConfig& c, std::string_view v, int line) { set(c, to_double(v, line)); }};
}

const Registry& registry() {
  static const Registry reg = [] {
    Registry r;
    // system
    number(r, "system", "gamma31_gamma3", [](auto& c, double v) { c.system.gamma31 = v; });
    number(r, "system", "gamma32_gamma3", [](auto& c, double v) { c.system.gamma32 = v; });
    number(r, "system", "gamma41_gamma3", [](auto& c, double v) { c.system.gamma41 = v; });
    number(r, "system", "gamma42_gamma3", [](auto& c, double v) { c.system.gamma42 = v; });
    number(r, "system", "gamma2_deph_gamma3", [](auto& c, double v) { c.system.gamma2_deph = v; });
    number(r, "system", "gamma3_deph_gamma3", [](auto& c, double v) { c.system.gamma3_deph = v; });
    number(r, "system", "gamma4_deph_gamma3", [](auto& c, double v) { c.system.gamma4_deph = v; });
    number(r, "system", "omega43_gamma3", [](auto& c, double v) { c.system.omega43 = v; });
    r["dipole_signs"] = {"system", [](ScenarioConfig& c, std::string_view v, int line) {
                           std::vector<int> s;
                           std::size_t start = 0;
                           for (;;) {
                             const auto pos = v.find(',', start);
                             s.push_back(to_sign(trim(v.substr(start, pos == v.npos ? v.npos : pos - start)), line));
                             if (pos == v.npos) break;
                             start = pos + 1;
                           }
                           if (s.size() != 4) throw ParseError("dipole_signs needs four signs (s31,s41,s32,s42)", line);
                           c.system.signs = {s[0], s[1], s[2], s[3]};
                         }};
    // drive
    number(r, "drive", "omega_c_gamma3", [](auto& c, double v) { c.drive.omega_c = v; });
    number(r, "drive", "omega_p_gamma3", [](auto& c, double v) { c.drive.omega_p = v; });
    number(r, "drive", "delta_gamma3", [](auto& c, double v) { c.drive.delta = v; });
    number(r, "drive", "delta_c_gamma3", [](auto& c, double v) {
      const double x = c.drive.two_photon_detuning();
      c.drive.delta_c = v;
      c.drive.delta_p = v + x;
    });
    number(r, "drive", "two_photon_detuning_gamma3",
           [](auto& c, double v) { c.drive.delta_p = c.drive.delta_c + v; });
    // pump
    r["mode"] = {"pump", [](ScenarioConfig& c, std::string_view v, int line) {
                   if (v == "direct") c.pump.mode = PumpMode::DirectRate;
                   else if (v == "field") c.pump.mode = PumpMode::FiveLevelField;
                   else throw ParseError("pump mode must be 'direct' or 'field'", line);
                 }};
    r["form"] = {"pump", [](ScenarioConfig& c, std::string_view v, int line) {
                   if (v == "transfer") c.pump.form = PumpForm::PopulationTransfer;
                   else if (v == "lindblad") c.pump.form = PumpForm::Lindblad;
                   else throw ParseError("pump form must be 'transfer' or 'lindblad'", line);
                 }};
    number(r, "pump", "rate_gamma3", [](auto& c, double v) { c.pump.rate = v; });
    number(r, "pump", "omega_op_gamma3", [](auto& c, double v) { c.pump.field.omega_op = v; });
    number(r, "pump", "delta_op_gamma3", [](auto& c, double v) { c.pump.field.delta_op = v; });
    number(r, "pump", "gamma51_gamma3", [](auto& c, double v) { c.pump.field.gamma51 = v; });
    number(r, "pump", "gamma52_gamma3", [](auto& c, double v) { c.pump.field.gamma52 = v; });
    number(r, "pump", "gamma5_deph_gamma3", [](auto& c, double v) { c.pump.field.gamma5_deph = v; });
    // medium
    number(r, "medium", "density_per_cm3", [](auto& c, double v) { c.density_m3 = v * 1e6; });
    number(r, "medium", "density_per_m3", [](auto& c, double v) { c.density_m3 = v; });
    number(r, "medium", "length_mm", [](auto& c, double v) { c.length_m = v * 1e-3; });
    number(r, "medium", "length_m", [](auto& c, double v) { c.length_m = v; });
    number(r, "medium", "linewidth_mhz", [](auto& c, double v) {
      c.line.gamma3_rad_s = from_mhz(v);
      c.doppler.gamma3_rad_s = c.line.gamma3_rad_s;
    });
    number(r, "medium", "wavelength_nm", [](auto& c, double v) {
      c.line.wavelength_m = from_nm(v);
      c.doppler.wavenumber_per_m = 2.0 * std::numbers::pi / c.line.wavelength_m;
    });
    number(r, "medium", "branch_fraction", [](auto& c, double v) { c.line.branch_fraction = v; });
    // doppler
    r["enabled"] = {"doppler", [](ScenarioConfig& c, std::string_view v, int line) { c.doppler_enabled = to_bool(v, line); }};
    number(r, "doppler", "temperature_k", [](auto& c, double v) { c.doppler.temperature_K = v; });
    number(r, "doppler", "mass_amu", [](auto& c, double v) { c.doppler.mass_kg = v * kAmu; });
    number(r, "doppler", "mass_kg", [](auto& c, double v) { c.doppler.mass_kg = v; });
    r["nodes"] = {"doppler", [](ScenarioConfig& c, std::string_view v, int line) {
                    c.doppler.nodes = static_cast<int>(to_count(v, line));
                  }};
    r["rule"] = {"doppler", [](ScenarioConfig& c, std::string_view v, int line) {
                   if (v == "gauss-hermite") c.doppler.rule = QuadratureRule::GaussHermite;
                   else if (v == "composite-legendre") c.doppler.rule = QuadratureRule::CompositeLegendre;
                   else if (v == "adaptive-kronrod") c.doppler.rule = QuadratureRule::AdaptiveKronrod;
                   else throw ParseError("rule must be 'gauss-hermite', 'composite-legendre' or 'adaptive-kronrod'", line);
                 }};
    number(r, "doppler", "doppler_tol", [](auto& c, double v) { c.doppler.convergence_tol = v; });
    number(r, "doppler", "range_sigmas", [](auto& c, double v) { c.doppler.range_sigmas = v; });
    number(r, "doppler", "panel_gamma3", [](auto& c, double v) { c.doppler.panel_gamma3 = v; });
    r["max_nodes"] = {"doppler", [](ScenarioConfig& c, std::string_view v, int line) {
                        c.doppler.max_nodes = static_cast<int>(to_count(v, line));
                      }};
    // scan
    number(r, "scan", "scan_min_gamma3", [](auto& c, double v) { c.scan_grid.lo = v; });
    number(r, "scan", "scan_max_gamma3", [](auto& c, double v) { c.scan_grid.hi = v; });
    r["scan_points"] = {"scan", [](ScenarioConfig& c, std::string_view v, int line) { c.scan_grid.points = to_count(v, line); }};
    number(r, "scan", "truncation_tol", [](auto& c, double v) { c.truncation.tol = v; });
    number(r, "scan", "harmonic_tol", [](auto& c, double v) { c.truncation.harmonic_tol = v; });
    r["max_order"] = {"scan", [](ScenarioConfig& c, std::string_view v, int line) {
                        c.truncation.max_order = static_cast<int>(to_count(v, line));
                      }};
    // pulse
    number(r, "pulse", "sigma_us", [](auto& c, double v) { c.pulse.sigma_s = from_us(v); });
    number(r, "pulse", "window_us", [](auto& c, double v) { c.pulse.window_s = from_us(v); });
    r["samples"] = {"pulse", [](ScenarioConfig& c, std::string_view v, int line) { c.pulse.samples = to_count(v, line); }};
    // sweep
    number(r, "sweep", "rate_min_gamma3", [](auto& c, double v) { c.sweep_rates.lo = v; });
    number(r, "sweep", "rate_max_gamma3", [](auto& c, double v) { c.sweep_rates.hi = v; });
    r["doppler_rate_points"] = {"sweep", [](ScenarioConfig& c, std::string_view v, int line) {
                                  c.doppler_rate_points = to_count(v, line);
                                }};
    r["rate_points"] = {"sweep", [](ScenarioConfig& c, std::string_view v, int line) { c.sweep_rates.points = to_count(v, line); }};
    // run
    r["scenario"] = {"run", [](ScenarioConfig& c, std::string_view v, int) { c.scenario = std::string(v); }};
    r["out_dir"] = {"run", [](ScenarioConfig& c, std::string_view v, int) { c.out_dir = std::string(v); }};
    r["csv"] = {"run", [](ScenarioConfig& c, std::string_view v, int line) { c.csv = to_bool(v, line); }};
    r["svg"] = {"run", [](ScenarioConfig& c, std::string_view v, int line) { c.svg = to_bool(v, line); }};
    r["threads"] = {"run", [](ScenarioConfig& c, std::string_view v, int line) {
                      c.threads = static_cast<unsigned>(to_count(v, line));
                    }};
    return r;
  }();
  return reg;
}

const std::vector<std::string>& sections() {
  static const std::vector<std::string> s = {"system", "drive", "pump", "medium", "doppler",
                                             "scan", "pulse", "sweep", "run"};
  return s;
}

[[noreturn]] void unknown_key(std::string_view key, int line) {
  // A known quantity written without (or with the wrong) unit suffix.
  std::vector<std::string> matches;
  for (const auto& [k, spec] : registry()) {
    const auto us = k.rfind('_');
    if (k.starts_with(std::string(key) + "_") ||
        (us != std::string::npos && key.starts_with(k.substr(0, us + 1)) &&
         key.find('_', us + 1) == std::string_view::npos))
      matches.push_back(k);
  }
  if (!matches.empty()) {
    std::string msg = "key '" + std::string(key) + "' lacks a recognised unit suffix; expected ";
    for (std::size_t i = 0; i < matches.size(); ++i) msg += (i ? " or " : "") + matches[i];
    throw UnitError(msg, line);
  }
  throw ParseError("unknown key '" + std::string(key) + "'", line);
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  std::string section;
  int line_no = 0;
  while (!text.empty() || line_no == 0) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (text.empty()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (std::find(sections().begin(), sections().end(), section) == sections().end())
        throw ParseError("unknown section [" + section + "]", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key", line_no);
    if (value.empty()) throw ParseError("missing value for '" + std::string(key) + "'", line_no);
    const auto it = registry().find(key);
    if (it == registry().end()) unknown_key(key, line_no);
    if (!section.empty() && it->second.section != section)
      throw ParseError("key '" + std::string(key) + "' belongs in [" + it->second.section + "], not [" +
                           section + "]",
                       line_no);
    it->second.set(cfg, value, line_no);
  }
  return cfg;
}

std::vector<std::pair<std::string, std::string>> describe(const ScenarioConfig& c) {
  auto f = [](double v) { return format_double(v); };
  // A decimal in display units that converts back to exactly `si`; the
  // naive si / factor can land one ulp away after the round trip.
  auto in_unit = [](double si, double display, double (*to_si)(double)) {
    double lo = display, hi = display;
    for (int k = 0; k < 64; ++k, lo = std::nextafter(lo, -INFINITY), hi = std::nextafter(hi, INFINITY))
      for (double c : {lo, hi}) {
        const std::string s = format_double(c);
        if (to_si(to_double(s, 0)) == si) return s;
      }
    return format_double(display);
  };
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  auto sign = [](int s) { return std::string(s > 0 ? "+" : "-"); };
  const auto& sg = c.system.signs;
  std::vector<std::pair<std::string, std::string>> out;
  if (!c.scenario.empty()) out.emplace_back("scenario", c.scenario);
  std::vector<std::pair<std::string, std::string>> rest = {
      {"gamma31_gamma3", f(c.system.gamma31)},
      {"gamma32_gamma3", f(c.system.gamma32)},
      {"gamma41_gamma3", f(c.system.gamma41)},
      {"gamma42_gamma3", f(c.system.gamma42)},
      {"gamma2_deph_gamma3", f(c.system.gamma2_deph)},
      {"gamma3_deph_gamma3", f(c.system.gamma3_deph)},
      {"gamma4_deph_gamma3", f(c.system.gamma4_deph)},
      {"omega43_gamma3", f(c.system.omega43)},
      {"dipole_signs", sign(sg.s31) + "," + sign(sg.s41) + "," + sign(sg.s32) + "," + sign(sg.s42)},
      {"omega_c_gamma3", f(c.drive.omega_c)},
      {"omega_p_gamma3", f(c.drive.omega_p)},
      {"delta_gamma3", f(c.drive.delta)},
      {"delta_c_gamma3", f(c.drive.delta_c)},
      {"two_photon_detuning_gamma3", f(c.drive.two_photon_detuning())},
      {"mode", c.pump.mode == PumpMode::DirectRate ? "direct" : "field"},
      {"form", c.pump.form == PumpForm::PopulationTransfer ? "transfer" : "lindblad"},
      {"rate_gamma3", f(c.pump.rate)},
      {"omega_op_gamma3", f(c.pump.field.omega_op)},
      {"delta_op_gamma3", f(c.pump.field.delta_op)},
      {"gamma51_gamma3", f(c.pump.field.gamma51)},
      {"gamma52_gamma3", f(c.pump.field.gamma52)},
      {"gamma5_deph_gamma3", f(c.pump.field.gamma5_deph)},
      {"density_per_m3", f(c.density_m3)},
      {"length_m", f(c.length_m)},
      {"linewidth_mhz", in_unit(c.line.gamma3_rad_s, c.line.gamma3_rad_s / (2.0 * std::numbers::pi * 1e6), from_mhz)},
      {"wavelength_nm", in_unit(c.line.wavelength_m, c.line.wavelength_m * 1e9, from_nm)},
      {"branch_fraction", f(c.line.branch_fraction)},
      {"enabled", b(c.doppler_enabled)},
      {"temperature_k", f(c.doppler.temperature_K)},
      {"mass_kg", f(c.doppler.mass_kg)},
      {"nodes", std::to_string(c.doppler.nodes)},
      {"rule", c.doppler.rule == QuadratureRule::GaussHermite       ? "gauss-hermite"
               : c.doppler.rule == QuadratureRule::CompositeLegendre ? "composite-legendre"
                                                                     : "adaptive-kronrod"},
      {"doppler_tol", f(c.doppler.convergence_tol)},
      {"range_sigmas", f(c.doppler.range_sigmas)},
      {"panel_gamma3", f(c.doppler.panel_gamma3)},
      {"max_nodes", std::to_string(c.doppler.max_nodes)},
      {"scan_min_gamma3", f(c.scan_grid.lo)},
      {"scan_max_gamma3", f(c.scan_grid.hi)},
      {"scan_points", std::to_string(c.scan_grid.points)},
      {"truncation_tol", f(c.truncation.tol)},
      {"harmonic_tol", f(c.truncation.harmonic_tol)},
      {"max_order", std::to_string(c.truncation.max_order)},
      {"sigma_us", in_unit(c.pulse.sigma_s, c.pulse.sigma_s * 1e6, from_us)},
      {"window_us", in_unit(c.pulse.window_s, c.pulse.window_s * 1e6, from_us)},
      {"samples", std::to_string(c.pulse.samples)},
      {"rate_min_gamma3", f(c.sweep_rates.lo)},
      {"rate_max_gamma3", f(c.sweep_rates.hi)},
      {"rate_points", std::to_string(c.sweep_rates.points)},
      {"doppler_rate_points", std::to_string(c.doppler_rate_points)},
      {"out_dir", c.out_dir},
      {"csv", b(c.csv)},
      {"svg", b(c.svg)},
      {"threads", std::to_string(c.threads)},
  };
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace slowlight
