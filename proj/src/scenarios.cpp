#include "slowlight/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>

#include "slowlight/errors.hpp"
#include "slowlight/propagation.hpp"
#include "slowlight/spectroscopy.hpp"
#include "slowlight/svg.hpp"

namespace slowlight {

namespace fs = std::filesystem;

double RunReport::value(std::string_view key) const {
  for (const auto& [k, v] : headline)
    if (k == key) return v;
  throw InvalidArgument("report has no headline value '" + std::string(key) + "'");
}

namespace {

const std::vector<std::string> kPresets = {"fig2a", "fig2c", "fig3a", "fig3c", "fig4", "fig5", "fig6"};

class Run {
 public:
  explicit Run(const ScenarioConfig& cfg, std::string name)
      : cfg_(cfg), start_(std::chrono::steady_clock::now()) {
    report_.scenario = std::move(name);
    report_.parameters = describe(cfg);
    report_.warnings = validate_system(cfg.system, cfg.drive, cfg.pump);
    if (cfg.csv || cfg.svg) fs::create_directories(cfg.out_dir);
  }

  const ScenarioConfig& cfg() const { return cfg_; }
  PhysicalScale scale() const { return physical_scale(cfg_.density_m3, cfg_.line, cfg_.length_m); }
  SpectroscopyOptions options() const { return {cfg_.truncation, cfg_.threads}; }
  std::optional<DopplerConfig> doppler() const {
    if (!cfg_.doppler_enabled) return std::nullopt;
    return doppler_for(cfg_);
  }
  static DopplerConfig doppler_for(const ScenarioConfig& c) {
    DopplerConfig d = c.doppler;
    d.gamma3_rad_s = c.line.gamma3_rad_s;
    d.wavenumber_per_m = 2.0 * M_PI / c.line.wavelength_m;
    return d;
  }

  void headline(const std::string& key, double v) { report_.headline.emplace_back(report_.scenario + "." + key, v); }

  void table(const std::string& stem, const Table& t) {
    if (!cfg_.csv) return;
    write(stem + ".csv", to_csv(t));
  }

  void plot(const std::string& stem, const std::vector<Series>& series, const PlotSpec& spec) {
    if (!cfg_.svg) return;
    write(stem + ".svg", render_svg(series, spec));
  }

  RunReport finish() {
    if (cfg_.csv) write(report_.scenario + "_summary.csv", to_csv(report_.headline));
    report_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return std::move(report_);
  }

 private:
  void write(const std::string& name, const std::string& content) {
    const fs::path p = fs::path(cfg_.out_dir) / name;
    write_file_atomic(p, content);
    report_.files.push_back(p.string());
  }

  ScenarioConfig cfg_;
  std::chrono::steady_clock::time_point start_;
  RunReport report_;
};

std::vector<double> imag_parts(const SusceptibilitySpectrum& s) {
  std::vector<double> v(s.chi.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s.chi[i].imag();
  return v;
}

std::vector<double> real_parts(const SusceptibilitySpectrum& s) {
  std::vector<double> v(s.chi.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s.chi[i].real();
  return v;
}

struct CentreDispersion {
  cplx chi;
  double slope;
  double n_g;
};

CentreDispersion centre_dispersion(const PointEvaluator& eval, double delta, const PhysicalScale& scale) {
  CentreDispersion c;
  c.chi = eval(0.0);
  c.slope = dispersion_slope(eval, 0.0, delta / 200.0).slope;
  c.n_g = group_index(c.chi, c.slope, scale, scale.omega_rad_s()).n_g;
  return c;
}

void spectrum_panel(Run& run, const std::string& stem, const SusceptibilitySpectrum& s,
                    const std::string& title) {
  run.table(stem, spectrum_table(s));
  PlotSpec spec;
  spec.title = title;
  spec.x_label = "two-photon detuning (Gamma3)";
  spec.y_label = "chi (scaled)";
  run.plot(stem, {{"Re chi", s.detuning, real_parts(s)}, {"Im chi", s.detuning, imag_parts(s)}}, spec);
}

// Peaks, centre dispersion and window width of one spectrum.
void spectrum_headlines(Run& run, const SusceptibilitySpectrum& s, const PointEvaluator& eval,
                        const std::string& prefix) {
  const PeakPair peaks = raman_peaks(s);
  run.headline(prefix + "peak_left_Gamma3", peaks.left);
  run.headline(prefix + "peak_right_Gamma3", peaks.right);
  run.headline(prefix + "peak_left_im_chi", peaks.left_value);
  run.headline(prefix + "peak_right_im_chi", peaks.right_value);
  run.headline(prefix + "im_chi_local_maxima", static_cast<double>(local_maxima(imag_parts(s)).size()));
  const auto c = centre_dispersion(eval, s.drive.delta, run.scale());
  run.headline(prefix + "centre_re_chi", c.chi.real());
  run.headline(prefix + "centre_im_chi", c.chi.imag());
  run.headline(prefix + "centre_slope", c.slope);
  run.headline(prefix + "n_g", c.n_g);
}

struct PulseCase {
  std::string label;
  SusceptibilitySpectrum spectrum;
  double n_g = 0.0;
};

// Propagates the configured pulse through each case; returns the metrics in
// case order and writes one CSV per pulse plus the vacuum reference.
std::vector<PropagationMetrics> pulse_panel(Run& run, const std::vector<PulseCase>& cases,
                                            const std::string& stem, const std::string& title) {
  const auto& c = run.cfg();
  const PhysicalScale scale = run.scale();
  const Pulse input = synthesize_gaussian(c.pulse.sigma_s, c.pulse.window_s, c.pulse.samples);
  const Pulse vacuum = propagate_vacuum(input, scale);
  run.table(stem + "_reference", pulse_table(vacuum));

  const auto ref_intensity = vacuum.intensity();
  const double norm = *std::max_element(ref_intensity.begin(), ref_intensity.end());
  std::vector<double> t_us(vacuum.size());
  for (std::size_t i = 0; i < t_us.size(); ++i) t_us[i] = vacuum.time(i) * 1e6;
  auto normalised = [&](const Pulse& p) {
    auto v = p.intensity();
    for (auto& x : v) x /= norm;
    return v;
  };

  std::vector<Series> series;
  std::vector<PropagationMetrics> out;
  for (const auto& pc : cases) {
    const Pulse o = propagate(input, pc.spectrum, scale);
    out.push_back(metrics(input, o, vacuum, pc.n_g, c.length_m));
    run.table(stem + "_" + pc.label, pulse_table(o));
    series.push_back({pc.label, t_us, normalised(o)});
  }
  series.push_back({"reference", t_us, normalised(vacuum)});
  PlotSpec spec;
  spec.title = title;
  spec.x_label = "time (us)";
  spec.y_label = "normalised intensity";
  run.plot(stem, series, spec);
  return out;
}

void pulse_headlines(Run& run, const std::string& label, const PropagationMetrics& m) {
  run.headline(label + "_delay_s", m.delay_s);
  if (m.predicted_delay_s) run.headline(label + "_predicted_delay_s", *m.predicted_delay_s);
  run.headline(label + "_stretch", m.stretch);
  run.headline(label + "_transmission", m.transmission);
}

PulseCase two_coupling_case(const Run& run, const std::string& label, DriveConfig drive, double rate) {
  const auto& c = run.cfg();
  PumpModel pump = c.pump;
  pump.mode = PumpMode::DirectRate;
  pump.rate = rate;
  const auto grid = uniform_grid(c.scan_grid.lo, c.scan_grid.hi, c.scan_grid.points);
  PulseCase pc;
  pc.label = label;
  pc.spectrum = scan(c.system, drive, pump, grid, run.doppler(), run.options());
  const auto eval = make_point_evaluator(c.system, drive, pump, run.doppler(), run.options());
  pc.n_g = centre_dispersion(eval, drive.delta, run.scale()).n_g;
  return pc;
}

PulseCase eit_case(const Run& run, const std::string& label, double omega_c) {
  const auto& c = run.cfg();
  EitConfig e;
  e.gamma31 = c.system.gamma31;
  e.gamma32 = c.system.gamma32;
  e.gamma2_deph = c.system.gamma2_deph;
  e.omega_c = omega_c;
  e.omega_p = c.drive.omega_p;
  const auto grid = uniform_grid(c.scan_grid.lo, c.scan_grid.hi, c.scan_grid.points);
  PulseCase pc;
  pc.label = label;
  pc.spectrum = eit_scan(e, grid, c.threads);
  const PointEvaluator eval = [e](double x) {
    EitConfig p = e;
    p.delta_p = e.delta_c + x;
    return eit_susceptibility(p);
  };
  // Width of the EIT window scales with omega_c^2; keep the step well inside it.
  pc.n_g = centre_dispersion(eval, 0.01 * omega_c * omega_c, run.scale()).n_g;
  return pc;
}

// Rate where n_g first changes sign, linearly interpolated; NaN if none.
double zero_crossing(const PumpSweep& s, int* sign_changes) {
  double first = NAN;
  int changes = 0;
  for (std::size_t i = 1; i < s.rows.size(); ++i) {
    const double a = s.rows[i - 1].n_g - 1.0, b = s.rows[i].n_g - 1.0;
    if ((a > 0) != (b > 0)) {
      ++changes;
      if (std::isnan(first)) first = s.rows[i - 1].rate + (s.rows[i].rate - s.rows[i - 1].rate) * a / (a - b);
    }
  }
  if (sign_changes) *sign_changes = changes;
  return first;
}

bool monotone_decreasing(const PumpSweep& s) {
  for (std::size_t i = 1; i < s.rows.size(); ++i)
    if (!(s.rows[i].n_g < s.rows[i - 1].n_g)) return false;
  return true;
}

void sweep_headlines(Run& run, const PumpSweep& s, const std::string& prefix) {
  int changes = 0;
  const double cross = zero_crossing(s, &changes);
  run.headline(prefix + "n_g_at_zero_pump", s.rows.front().n_g);
  run.headline(prefix + "n_g_at_max_pump", s.rows.back().n_g);
  run.headline(prefix + "sign_changes", changes);
  run.headline(prefix + "monotone_decreasing", monotone_decreasing(s) ? 1.0 : 0.0);
  if (!std::isnan(cross)) run.headline(prefix + "sign_change_rate_Gamma3", cross);
}

Series sweep_series(const PumpSweep& s, const std::string& label) {
  Series out{label, {}, {}};
  for (const auto& r : s.rows) {
    out.x.push_back(r.rate);
    out.y.push_back(r.n_g);
  }
  return out;
}

RunReport spectrum_run(const ScenarioConfig& cfg, const std::string& name) {
  Run run(cfg, name);
  const auto grid = uniform_grid(cfg.scan_grid.lo, cfg.scan_grid.hi, cfg.scan_grid.points);
  const auto s = scan(cfg.system, cfg.drive, cfg.pump, grid, run.doppler(), run.options());
  spectrum_panel(run, name + "_spectrum", s, name);
  const auto eval = make_point_evaluator(cfg.system, cfg.drive, cfg.pump, run.doppler(), run.options());
  spectrum_headlines(run, s, eval, "");
  return run.finish();
}

RunReport fig4_run(const ScenarioConfig& cfg) {
  Run run(cfg, "fig4");
  std::vector<PulseCase> cases = {two_coupling_case(run, "slow", cfg.drive, 0.0),
                                  two_coupling_case(run, "fast", cfg.drive, 0.4)};
  for (const auto& pc : cases) spectrum_panel(run, "fig4_spectrum_" + pc.label, pc.spectrum, "fig4 " + pc.label);
  const auto m = pulse_panel(run, cases, "fig4_pulse", "fig4");
  run.headline("n_g_slow", cases[0].n_g);
  run.headline("n_g_fast", cases[1].n_g);
  run.headline("n_g_ratio", std::abs(cases[0].n_g / cases[1].n_g));
  pulse_headlines(run, "slow", m[0]);
  pulse_headlines(run, "fast", m[1]);
  const double w = transmission_window_fwhm(cases[0].spectrum);
  run.headline("window_fwhm_Gamma3", w);
  run.headline("window_fwhm_rad_s", w * cfg.line.gamma3_rad_s);
  return run.finish();
}

RunReport fig5_run(const ScenarioConfig& cfg) {
  Run run(cfg, "fig5");
  DriveConfig strong = cfg.drive;
  strong.omega_c = 55.0;
  std::vector<PulseCase> cases = {eit_case(run, "eit_omega_c_0.5", 0.5), eit_case(run, "eit_omega_c_1", 1.0),
                                  two_coupling_case(run, "two_coupling_rate_0", strong, 0.0),
                                  two_coupling_case(run, "two_coupling_rate_0.17", strong, 0.17)};
  const auto m = pulse_panel(run, cases, "fig5_pulse", "fig5");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    run.headline(cases[i].label + "_n_g", cases[i].n_g);
    pulse_headlines(run, cases[i].label, m[i]);
  }
  run.headline("pair1_delay_ratio", m[2].delay_s / m[0].delay_s);
  run.headline("pair2_delay_ratio", m[3].delay_s / m[1].delay_s);
  return run.finish();
}

RunReport fig6_run(const ScenarioConfig& cfg) {
  Run run(cfg, "fig6");
  const auto rates = uniform_grid(cfg.sweep_rates.lo, cfg.sweep_rates.hi, cfg.sweep_rates.points);
  const double bound = cfg.pump.field.gamma52;
  DriveConfig centred = cfg.drive;
  centred.delta_p = centred.delta_c;
  const auto cold = pump_sweep(cfg.system, centred, rates, run.scale(), std::nullopt, run.options(), bound);
  const auto hot_rates = uniform_grid(cfg.sweep_rates.lo, cfg.sweep_rates.hi, cfg.doppler_rate_points);
  const auto hot = pump_sweep(cfg.system, centred, hot_rates, run.scale(), Run::doppler_for(cfg), run.options(), bound);
  run.table("fig6_sweep_stationary", sweep_table(cold));
  run.table("fig6_sweep_doppler", sweep_table(hot));
  sweep_headlines(run, cold, "stationary_");
  sweep_headlines(run, hot, "doppler_");
  run.headline("bound_marker_Gamma3", bound);
  run.headline("doppler_temperature_K", cfg.doppler.temperature_K);
  PlotSpec spec;
  spec.title = "fig6";
  spec.x_label = "pump rate (Gamma3)";
  spec.y_label = "n_g";
  spec.markers = {{bound, "pump bound"}};
  run.plot("fig6_sweep", {sweep_series(cold, "stationary"), sweep_series(hot, "Doppler")}, spec);
  return run.finish();
}

std::string preset_list() {
  std::string s;
  for (const auto& p : kPresets) s += (s.empty() ? "" : ", ") + p;
  return s;
}

}  // namespace

std::vector<std::string> preset_names() { return kPresets; }

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig c;
  c.scenario = std::string(name);
  auto spectrum = [&c](double omega_c, double delta, double rate) {
    c.drive.omega_c = omega_c;
    c.drive.delta = delta;
    c.pump = PumpModel::direct(rate);
    c.scan_grid = {-5.0 * delta, 5.0 * delta, 2001};
  };
  if (name == "fig2a") spectrum(20.0, 0.1, 0.0);
  else if (name == "fig2c") spectrum(30.0, 0.2, 0.0);
  else if (name == "fig3a") spectrum(30.0, 0.2, 0.06);
  else if (name == "fig3c") spectrum(30.0, 0.2, 0.4);
  else if (name == "fig4" || name == "fig5") {
    c.scan_grid = {-1.0, 1.0, 2001};
  } else if (name == "fig6") {
    c.sweep_rates = {0.0, 0.5, 26};
    c.doppler_enabled = true;
    c.doppler.temperature_K = 320.0;
    c.doppler.rule = QuadratureRule::AdaptiveKronrod;
    c.doppler.range_sigmas = 5.0;
    // Velocity classes near the coupling resonance need hundreds of harmonics.
    c.truncation.max_order = 1000;
  } else {
    throw InvalidArgument("unknown scenario '" + std::string(name) + "'; available: " + preset_list());
  }
  return c;
}

RunReport run_scenario(const ScenarioConfig& cfg) {
  const std::string& n = cfg.scenario;
  if (n == "fig2a" || n == "fig2c" || n == "fig3a" || n == "fig3c") return spectrum_run(cfg, n);
  if (n == "fig4") return fig4_run(cfg);
  if (n == "fig5") return fig5_run(cfg);
  if (n == "fig6") return fig6_run(cfg);
  throw InvalidArgument("unknown scenario '" + n + "'; available: " + preset_list());
}

RunReport run_scan(const ScenarioConfig& cfg) { return spectrum_run(cfg, "scan"); }

RunReport run_pulse(const ScenarioConfig& cfg) {
  Run run(cfg, "pulse");
  const double rate = effective_pump_rate(cfg.pump);
  std::vector<PulseCase> cases = {two_coupling_case(run, "probe", cfg.drive, rate)};
  spectrum_panel(run, "pulse_spectrum", cases[0].spectrum, "pulse spectrum");
  const auto m = pulse_panel(run, cases, "pulse", "pulse");
  run.headline("n_g", cases[0].n_g);
  pulse_headlines(run, "probe", m[0]);
  return run.finish();
}

RunReport run_sweep(const ScenarioConfig& cfg) {
  Run run(cfg, "sweep");
  const auto rates = uniform_grid(cfg.sweep_rates.lo, cfg.sweep_rates.hi, cfg.sweep_rates.points);
  DriveConfig centred = cfg.drive;
  centred.delta_p = centred.delta_c;
  const auto s = pump_sweep(cfg.system, centred, rates, run.scale(), run.doppler(), run.options(),
                            cfg.pump.field.gamma52);
  run.table("sweep", sweep_table(s));
  sweep_headlines(run, s, "");
  run.headline("bound_marker_Gamma3", s.bound_rate);
  PlotSpec spec;
  spec.title = "n_g vs pump rate";
  spec.x_label = "pump rate (Gamma3)";
  spec.y_label = "n_g";
  spec.markers = {{s.bound_rate, "pump bound"}};
  run.plot("sweep", {sweep_series(s, cfg.doppler_enabled ? "Doppler" : "stationary")}, spec);
  return run.finish();
}

}  // namespace slowlight
