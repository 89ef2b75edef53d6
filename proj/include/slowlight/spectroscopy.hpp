#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slowlight/floquet.hpp"
#include "slowlight/model.hpp"

namespace slowlight {

namespace constants {
inline constexpr double c = 299792458.0;               // m/s
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double epsilon0 = 8.8541878128e-12;   // F/m
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K
inline constexpr double rb87_mass = 1.443160648e-25;   // kg
}  // namespace constants

// Optical line the Lambda system lives on (defaults: 87Rb D1).
struct LineData {
  double gamma3_rad_s = 2.0 * 3.14159265358979323846 * 5.75e6;
  double wavelength_m = 794.98e-9;
  // Fraction of Gamma3 carried by the 3->1 branch.
  double branch_fraction = 0.5;

  double omega_rad_s() const noexcept;
};

struct PhysicalScale {
  double density_m3 = 0.0;
  double dipole_sq = 0.0;       // |mu31|^2 in (C m)^2
  double gamma3_rad_s = 0.0;
  double wavelength_m = 0.0;
  double k_rad_s = 0.0;         // rho |mu31|^2 / (eps0 hbar)
  double length_m = 0.0;

  double omega_rad_s() const noexcept;
  // chi = chi_scale() * chi_s for chi_s computed with Rabi frequencies in Gamma3 units
  double chi_scale() const noexcept { return k_rad_s / gamma3_rad_s; }
};

PhysicalScale physical_scale(double density_m3, const LineData& line = {}, double length_m = 1e-3);

enum class QuadratureRule {
  GaussHermite,
  // Gauss-Legendre panels (4 nodes each) over +-range_sigmas of the
  // Maxwell distribution.
  CompositeLegendre,
  // Gauss-Kronrod 7/15 panels over +-range_sigmas, bisected until the
  // embedded error estimate meets the tolerance. For integrands with
  // sub-Gamma3 structure scattered over the Doppler width.
  AdaptiveKronrod,
};

struct DopplerConfig {
  double temperature_K = 320.0;
  double mass_kg = constants::rb87_mass;
  double wavenumber_per_m = 2.0 * 3.14159265358979323846 / 794.98e-9;
  double gamma3_rad_s = 2.0 * 3.14159265358979323846 * 5.75e6;
  int nodes = 64;
  QuadratureRule rule = QuadratureRule::GaussHermite;
  // Fixed rules: |I(nodes) - I(1.5 nodes)|; adaptive rule: summed
  // Kronrod-Gauss differences. Either must stay below convergence_tol times
  // max(|I|, integral of the weighted |integrand|).
  double convergence_tol = 1e-3;
  double range_sigmas = 6.0;     // composite and adaptive rules
  double panel_gamma3 = 2.0;     // adaptive rule: initial panel width
  int max_nodes = 200000;        // adaptive rule: evaluation budget

  // One-photon Doppler standard deviation (2 pi / lambda) sqrt(kB T / m), rad/s.
  double sigma_rad_s() const;
  double sigma_gamma3() const { return sigma_rad_s() / gamma3_rad_s; }
};

struct QuadratureNode {
  double shift;   // one-photon Doppler shift, Gamma3 units
  double weight;  // sums to 1 over a rule
};

std::vector<QuadratureNode> doppler_nodes(const DopplerConfig& cfg, int nodes);

// Gauss-Hermite nodes/weights for the weight exp(-x^2).
std::vector<std::pair<double, double>> gauss_hermite(int n);

struct SpectroscopyOptions {
  TruncationOptions truncation{};
  unsigned threads = 1;
};

// chi_s as a function of the one-photon Doppler shift (Gamma3 units).
using ShiftEvaluator = std::function<cplx(double)>;

// Vector-valued integrand evaluated on a run of shifts in increasing order
// (one quadrature panel), returning one row of `components` values per
// shift. Implementations may carry state along the run.
using PanelEvaluator = std::function<std::vector<std::vector<cplx>>(std::span<const double>)>;

// Maxwell average over co-propagating shifts. Throws ConvergenceError when
// the rule's error measure exceeds the tolerance (see DopplerConfig).
cplx doppler_average(const ShiftEvaluator& chi_of_shift, const DopplerConfig& cfg,
                     unsigned threads = 1);
std::vector<cplx> doppler_average(const PanelEvaluator& f, std::size_t components,
                                  const DopplerConfig& cfg, unsigned threads = 1);

// rho31^(0)/Omega_p3 + rho41^(0)/Omega_p4 for a stationary atom.
cplx scaled_chi(const AtomicSystem& system, const DriveConfig& drive, const PumpModel& pump,
                const TruncationOptions& trunc = {});

struct ChiResponse {
  cplx chi{};
  cplx dchi{};    // d chi_s / d(two-photon detuning), exact
  int order = 0;  // accepted Floquet truncation
};

ChiResponse scaled_chi_response(const AtomicSystem& system, const DriveConfig& drive,
                                const PumpModel& pump, const TruncationOptions& trunc = {});

// Doppler-averaged (or stationary) chi_s and its exact detuning derivative
// at the drive's own two-photon detuning.
ChiResponse chi_response(const AtomicSystem& system, const DriveConfig& drive, const PumpModel& pump,
                         const std::optional<DopplerConfig>& doppler = std::nullopt,
                         const SpectroscopyOptions& opts = {});

cplx susceptibility(const AtomicSystem& system, const DriveConfig& drive, const PumpModel& pump,
                    const std::optional<DopplerConfig>& doppler = std::nullopt,
                    const SpectroscopyOptions& opts = {});

// chi_s as a function of two-photon detuning (delta_p - delta_c), Gamma3 units.
using PointEvaluator = std::function<cplx(double)>;

PointEvaluator make_point_evaluator(const AtomicSystem& system, const DriveConfig& drive,
                                    const PumpModel& pump,
                                    const std::optional<DopplerConfig>& doppler = std::nullopt,
                                    const SpectroscopyOptions& opts = {});

struct SusceptibilitySpectrum {
  std::vector<double> detuning;  // two-photon detuning, Gamma3 units, increasing
  std::vector<cplx> chi;         // scaled chi
  DriveConfig drive{};
  PumpModel pump{};
  std::optional<DopplerConfig> doppler;

  // Cubic (Catmull-Rom) interpolation; throws outside the grid.
  cplx interpolate(double x) const;
  double step() const;
};

SusceptibilitySpectrum scan(const AtomicSystem& system, const DriveConfig& drive_template,
                            const PumpModel& pump, const std::vector<double>& grid,
                            const std::optional<DopplerConfig>& doppler = std::nullopt,
                            const SpectroscopyOptions& opts = {});

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

struct SlopeResult {
  double slope = 0.0;       // d Re(chi_s) / d(two-photon detuning) at h
  double slope_half = 0.0;  // same at h/2
  bool smooth = true;       // Richardson agreement within 1e-4 relative
  std::string warning;
};

// Central difference of Re(chi_s) with a step-halving check.
SlopeResult dispersion_slope(const PointEvaluator& chi_at, double x, double h);
SlopeResult dispersion_slope(const SusceptibilitySpectrum& spectrum, double x, double h);

struct GroupIndexResult {
  double n = 1.0;
  double slope_si = 0.0;  // d Re(chi)/d omega in s/rad
  double n_g = 1.0;
  double v_g = constants::c;
};

// Group index from scaled chi and its slope (Gamma3 units), ignoring Im chi.
GroupIndexResult group_index(cplx chi_s, double slope_s, const PhysicalScale& scale,
                             double omega_rad_s);

// Steady state of a three-level Lambda (levels 1, 2, 3) with one resonant
// coupling; the unused level 4 is emptied by a decay so the solve stays unique.
struct EitConfig {
  double gamma31 = 0.5;
  double gamma32 = 0.5;
  double gamma2_deph = 0.01;
  double omega_c = 0.5;
  double delta_c = 0.0;
  double omega_p = 0.01;
  double delta_p = 0.0;
};

cplx eit_susceptibility(const EitConfig& cfg);

// eit_susceptibility over two-photon detunings (delta_p - delta_c).
SusceptibilitySpectrum eit_scan(const EitConfig& cfg, const std::vector<double>& grid,
                                unsigned threads = 1);

struct SweepRow {
  double rate = 0.0;
  cplx chi_s{};
  double slope_s = 0.0;
  double n_g = 0.0;
};

struct PumpSweep {
  std::vector<SweepRow> rows;
  double bound_rate = 0.5;  // Gamma52 line drawn with the curve
};

// n_g at two-photon detuning 0 for each pump rate, from the exact
// detuning derivative of chi_s.
PumpSweep pump_sweep(const AtomicSystem& system, const DriveConfig& drive,
                     const std::vector<double>& rates, const PhysicalScale& scale,
                     const std::optional<DopplerConfig>& doppler = std::nullopt,
                     const SpectroscopyOptions& opts = {}, double bound_rate = 0.5);

// Interior local maxima of v (strict on both sides).
std::vector<std::size_t> local_maxima(const std::vector<double>& v);

struct PeakPair {
  double left = 0.0;   // position of the Im chi extremum below zero detuning
  double right = 0.0;
  double left_value = 0.0;
  double right_value = 0.0;
};

// Largest |Im chi_s| on each side of zero detuning, refined by a parabola.
PeakPair raman_peaks(const SusceptibilitySpectrum& spectrum);

// Full width of the transparency window between the two Raman peaks, in
// Gamma3 units: distance between the inner points where Im chi_s crosses
// halfway between the window minimum and the mean peak height.
double transmission_window_fwhm(const SusceptibilitySpectrum& spectrum);

}  // namespace slowlight
