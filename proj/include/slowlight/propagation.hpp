#pragma once

#include <optional>
#include <vector>

#include "slowlight/matrix.hpp"
#include "slowlight/spectroscopy.hpp"

namespace slowlight {

// Slowly varying probe envelope on a uniform time grid (seconds).
struct Pulse {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<cplx> envelope;
  double center_s = 0.0;
  double sigma_s = 0.0;  // field standard deviation when synthesised

  std::size_t size() const noexcept { return envelope.size(); }
  double time(std::size_t i) const noexcept { return t0 + static_cast<double>(i) * dt; }
  std::vector<double> intensity() const;
};

// exp(-t^2 / (2 sigma^2)) centred in the window. `window` must be at least
// 16 sigma; `samples` a power of two >= 2^14.
Pulse synthesize_gaussian(double sigma_s, double window_s, std::size_t samples);

enum class WidthMeasure { Field, Intensity };

// Full width at half maximum of |E| (Field) or |E|^2 (Intensity).
double fwhm(const Pulse& p, WidthMeasure measure = WidthMeasure::Intensity);

// Peak time of |E|^2 with parabolic refinement.
double peak_time(const Pulse& p);

struct PropagationOptions {
  // Spectral amplitude (relative to its peak) that must lie inside the
  // susceptibility grid.
  double support_threshold = 1e-6;
};

// Multiplies each spectral component by exp(i (omega/c) n(omega) L) with
// n = sqrt(1 + k chi_s) interpolated from the spectrum; the carrier sits at
// two-photon detuning 0.
Pulse propagate(const Pulse& pulse, const SusceptibilitySpectrum& spectrum,
                const PhysicalScale& scale, const PropagationOptions& opts = {});

// Same transfer with chi = 0 (vacuum traversal of the medium length).
Pulse propagate_vacuum(const Pulse& pulse, const PhysicalScale& scale);

struct PropagationMetrics {
  double delay_s = 0.0;         // output peak minus vacuum-reference peak
  double stretch = 1.0;         // intensity FWHM out / in
  double transmission = 1.0;    // integrated intensity out / in
  std::optional<double> predicted_delay_s;  // (n_g - 1) L / c when supplied
};

PropagationMetrics metrics(const Pulse& input, const Pulse& output, const Pulse& vacuum_reference,
                           std::optional<double> n_g = std::nullopt,
                           std::optional<double> length_m = std::nullopt);

}  // namespace slowlight
