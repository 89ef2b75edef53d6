#include "slowlight/propagation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "slowlight/errors.hpp"
#include "slowlight/kernels.hpp"

namespace slowlight {

namespace {

// FFTW planning is not thread-safe.
std::mutex& plan_mutex() {
  static std::mutex mu;
  return mu;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// In-place transform of `data`; sign is FFTW_FORWARD or FFTW_BACKWARD.
void fft(std::vector<cplx>& data, int sign) {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  Plan plan;
  {
    std::lock_guard lock(plan_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr, sign, FFTW_ESTIMATE));
  }
  if (!plan) throw Error("FFTW plan creation failed");
  fftw_execute(plan.get());
}

// Angular frequency offset of FFT bin k, for components exp(-i Omega t).
double bin_frequency(std::size_t k, std::size_t n, double dt) {
  const auto kk = static_cast<double>(k) - (k > n / 2 ? static_cast<double>(n) : 0.0);
  return 2.0 * std::numbers::pi * kk / (static_cast<double>(n) * dt);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Spectral amplitudes with A(t_j) = sum_k S_k exp(-i Omega_k (t_j - t0)).
std::vector<cplx> spectrum_of(const Pulse& p) {
  std::vector<cplx> s = p.envelope;
  fft(s, FFTW_BACKWARD);
  const double inv = 1.0 / static_cast<double>(s.size());
  for (auto& v : s) v *= inv;
  return s;
}

cplx carrier_phase(const PhysicalScale& scale) {
  return std::polar(1.0, scale.omega_rad_s() * scale.length_m / constants::c);
}

Pulse with_transfer(const Pulse& p, const std::vector<cplx>& transfer) {
  std::vector<cplx> s = spectrum_of(p);
  kernels::mul_inplace(transfer, s);
  fft(s, FFTW_FORWARD);
  Pulse out = p;
  out.envelope = std::move(s);
  return out;
}

}  // namespace

std::vector<double> Pulse::intensity() const {
  std::vector<double> out(envelope.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(envelope[i]);
  return out;
}

Pulse synthesize_gaussian(double sigma_s, double window_s, std::size_t samples) {
  if (!(sigma_s > 0.0)) throw InvalidArgument("pulse width must be positive");
  if (window_s < 16.0 * sigma_s) throw InvalidArgument("time window must be at least 16 sigma");
  if (!is_power_of_two(samples) || samples < (1u << 14))
    throw InvalidArgument("sample count must be a power of two >= 16384");
  Pulse p;
  p.dt = window_s / static_cast<double>(samples);
  p.t0 = -0.5 * window_s;
  p.sigma_s = sigma_s;
  p.center_s = 0.0;
  p.envelope.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = p.time(i);
    p.envelope[i] = std::exp(-t * t / (2.0 * sigma_s * sigma_s));
  }
  return p;
}

namespace {

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

double width_at_half(const Pulse& p, const std::vector<double>& profile) {
  const std::size_t i = argmax(profile);
  const double peak = profile[i];
  if (!(peak > 0.0) || !std::isfinite(peak)) throw Error("pulse has no peak");
  const double half = 0.5 * peak;
  std::size_t r = i;
  while (r + 1 < profile.size() && profile[r + 1] > half) ++r;
  std::size_t l = i;
  while (l > 0 && profile[l - 1] > half) --l;
  if (r + 1 >= profile.size() || l == 0) throw Error("pulse half-maximum crossing outside window");
  const double tr = p.time(r) + p.dt * (profile[r] - half) / (profile[r] - profile[r + 1]);
  const double tl = p.time(l) - p.dt * (profile[l] - half) / (profile[l] - profile[l - 1]);
  return tr - tl;
}

}  // namespace

double fwhm(const Pulse& p, WidthMeasure measure) {
  std::vector<double> prof = p.intensity();
  if (measure == WidthMeasure::Field)
    for (auto& v : prof) v = std::sqrt(v);
  return width_at_half(p, prof);
}

double peak_time(const Pulse& p) {
  const auto inten = p.intensity();
  const std::size_t i = argmax(inten);
  if (!(inten[i] > 0.0) || !std::isfinite(inten[i])) throw Error("pulse has no peak");
  if (i == 0 || i + 1 == inten.size()) return p.time(i);
  const double a = inten[i - 1], b = inten[i], c = inten[i + 1];
  const double denom = a - 2.0 * b + c;
  const double off = denom == 0.0 ? 0.0 : 0.5 * (a - c) / denom;
  return p.time(i) + off * p.dt;
}

Pulse propagate(const Pulse& pulse, const SusceptibilitySpectrum& spectrum,
                const PhysicalScale& scale, const PropagationOptions& opts) {
  const std::size_t n = pulse.size();
  if (n == 0) throw InvalidArgument("empty pulse");
  const auto spec = spectrum_of(pulse);
  double peak = 0.0;
  for (const auto& v : spec) peak = std::max(peak, std::abs(v));
  const double lo = spectrum.detuning.front(), hi = spectrum.detuning.back();

  // (omega0 + Omega) n L / c split as a common carrier phase omega0 L / c,
  // which is huge but identical for every bin, plus a small remainder.
  const double omega0 = scale.omega_rad_s();
  const cplx carrier = carrier_phase(scale);
  std::vector<cplx> transfer(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double offset = bin_frequency(k, n, pulse.dt);
    const double x = offset / scale.gamma3_rad_s;
    if ((x < lo || x > hi) && std::abs(spec[k]) > opts.support_threshold * peak)
      throw BandwidthError("pulse spectrum exceeds susceptibility grid at detuning " +
                           std::to_string(x) + " Gamma3");
    const cplx chi_s = spectrum.interpolate(std::clamp(x, lo, hi));
    const cplx chi = scale.chi_scale() * chi_s;
    if (!(1.0 + chi.real() > 0.0))
      throw BranchCutError("1 + Re(chi) <= 0 at detuning " + std::to_string(x) + " Gamma3");
    const cplx root = std::sqrt(1.0 + chi);
    const cplx excess = chi / (1.0 + root);  // n - 1 without cancellation
    const cplx phase = (omega0 * excess + offset * root) * (scale.length_m / constants::c);
    transfer[k] = carrier * std::exp(cplx{0.0, 1.0} * phase);
  }
  return with_transfer(pulse, transfer);
}

Pulse propagate_vacuum(const Pulse& pulse, const PhysicalScale& scale) {
  const std::size_t n = pulse.size();
  const cplx carrier = carrier_phase(scale);
  std::vector<cplx> transfer(n);
  for (std::size_t k = 0; k < n; ++k)
    transfer[k] = carrier * std::polar(1.0, bin_frequency(k, n, pulse.dt) * scale.length_m / constants::c);
  return with_transfer(pulse, transfer);
}

PropagationMetrics metrics(const Pulse& input, const Pulse& output, const Pulse& vacuum_reference,
                           std::optional<double> n_g, std::optional<double> length_m) {
  if (input.size() != output.size() || input.size() != vacuum_reference.size() ||
      input.dt != output.dt || input.dt != vacuum_reference.dt)
    throw InvalidArgument("metrics: pulses must share a time grid");
  PropagationMetrics m;
  m.delay_s = peak_time(output) - peak_time(vacuum_reference);
  m.stretch = fwhm(output) / fwhm(input);
  double e_in = 0.0, e_out = 0.0;
  for (double v : input.intensity()) e_in += v;
  for (double v : output.intensity()) e_out += v;
  if (!(e_in > 0.0)) throw Error("input pulse carries no energy");
  m.transmission = e_out / e_in;
  if (n_g && length_m) m.predicted_delay_s = (*n_g - 1.0) * *length_m / constants::c;
  return m;
}

}  // namespace slowlight
