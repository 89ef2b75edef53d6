#include "slowlight/spectroscopy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "slowlight/errors.hpp"
#include "slowlight/parallel.hpp"

namespace slowlight {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

double LineData::omega_rad_s() const noexcept {
  return 2.0 * std::numbers::pi * constants::c / wavelength_m;
}

double PhysicalScale::omega_rad_s() const noexcept {
  return 2.0 * std::numbers::pi * constants::c / wavelength_m;
}

PhysicalScale physical_scale(double density_m3, const LineData& line, double length_m) {
  require(density_m3 >= 0.0, "atomic density must be non-negative");
  require(line.gamma3_rad_s > 0.0 && line.wavelength_m > 0.0, "line data must be positive");
  require(line.branch_fraction > 0.0 && line.branch_fraction <= 1.0, "branch fraction must be in (0, 1]");
  require(length_m >= 0.0, "medium length must be non-negative");
  const double omega = line.omega_rad_s();
  // Gamma_31 = omega^3 |mu31|^2 / (3 pi eps0 hbar c^3)
  const double gamma31 = line.branch_fraction * line.gamma3_rad_s;
  PhysicalScale s;
  s.density_m3 = density_m3;
  s.dipole_sq = 3.0 * std::numbers::pi * constants::epsilon0 * constants::hbar *
                std::pow(constants::c, 3) * gamma31 / std::pow(omega, 3);
  s.gamma3_rad_s = line.gamma3_rad_s;
  s.wavelength_m = line.wavelength_m;
  s.k_rad_s = density_m3 * s.dipole_sq / (constants::epsilon0 * constants::hbar);
  s.length_m = length_m;
  return s;
}

double DopplerConfig::sigma_rad_s() const {
  require(temperature_K > 0.0, "temperature must be positive");
  require(mass_kg > 0.0, "atomic mass must be positive");
  return wavenumber_per_m * std::sqrt(constants::k_boltzmann * temperature_K / mass_kg);
}

std::vector<std::pair<double, double>> gauss_hermite(int n) {
  require(n >= 1, "Gauss-Hermite order must be >= 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(0, n - 1));
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    out[static_cast<std::size_t>(i)] = {es.eigenvalues()(i), std::sqrt(std::numbers::pi) * v0 * v0};
  }
  return out;
}

std::vector<QuadratureNode> doppler_nodes(const DopplerConfig& cfg, int nodes) {
  require(nodes >= 8, "Doppler quadrature needs at least 8 nodes");
  require(cfg.rule != QuadratureRule::AdaptiveKronrod, "the adaptive rule has no fixed node set");
  const double sigma = cfg.sigma_gamma3();
  std::vector<QuadratureNode> out;
  if (cfg.rule == QuadratureRule::GaussHermite) {
    for (const auto& [x, w] : gauss_hermite(nodes))
      out.push_back({-std::numbers::sqrt2 * sigma * x, w / std::sqrt(std::numbers::pi)});
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.shift < b.shift; });
  } else {
    static constexpr double gl_x[4] = {-0.8611363115940526, -0.3399810435848563,
                                       0.3399810435848563, 0.8611363115940526};
    static constexpr double gl_w[4] = {0.3478548451374538, 0.6521451548625461,
                                       0.6521451548625461, 0.3478548451374538};
    require(cfg.range_sigmas > 0.0, "Doppler range must be positive");
    const int panels = (nodes + 3) / 4;
    const double lo = -cfg.range_sigmas * sigma, width = 2.0 * cfg.range_sigmas * sigma / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * width;
      for (int q = 0; q < 4; ++q) {
        const double s = mid + 0.5 * width * gl_x[q];
        const double w = 0.5 * width * gl_w[q] * std::exp(-0.5 * s * s / (sigma * sigma));
        out.push_back({s, w});
        total += w;
      }
    }
    for (auto& n : out) n.weight /= total;
  }
  return out;
}

namespace {

using Values = std::vector<cplx>;

struct Estimate {
  Values integral;
  Values magnitude;  // integral of the weighted |integrand|, per component
};

void check_rows(const std::vector<Values>& rows, std::size_t n, std::size_t components) {
  if (rows.size() != n) throw InvalidArgument("panel evaluator returned the wrong number of rows");
  for (const auto& r : rows)
    if (r.size() != components) throw InvalidArgument("panel evaluator returned the wrong number of components");
}

// Fixed rule: nodes are grouped into runs of `run` consecutive shifts.
Estimate fixed_rule(const PanelEvaluator& f, std::size_t components,
                    const std::vector<QuadratureNode>& nodes, std::size_t run, unsigned threads) {
  const std::size_t groups = (nodes.size() + run - 1) / run;
  std::vector<std::vector<Values>> vals(groups);
  parallel_for(groups, threads, [&](std::size_t g) {
    const std::size_t lo = g * run, hi = std::min(nodes.size(), lo + run);
    std::vector<double> shifts;
    for (std::size_t i = lo; i < hi; ++i) shifts.push_back(nodes[i].shift);
    vals[g] = f(shifts);
    check_rows(vals[g], hi - lo, components);
  });
  Estimate e{Values(components), Values(components)};
  for (std::size_t g = 0; g < groups; ++g)
    for (std::size_t k = 0; k < vals[g].size(); ++k) {
      const double w = nodes[g * run + k].weight;
      for (std::size_t c = 0; c < components; ++c) {
        e.integral[c] += w * vals[g][k][c];
        e.magnitude[c] += w * std::abs(vals[g][k][c]);
      }
    }
  return e;
}

// Gauss-Kronrod 7/15 abscissae on [-1, 1] (positive half, descending) and weights.
constexpr double kXgk[8] = {0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                            0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                            0.207784955007898468, 0.0};
constexpr double kWgk[8] = {0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                            0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                            0.204432940075298892, 0.209482141084727828};
constexpr double kWg[4] = {0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                           0.417959183673469388};

struct Panel {
  double a = 0.0, b = 0.0;
  Values kronrod, gauss, magnitude;
  double score = 0.0;  // normalised error, filled per round
};

void evaluate_panel(const PanelEvaluator& f, std::size_t components, double sigma, double norm,
                    Panel& p) {
  const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
  std::vector<double> x(15);
  for (int k = 0; k < 7; ++k) {
    x[static_cast<std::size_t>(k)] = c - h * kXgk[k];
    x[static_cast<std::size_t>(14 - k)] = c + h * kXgk[k];
  }
  x[7] = c;
  const auto rows = f(x);
  check_rows(rows, 15, components);
  p.kronrod.assign(components, cplx{});
  p.gauss.assign(components, cplx{});
  p.magnitude.assign(components, cplx{});
  for (std::size_t k = 0; k < 15; ++k) {
    const int m = k < 7 ? static_cast<int>(k) : static_cast<int>(14 - k);
    const double maxwell = std::exp(-0.5 * x[k] * x[k] / (sigma * sigma)) * norm;
    const double wk = h * kWgk[m] * maxwell;
    // Gauss nodes are the odd Kronrod indices (1, 3, 5) and the centre.
    double wg = 0.0;
    if (m == 7) wg = kWg[3];
    else if (m % 2 == 1) wg = kWg[m / 2];
    wg *= h * maxwell;
    for (std::size_t ci = 0; ci < components; ++ci) {
      p.kronrod[ci] += wk * rows[k][ci];
      p.gauss[ci] += wg * rows[k][ci];
      p.magnitude[ci] += wk * std::abs(rows[k][ci]);
    }
  }
}

std::vector<cplx> adaptive_average(const PanelEvaluator& f, std::size_t components,
                                   const DopplerConfig& cfg, unsigned threads) {
  require(cfg.range_sigmas > 0.0, "Doppler range must be positive");
  require(cfg.panel_gamma3 > 0.0, "initial panel width must be positive");
  const double sigma = cfg.sigma_gamma3();
  const double half = cfg.range_sigmas * sigma;
  // Maxwell density renormalised to the truncated range.
  const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma *
                             std::erf(cfg.range_sigmas / std::numbers::sqrt2));
  const auto initial = static_cast<std::size_t>(std::ceil(2.0 * half / cfg.panel_gamma3));
  std::vector<Panel> panels(initial);
  for (std::size_t i = 0; i < initial; ++i) {
    panels[i].a = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(initial);
    panels[i].b = -half + 2.0 * half * static_cast<double>(i + 1) / static_cast<double>(initial);
  }
  std::vector<std::size_t> pending(initial);
  for (std::size_t i = 0; i < initial; ++i) pending[i] = i;
  std::size_t evaluations = 0;

  while (true) {
    evaluations += 15 * pending.size();
    if (evaluations > static_cast<std::size_t>(cfg.max_nodes))
      throw ConvergenceError("adaptive Doppler quadrature exceeded " + std::to_string(cfg.max_nodes) +
                             " evaluations");
    parallel_for(pending.size(), threads,
                 [&](std::size_t i) { evaluate_panel(f, components, sigma, norm, panels[pending[i]]); });
    pending.clear();

    Values total(components), mag(components);
    std::vector<double> err(components, 0.0);
    for (const auto& p : panels)
      for (std::size_t c = 0; c < components; ++c) {
        total[c] += p.kronrod[c];
        mag[c] += p.magnitude[c];
        err[c] += std::abs(p.kronrod[c] - p.gauss[c]);
      }
    std::vector<double> target(components);
    bool done = true;
    for (std::size_t c = 0; c < components; ++c) {
      target[c] = cfg.convergence_tol * std::max(std::abs(total[c]), mag[c].real());
      if (err[c] > target[c]) done = false;
    }
    if (done) return total;

    double excess = 0.0;
    for (auto& p : panels) {
      p.score = 0.0;
      for (std::size_t c = 0; c < components; ++c)
        if (target[c] > 0.0) p.score = std::max(p.score, std::abs(p.kronrod[c] - p.gauss[c]) / target[c]);
        else if (p.kronrod[c] != p.gauss[c]) p.score = INFINITY;
      excess += p.score;
    }
    // Split the worst panels until they carry half of the normalised error.
    std::vector<std::size_t> order(panels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
      return panels[l].score != panels[r].score ? panels[l].score > panels[r].score : l < r;
    });
    double covered = 0.0;
    for (std::size_t idx : order) {
      if (covered >= 0.5 * excess && pending.size() >= 2) break;
      covered += panels[idx].score;
      Panel right;
      right.a = 0.5 * (panels[idx].a + panels[idx].b);
      right.b = panels[idx].b;
      panels[idx].b = right.a;
      panels.push_back(std::move(right));
      pending.push_back(idx);
      pending.push_back(panels.size() - 1);
    }
  }
}

}  // namespace

std::vector<cplx> doppler_average(const PanelEvaluator& f, std::size_t components,
                                  const DopplerConfig& cfg, unsigned threads) {
  require(components >= 1, "Doppler average needs at least one component");
  if (cfg.rule == QuadratureRule::AdaptiveKronrod) return adaptive_average(f, components, cfg, threads);
  const std::size_t run = cfg.rule == QuadratureRule::CompositeLegendre ? 4 : 1;
  const Estimate coarse = fixed_rule(f, components, doppler_nodes(cfg, cfg.nodes), run, threads);
  const int fine_nodes = cfg.nodes + cfg.nodes / 2;
  const Estimate fine = fixed_rule(f, components, doppler_nodes(cfg, fine_nodes), run, threads);
  for (std::size_t c = 0; c < components; ++c) {
    const double diff = std::abs(coarse.integral[c] - fine.integral[c]);
    const double scale = std::max(std::abs(fine.integral[c]), fine.magnitude[c].real());
    if (diff > cfg.convergence_tol * scale)
      throw ConvergenceError("Doppler quadrature not converged: " + std::to_string(cfg.nodes) + " vs " +
                             std::to_string(fine_nodes) + " nodes differ by " +
                             std::to_string(scale > 0.0 ? diff / scale : INFINITY) + " (relative)");
  }
  return fine.integral;
}

cplx doppler_average(const ShiftEvaluator& chi_of_shift, const DopplerConfig& cfg, unsigned threads) {
  const PanelEvaluator f = [&](std::span<const double> shifts) {
    std::vector<Values> rows;
    rows.reserve(shifts.size());
    for (double s : shifts) rows.push_back({chi_of_shift(s)});
    return rows;
  };
  return doppler_average(f, 1, cfg, threads)[0];
}

cplx scaled_chi(const AtomicSystem& system, const DriveConfig& drive, const PumpModel& pump,
                const TruncationOptions& trunc) {
  require(drive.omega_p != 0.0, "susceptibility needs a non-zero probe Rabi frequency");
  const auto liouv = build_liouvillian(system, drive, pump);
  const auto fd = solve_floquet_converged(liouv, drive.delta, trunc);
  const auto c = extract_dc_coherences(fd);
  const double op3 = system.signs.s31 * drive.omega_p;
  const double op4 = system.signs.s41 * drive.omega_p;
  return c.rho31 / op3 + c.rho41 / op4;
}

ChiResponse scaled_chi_response(const AtomicSystem& system, const DriveConfig& drive,
                                const PumpModel& pump, const TruncationOptions& trunc) {
  require(drive.omega_p != 0.0, "susceptibility needs a non-zero probe Rabi frequency");
  static const CMatrix dl0 = probe_detuning_derivative();
  const auto liouv = build_liouvillian(system, drive, pump);
  ChiResponse out;
  const auto r = solve_floquet_response_converged(liouv, dl0, drive.delta, trunc, &out.order);
  const auto c = extract_dc_coherences(r.density);
  const auto dc = extract_dc_coherences(r.derivative);
  const double op3 = system.signs.s31 * drive.omega_p;
  const double op4 = system.signs.s41 * drive.omega_p;
  out.chi = c.rho31 / op3 + c.rho41 / op4;
  out.dchi = dc.rho31 / op3 + dc.rho41 / op4;
  return out;
}

namespace {

DriveConfig shifted(DriveConfig d, double two_photon, double doppler_shift) {
  d.delta_p = d.delta_c + two_photon - doppler_shift;
  d.delta_c -= doppler_shift;
  return d;
}

// Along a panel the accepted truncation order moves slowly, so each node
// starts its search a little below the previous node's order.
int next_start(int previous) { return std::max(1, previous - previous / 4); }

}  // namespace

PointEvaluator make_point_evaluator(const AtomicSystem& system, const DriveConfig& drive,
                                    const PumpModel& pump,
                                    const std::optional<DopplerConfig>& doppler,
                                    const SpectroscopyOptions& opts) {
  if (!doppler) {
    return [=](double x) { return scaled_chi(system, shifted(drive, x, 0.0), pump, opts.truncation); };
  }
  const DopplerConfig cfg = *doppler;
  return [=](double x) {
    const PanelEvaluator f = [&](std::span<const double> shifts) {
      std::vector<std::vector<cplx>> rows;
      TruncationOptions t = opts.truncation;
      for (double s : shifts) {
        const auto r = scaled_chi_response(system, shifted(drive, x, s), pump, t);
        t.start_order = next_start(r.order);
        rows.push_back({r.chi});
      }
      return rows;
    };
    return doppler_average(f, 1, cfg, opts.threads)[0];
  };
}

ChiResponse chi_response(const AtomicSystem& system, const DriveConfig& drive, const PumpModel& pump,
                         const std::optional<DopplerConfig>& doppler, const SpectroscopyOptions& opts) {
  const double x = drive.two_photon_detuning();
  if (!doppler) return scaled_chi_response(system, drive, pump, opts.truncation);
  const PanelEvaluator f = [&](std::span<const double> shifts) {
    std::vector<std::vector<cplx>> rows;
    TruncationOptions t = opts.truncation;
    for (double s : shifts) {
      const auto r = scaled_chi_response(system, shifted(drive, x, s), pump, t);
      t.start_order = next_start(r.order);
      rows.push_back({r.chi, r.dchi});
    }
    return rows;
  };
  const auto v = doppler_average(f, 2, *doppler, opts.threads);
  return {v[0], v[1], 0};
}

cplx susceptibility(const AtomicSystem& system, const DriveConfig& drive, const PumpModel& pump,
                    const std::optional<DopplerConfig>& doppler, const SpectroscopyOptions& opts) {
  return make_point_evaluator(system, drive, pump, doppler, opts)(drive.two_photon_detuning());
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  require(points >= 1, "grid needs at least one point");
  if (points == 1) return {lo};
  require(hi > lo, "grid upper bound must exceed lower bound");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

double SusceptibilitySpectrum::step() const {
  if (detuning.size() < 2) return 0.0;
  return (detuning.back() - detuning.front()) / static_cast<double>(detuning.size() - 1);
}

cplx SusceptibilitySpectrum::interpolate(double x) const {
  const auto& g = detuning;
  if (g.empty()) throw InvalidArgument("interpolate: empty spectrum");
  if (x < g.front() || x > g.back())
    throw BandwidthError("interpolation point " + std::to_string(x) + " outside spectrum grid");
  if (g.size() == 1) return chi.front();
  const std::size_t n = g.size();
  auto it = std::upper_bound(g.begin(), g.end(), x);
  std::size_t i = it == g.begin() ? 0 : static_cast<std::size_t>(it - g.begin()) - 1;
  i = std::min(i, n - 2);
  auto tangent = [&](std::size_t k) -> cplx {
    const std::size_t a = k == 0 ? 0 : k - 1, b = k + 1 >= n ? n - 1 : k + 1;
    return (chi[b] - chi[a]) / (g[b] - g[a]);
  };
  const double h = g[i + 1] - g[i];
  const double t = (x - g[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * chi[i] + (t3 - 2 * t2 + t) * h * tangent(i) +
         (-2 * t3 + 3 * t2) * chi[i + 1] + (t3 - t2) * h * tangent(i + 1);
}

SusceptibilitySpectrum scan(const AtomicSystem& system, const DriveConfig& drive_template,
                            const PumpModel& pump, const std::vector<double>& grid,
                            const std::optional<DopplerConfig>& doppler,
                            const SpectroscopyOptions& opts) {
  require(!grid.empty(), "scan grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], "scan grid must be strictly increasing");
  SusceptibilitySpectrum out;
  out.detuning = grid;
  out.chi.resize(grid.size());
  out.drive = drive_template;
  out.pump = pump;
  out.doppler = doppler;
  SpectroscopyOptions inner = opts;
  inner.threads = 1;
  const auto eval = make_point_evaluator(system, drive_template, pump, doppler, inner);
  parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
    try {
      out.chi[i] = eval(grid[i]);
    } catch (const Error& e) {
      throw ScanError(i, grid[i], e.what());
    }
  });
  for (const auto& c : out.chi)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error("scan produced a non-finite susceptibility");
  return out;
}

SlopeResult dispersion_slope(const PointEvaluator& chi_at, double x, double h) {
  require(h > 0.0, "finite-difference step must be positive");
  SlopeResult r;
  r.slope = (chi_at(x + h).real() - chi_at(x - h).real()) / (2.0 * h);
  r.slope_half = (chi_at(x + h / 2).real() - chi_at(x - h / 2).real()) / h;
  const double scale = std::max(std::abs(r.slope), std::abs(r.slope_half));
  const double diff = std::abs(r.slope - r.slope_half);
  r.smooth = diff <= 1e-4 * scale || diff == 0.0;
  if (!r.smooth)
    r.warning = "non-smooth point: slope changes by " + std::to_string(scale > 0 ? diff / scale : diff) +
                " (relative) when the step is halved";
  return r;
}

SlopeResult dispersion_slope(const SusceptibilitySpectrum& spectrum, double x, double h) {
  return dispersion_slope([&](double y) { return spectrum.interpolate(y); }, x, h);
}

GroupIndexResult group_index(cplx chi_s, double slope_s, const PhysicalScale& scale,
                             double omega_rad_s) {
  const double re_chi = scale.chi_scale() * chi_s.real();
  if (!(1.0 + re_chi > 0.0))
    throw BranchCutError("1 + Re(chi) <= 0: refractive index is not real-positive");
  GroupIndexResult g;
  g.n = std::sqrt(1.0 + re_chi);
  g.slope_si = scale.k_rad_s / (scale.gamma3_rad_s * scale.gamma3_rad_s) * slope_s;
  g.n_g = g.n + omega_rad_s / (2.0 * g.n) * g.slope_si;
  g.v_g = constants::c / g.n_g;
  return g;
}

cplx eit_susceptibility(const EitConfig& cfg) {
  require(cfg.omega_p != 0.0, "EIT susceptibility needs a non-zero probe");
  CMatrix h(kLevels, kLevels);
  h(1, 1) = -(cfg.delta_p - cfg.delta_c);
  h(2, 2) = -cfg.delta_p;
  h(0, 2) = h(2, 0) = -0.5 * cfg.omega_p;
  h(1, 2) = h(2, 1) = -0.5 * cfg.omega_c;
  CMatrix l = commutator_superop(h);
  l += dissipator_superop(transition(1, 3), cfg.gamma31);
  l += dissipator_superop(transition(2, 3), cfg.gamma32);
  l += dissipator_superop(transition(2, 2), cfg.gamma2_deph);
  l += dissipator_superop(transition(1, 4), 1.0);
  const CMatrix rho = solve_static(l);
  return rho(2, 0) / cfg.omega_p;
}

SusceptibilitySpectrum eit_scan(const EitConfig& cfg, const std::vector<double>& grid,
                                unsigned threads) {
  require(!grid.empty(), "scan grid is empty");
  SusceptibilitySpectrum out;
  out.detuning = grid;
  out.chi.resize(grid.size());
  out.drive.omega_c = cfg.omega_c;
  out.drive.omega_p = cfg.omega_p;
  out.drive.delta = 0.0;
  out.drive.delta_c = cfg.delta_c;
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    EitConfig c = cfg;
    c.delta_p = cfg.delta_c + grid[i];
    out.chi[i] = eit_susceptibility(c);
  });
  return out;
}

PumpSweep pump_sweep(const AtomicSystem& system, const DriveConfig& drive,
                     const std::vector<double>& rates, const PhysicalScale& scale,
                     const std::optional<DopplerConfig>& doppler, const SpectroscopyOptions& opts,
                     double bound_rate) {
  require(!rates.empty(), "pump sweep needs at least one rate");
  PumpSweep out;
  out.bound_rate = bound_rate;
  out.rows.resize(rates.size());
  DriveConfig centred = drive;
  centred.delta_p = centred.delta_c;
  const bool outer_parallel = !doppler;
  SpectroscopyOptions inner = opts;
  if (outer_parallel) inner.threads = 1;
  parallel_for(rates.size(), outer_parallel ? opts.threads : 1u, [&](std::size_t i) {
    require(rates[i] >= 0.0, "pump rates must be non-negative");
    const auto r = chi_response(system, centred, PumpModel::direct(rates[i]), doppler, inner);
    SweepRow& row = out.rows[i];
    row.rate = rates[i];
    row.chi_s = r.chi;
    row.slope_s = r.dchi.real();
    row.n_g = group_index(row.chi_s, row.slope_s, scale, scale.omega_rad_s()).n_g;
  });
  return out;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] > v[i - 1] && v[i] > v[i + 1]) out.push_back(i);
  return out;
}

namespace {

// Vertex of the parabola through (i-1, i, i+1), in grid coordinates.
std::pair<double, double> refine_peak(const std::vector<double>& x, const std::vector<double>& y,
                                      std::size_t i) {
  if (i == 0 || i + 1 >= y.size()) return {x[i], y[i]};
  const double a = y[i - 1], b = y[i], c = y[i + 1];
  const double denom = a - 2 * b + c;
  if (denom == 0.0) return {x[i], b};
  const double off = 0.5 * (a - c) / denom;
  const double h = 0.5 * (x[i + 1] - x[i - 1]);
  return {x[i] + off * h, b - 0.25 * (a - c) * off};
}

}  // namespace

PeakPair raman_peaks(const SusceptibilitySpectrum& s) {
  std::vector<double> mag(s.chi.size());
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(s.chi[i].imag());
  std::size_t li = s.detuning.size(), ri = s.detuning.size();
  for (std::size_t i = 0; i < mag.size(); ++i) {
    auto& slot = s.detuning[i] < 0.0 ? li : ri;
    if (slot == s.detuning.size() || mag[i] > mag[slot]) slot = i;
  }
  if (li == s.detuning.size() || ri == s.detuning.size())
    throw InvalidArgument("spectrum must span both signs of detuning");
  PeakPair p;
  std::tie(p.left, p.left_value) = refine_peak(s.detuning, mag, li);
  std::tie(p.right, p.right_value) = refine_peak(s.detuning, mag, ri);
  if (s.chi[li].imag() < 0) p.left_value = -p.left_value;
  if (s.chi[ri].imag() < 0) p.right_value = -p.right_value;
  return p;
}

double transmission_window_fwhm(const SusceptibilitySpectrum& s) {
  const PeakPair p = raman_peaks(s);
  const double centre = std::abs(s.interpolate(0.0).imag());
  const double half = 0.5 * (0.5 * (std::abs(p.left_value) + std::abs(p.right_value)) + centre);
  auto crossing = [&](double from, double to) {
    const int steps = 4000;
    double prev_x = from, prev_v = std::abs(s.interpolate(from).imag());
    for (int k = 1; k <= steps; ++k) {
      const double x = from + (to - from) * k / steps;
      const double v = std::abs(s.interpolate(x).imag());
      if (v >= half) return prev_x + (x - prev_x) * (half - prev_v) / (v - prev_v);
      prev_x = x, prev_v = v;
    }
    throw Error("transparency window edge not found");
  };
  return crossing(0.0, p.right) - crossing(0.0, p.left);
}

}  // namespace slowlight
