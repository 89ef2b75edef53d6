#include "slowlight/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "slowlight/errors.hpp"
#include "slowlight/kernels.hpp"

namespace slowlight {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr std::size_t kTraceRow = vec_index(0, 0);

CMatrix as_density(std::span<const cplx> v) {
  CMatrix m(kLevels, kLevels);
  std::copy(v.begin(), v.end(), m.flat().begin());
  return m;
}

BlockTridiagonal assemble(const LiouvillianHarmonics& liouv, double delta, int order) {
  if (order < 1) throw InvalidArgument("Floquet order must be >= 1");
  const std::size_t nb = static_cast<std::size_t>(2 * order + 1);
  BlockTridiagonal sys;
  sys.lower.assign(nb, CMatrix(kLiouvilleDim, kLiouvilleDim));
  sys.upper.assign(nb, CMatrix(kLiouvilleDim, kLiouvilleDim));
  sys.diag.reserve(nb);
  for (std::size_t a = 0; a < nb; ++a) {
    const int n = static_cast<int>(a) - order;
    CMatrix d = liouv.l0;
    for (std::size_t i = 0; i < kLiouvilleDim; ++i) d(i, i) -= kI * (n * delta);
    sys.diag.push_back(std::move(d));
    if (a > 0) sys.lower[a] = liouv.lp;
    if (a + 1 < nb) sys.upper[a] = liouv.lm;
  }
  const auto c = static_cast<std::size_t>(order);
  for (std::size_t k = 0; k < kLiouvilleDim; ++k) {
    sys.diag[c](kTraceRow, k) = 0.0;
    sys.lower[c](kTraceRow, k) = 0.0;
    sys.upper[c](kTraceRow, k) = 0.0;
  }
  for (std::size_t i = 0; i < kLevels; ++i) sys.diag[c](kTraceRow, vec_index(i, i)) = 1.0;
  return sys;
}

std::vector<cplx> trace_rhs(int order) {
  std::vector<cplx> rhs(static_cast<std::size_t>(2 * order + 1) * kLiouvilleDim);
  rhs[static_cast<std::size_t>(order) * kLiouvilleDim + kTraceRow] = 1.0;
  return rhs;
}

FloquetDensity unpack(std::span<const cplx> x, int order, double delta) {
  std::vector<CMatrix> h;
  h.reserve(static_cast<std::size_t>(2 * order + 1));
  for (int a = 0; a < 2 * order + 1; ++a)
    h.push_back(as_density(x.subspan(static_cast<std::size_t>(a) * kLiouvilleDim, kLiouvilleDim)));
  return {order, delta, std::move(h)};
}

double frobenius(const CMatrix& m) {
  double s = 0.0;
  for (const auto& v : m.flat()) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace

FloquetDensity::FloquetDensity(int order, double delta, std::vector<CMatrix> harmonics)
    : order_(order), delta_(delta), harmonics_(std::move(harmonics)) {
  if (harmonics_.size() != static_cast<std::size_t>(2 * order_ + 1))
    throw InvalidArgument("FloquetDensity: expected 2N+1 harmonics");
}

const CMatrix& FloquetDensity::harmonic(int n) const {
  if (n < -order_ || n > order_) throw InvalidArgument("harmonic index out of range");
  return harmonics_[static_cast<std::size_t>(n + order_)];
}

CMatrix FloquetDensity::at(double t) const {
  CMatrix out(kLevels, kLevels);
  for (int n = -order_; n <= order_; ++n)
    kernels::axpy(std::exp(kI * (n * delta_ * t)), harmonic(n).flat(), out.flat());
  return out;
}

FloquetDensity solve_floquet(const LiouvillianHarmonics& liouv, double delta, int order) {
  const auto sys = assemble(liouv, delta, order);
  const auto x = solve_block_tridiagonal(sys, trace_rhs(order));
  return unpack(x, order, delta);
}

FloquetResponse solve_floquet_response(const LiouvillianHarmonics& liouv, const CMatrix& dl0,
                                       double delta, int order) {
  if (dl0.rows() != kLiouvilleDim || dl0.cols() != kLiouvilleDim)
    throw InvalidArgument("parameter derivative must be a 16x16 superoperator");
  const auto sys = assemble(liouv, delta, order);
  const BlockTridiagonalLU lu(sys);
  const auto x = lu.solve(trace_rhs(order));
  std::vector<cplx> rhs(x.size());
  for (std::size_t a = 0; a < sys.blocks(); ++a) {
    const auto xa = std::span<const cplx>(x).subspan(a * kLiouvilleDim, kLiouvilleDim);
    for (std::size_t r = 0; r < kLiouvilleDim; ++r)
      rhs[a * kLiouvilleDim + r] = -kernels::dotu(dl0.row(r), xa);
  }
  rhs[static_cast<std::size_t>(order) * kLiouvilleDim + kTraceRow] = 0.0;
  const auto dx = lu.solve(rhs);
  return {unpack(x, order, delta), unpack(dx, order, delta)};
}

FloquetDensity solve_floquet_dense(const LiouvillianHarmonics& liouv, double delta, int order) {
  const auto sys = assemble(liouv, delta, order);
  const auto x = solve_dense(sys.to_dense(), trace_rhs(order));
  return unpack(x, order, delta);
}

namespace {

const FloquetDensity& density_of(const FloquetDensity& d) { return d; }
const FloquetDensity& density_of(const FloquetResponse& r) { return r.density; }

double coherence_change(const FloquetDensity& a, const FloquetDensity& b) {
  const auto ca = extract_dc_coherences(a), cb = extract_dc_coherences(b);
  const double num = std::hypot(std::abs(ca.rho31 - cb.rho31), std::abs(ca.rho41 - cb.rho41));
  const double den = std::hypot(std::abs(cb.rho31), std::abs(cb.rho41));
  if (num == 0.0) return 0.0;
  return den > 0.0 ? num / den : INFINITY;
}

// ||rho^(+-N)|| / ||rho^(0)|| (Frobenius) at the top order.
double tail_ratio(const FloquetDensity& fd) {
  auto fro = [](const CMatrix& m) {
    double s = 0.0;
    for (const auto& v : m.flat()) s += std::norm(v);
    return std::sqrt(s);
  };
  const int n = fd.order();
  return std::max(fro(fd.harmonic(n)), fro(fd.harmonic(-n))) / fro(fd.dc());
}

template <class Solve>
auto climb(Solve&& solve, const TruncationOptions& opts) -> std::pair<int, decltype(solve(1))> {
  using Result = decltype(solve(1));
  if (!(opts.tol > 0.0)) throw InvalidArgument("truncation tolerance must be positive");
  if (opts.max_order < 3) throw InvalidArgument("max truncation order must be >= 3");
  if (!(opts.harmonic_tol > 0.0)) throw InvalidArgument("harmonic tail tolerance must be positive");
  std::map<int, Result> cache;
  auto get = [&](int n) -> const Result& {
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, solve(n)).first;
    return it->second;
  };
  double last = INFINITY;
  int n = std::clamp(opts.start_order, 1, opts.max_order - 2);
  while (true) {
    last = coherence_change(density_of(get(n)), density_of(get(n + 2)));
    if (last < opts.tol && tail_ratio(density_of(get(n))) <= opts.harmonic_tol) return {n, get(n)};
    if (n + 2 >= opts.max_order) break;
    const int next = std::min(n + std::max(1, n <= 4 ? 1 : n / 4), opts.max_order - 2);
    for (auto it = cache.begin(); it != cache.end();)
      it = it->first < next ? cache.erase(it) : std::next(it);
    n = next;
  }
  throw ConvergenceError("Floquet truncation did not converge by order " +
                         std::to_string(opts.max_order) + " (relative change " +
                         std::to_string(last) + ", tail " + std::to_string(tail_ratio(density_of(get(n)))) + ")");
}

}  // namespace

int choose_truncation(const LiouvillianHarmonics& liouv, double delta,
                      const TruncationOptions& opts) {
  return climb([&](int n) { return solve_floquet(liouv, delta, n); }, opts).first;
}

FloquetDensity solve_floquet_converged(const LiouvillianHarmonics& liouv, double delta,
                                       const TruncationOptions& opts) {
  return climb([&](int n) { return solve_floquet(liouv, delta, n); }, opts).second;
}

FloquetResponse solve_floquet_response_converged(const LiouvillianHarmonics& liouv,
                                                 const CMatrix& dl0, double delta,
                                                 const TruncationOptions& opts, int* order_out) {
  auto [n, r] = climb([&](int k) { return solve_floquet_response(liouv, dl0, delta, k); }, opts);
  if (order_out) *order_out = n;
  return r;
}

DcCoherences extract_dc_coherences(const FloquetDensity& fd) {
  const auto& d = fd.dc();
  return {d(2, 0), d(3, 0)};
}

FloquetInvariants check_invariants(const FloquetDensity& fd, int phases) {
  FloquetInvariants inv;
  const int n_max = fd.order();
  inv.trace_error = std::abs(fd.dc().trace() - 1.0);
  for (int n = -n_max; n <= n_max; ++n) {
    if (n != 0) inv.trace_error = std::max(inv.trace_error, std::abs(fd.harmonic(n).trace()));
    inv.hermiticity_error = std::max(
        inv.hermiticity_error, max_abs_diff(fd.harmonic(-n), fd.harmonic(n).adjoint()));
  }
  inv.min_population = INFINITY;
  inv.max_population = -INFINITY;
  for (std::size_t i = 0; i < kLevels; ++i) {
    const cplx p = fd.dc()(i, i);
    inv.min_population = std::min(inv.min_population, p.real());
    inv.max_population = std::max(inv.max_population, p.real());
    inv.max_population_imag = std::max(inv.max_population_imag, std::abs(p.imag()));
  }
  inv.min_eigenvalue = INFINITY;
  const double period = fd.delta() > 0.0 ? 2.0 * std::numbers::pi / fd.delta() : 0.0;
  for (int k = 0; k < phases; ++k) {
    CMatrix rho = fd.at(period * k / phases);
    // symmetrise away round-off before the Hermitian solver
    CMatrix herm = (rho + rho.adjoint()) * 0.5;
    inv.min_eigenvalue = std::min(inv.min_eigenvalue, hermitian_eigenvalues(herm).front());
  }
  inv.harmonic_decay = std::max(frobenius(fd.harmonic(n_max)), frobenius(fd.harmonic(-n_max))) /
                       frobenius(fd.dc());
  return inv;
}

CMatrix solve_static(const CMatrix& l0) {
  if (l0.rows() != kLiouvilleDim || l0.cols() != kLiouvilleDim)
    throw InvalidArgument("solve_static: expected a 16x16 superoperator");
  CMatrix a = l0;
  for (std::size_t k = 0; k < kLiouvilleDim; ++k) a(kTraceRow, k) = 0.0;
  for (std::size_t i = 0; i < kLevels; ++i) a(kTraceRow, vec_index(i, i)) = 1.0;
  std::vector<cplx> rhs(kLiouvilleDim);
  rhs[kTraceRow] = 1.0;
  return as_density(solve_dense(a, rhs));
}

CMatrix ground_mixture() {
  CMatrix rho(kLevels, kLevels);
  rho(0, 0) = rho(1, 1) = 0.5;
  return rho;
}

namespace {

// One RK4 step applied to every column of `state` (16 x m).
void rk4_step(const CMatrix& la, const CMatrix& lb, const CMatrix& lc, double h, CMatrix& state,
              CMatrix& k1, CMatrix& k2, CMatrix& k3, CMatrix& k4, CMatrix& tmp) {
  const std::size_t r = state.rows(), m = state.cols();
  auto mul = [&](const CMatrix& l, const CMatrix& x, CMatrix& out) {
    std::fill(out.flat().begin(), out.flat().end(), cplx{});
    kernels::gemm_acc(r, m, r, l.data(), x.data(), out.data());
  };
  mul(la, state, k1);
  tmp = state;
  kernels::axpy(h / 2, k1.flat(), tmp.flat());
  mul(lb, tmp, k2);
  tmp = state;
  kernels::axpy(h / 2, k2.flat(), tmp.flat());
  mul(lb, tmp, k3);
  tmp = state;
  kernels::axpy(h, k3.flat(), tmp.flat());
  mul(lc, tmp, k4);
  kernels::axpy(h / 6, k1.flat(), state.flat());
  kernels::axpy(h / 3, k2.flat(), state.flat());
  kernels::axpy(h / 3, k3.flat(), state.flat());
  kernels::axpy(h / 6, k4.flat(), state.flat());
}

CMatrix as_column(const CMatrix& rho) {
  CMatrix c(kLiouvilleDim, 1);
  std::copy(rho.flat().begin(), rho.flat().end(), c.flat().begin());
  return c;
}

// Integrates `state` (16 x m) over [t0, t0 + steps*h]. When `average` is
// given, accumulates the trapezoid integral of the state. When `samples` is
// given, records the state every `sample_every` steps.
void integrate(const LiouvillianHarmonics& liouv, double delta, double t0, double h, int steps,
               CMatrix& state, CMatrix* average, std::vector<CMatrix>* samples = nullptr,
               int sample_every = 1) {
  const std::size_t r = state.rows(), m = state.cols();
  CMatrix k1(r, m), k2(r, m), k3(r, m), k4(r, m), tmp(r, m);
  CMatrix l_start = liouv.at(t0, delta);
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    if (samples && s % sample_every == 0) samples->push_back(state);
    if (average) kernels::axpy(h / 2, state.flat(), average->flat());
    const CMatrix l_mid = liouv.at(t + h / 2, delta);
    CMatrix l_end = liouv.at(t + h, delta);
    rk4_step(l_start, l_mid, l_end, h, state, k1, k2, k3, k4, tmp);
    if (average) kernels::axpy(h / 2, state.flat(), average->flat());
    l_start = std::move(l_end);
  }
}

double row_sum_norm(const CMatrix& m) {
  double best = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double s = 0.0;
    for (const auto& v : m.row(r)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

CMatrix propagate_density(const LiouvillianHarmonics& liouv, double delta, const CMatrix& rho0,
                          double t0, double t1, int steps) {
  if (steps < 1) throw InvalidArgument("propagate_density: steps must be >= 1");
  CMatrix state = as_column(rho0);
  integrate(liouv, delta, t0, (t1 - t0) / steps, steps, state, nullptr);
  return as_density(state.flat());
}

PeriodAverage integrate_to_period_average(const LiouvillianHarmonics& liouv, double delta,
                                          const CMatrix& rho0, int horizon_periods,
                                          const IntegratorOptions& opts) {
  if (!(delta > 0.0)) throw InvalidArgument("drive half-splitting delta must be positive");
  if (horizon_periods < 1) throw InvalidArgument("horizon must be at least one period");
  if (rho0.rows() != kLevels || rho0.cols() != kLevels)
    throw InvalidArgument("initial density matrix must be 4x4");
  if (max_abs_diff(rho0, rho0.adjoint()) > 1e-12) throw InvalidArgument("initial state not Hermitian");
  if (std::abs(rho0.trace() - 1.0) > 1e-12) throw InvalidArgument("initial state trace != 1");
  if (hermitian_eigenvalues(rho0).front() < -1e-12)
    throw InvalidArgument("initial state not positive semidefinite");

  const double period = 2.0 * std::numbers::pi / delta;
  int steps = opts.steps_per_period;
  if (steps <= 0) {
    double h = std::min(period, 1.0) / 200.0;
    const double scale = row_sum_norm(liouv.l0) + row_sum_norm(liouv.lp) + row_sum_norm(liouv.lm);
    if (scale > 0.0) h = std::min(h, 1.5 / scale);
    steps = static_cast<int>(std::ceil(period / h));
  }
  const double h = period / steps;

  // One-period map and period-average map, starting at t = 0.
  CMatrix monodromy = CMatrix::identity(kLiouvilleDim);
  CMatrix avg_map(kLiouvilleDim, kLiouvilleDim);
  integrate(liouv, delta, 0.0, h, steps, monodromy, &avg_map);
  avg_map *= 1.0 / period;

  std::vector<cplx> state(rho0.flat().begin(), rho0.flat().end());
  std::vector<cplx> mean = matvec(avg_map, state);
  double change = INFINITY;
  int periods = 1;
  for (; periods < horizon_periods; ++periods) {
    state = matvec(monodromy, state);
    auto next = matvec(avg_map, state);
    change = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) change = std::max(change, std::abs(next[i] - mean[i]));
    mean = std::move(next);
    if (change < opts.convergence_tol) break;
  }
  if (!(change < opts.convergence_tol))
    throw ConvergenceError("periodic steady state not reached within " +
                           std::to_string(horizon_periods) + " periods");

  PeriodAverage out;
  out.mean = as_density(mean);
  out.trace.convergence = change;
  out.trace.periods = periods;
  const int n_samples = std::max(1, opts.trace_samples);
  const int every = std::max(1, steps / n_samples);
  CMatrix col(kLiouvilleDim, 1);
  std::copy(state.begin(), state.end(), col.flat().begin());
  std::vector<CMatrix> cols;
  integrate(liouv, delta, 0.0, h, steps, col, nullptr, &cols, every);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    out.trace.times.push_back(static_cast<double>(k) * every * h);
    out.trace.samples.push_back(as_density(cols[k].flat()));
  }
  return out;
}

}  // namespace slowlight
