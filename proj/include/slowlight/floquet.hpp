#pragma once

#include <utility>
#include <vector>

#include "slowlight/matrix.hpp"
#include "slowlight/model.hpp"

namespace slowlight {

// Periodic steady state rho(t) = sum_n rho^(n) e^{i n delta t}, |n| <= order.
class FloquetDensity {
 public:
  FloquetDensity(int order, double delta, std::vector<CMatrix> harmonics);

  int order() const noexcept { return order_; }
  double delta() const noexcept { return delta_; }

  // n in [-order, order]
  const CMatrix& harmonic(int n) const;
  const CMatrix& dc() const { return harmonic(0); }

  // rho(t)
  CMatrix at(double t) const;

 private:
  int order_;
  double delta_;
  std::vector<CMatrix> harmonics_;
};

struct TruncationOptions {
  double tol = 1e-8;
  int max_order = 25;
  // The top harmonics must also be this small relative to rho^(0).
  double harmonic_tol = 1e-6;
  // First order tried; a known-good order from a nearby point saves the climb.
  int start_order = 1;
};

// Harmonic balance of the truncated block system, with the rho_11 balance
// of the n = 0 block replaced by trace(rho^(0)) = 1.
FloquetDensity solve_floquet(const LiouvillianHarmonics& liouv, double delta, int order);

// Same system assembled densely and solved with plain partial-pivot LU;
// used to cross-check the block elimination.
FloquetDensity solve_floquet_dense(const LiouvillianHarmonics& liouv, double delta, int order);

// First order on the ladder start, start+1, ... whose rho31^(0), rho41^(0)
// move by less than tol (relative) when the order grows by two and whose
// top harmonics are below harmonic_tol relative to rho^(0). The ladder
// advances one order at a time up to 4 and by a quarter of the current order
// beyond, so the result is the smallest passing order when it is <= 4 and
// within 25% of it above that.
int choose_truncation(const LiouvillianHarmonics& liouv, double delta,
                      const TruncationOptions& opts = {});

// choose_truncation followed by the solve at that order.
FloquetDensity solve_floquet_converged(const LiouvillianHarmonics& liouv, double delta,
                                       const TruncationOptions& opts = {});

// Harmonics together with their derivative with respect to a parameter x
// on which only L0 depends.
struct FloquetResponse {
  FloquetDensity density;
  FloquetDensity derivative;
};

// One block factorisation serves both solves: A rho = b, then
// A drho = -(dA/dx) rho with the trace row held fixed.
FloquetResponse solve_floquet_response(const LiouvillianHarmonics& liouv, const CMatrix& dl0,
                                       double delta, int order);

// Truncation chosen as in choose_truncation (on the density); `order_out`
// receives the accepted order.
FloquetResponse solve_floquet_response_converged(const LiouvillianHarmonics& liouv,
                                                 const CMatrix& dl0, double delta,
                                                 const TruncationOptions& opts = {},
                                                 int* order_out = nullptr);

struct DcCoherences {
  cplx rho31;
  cplx rho41;
};

DcCoherences extract_dc_coherences(const FloquetDensity& fd);

struct FloquetInvariants {
  double trace_error = 0.0;        // |tr rho^(0) - 1| and |tr rho^(n!=0)|
  double hermiticity_error = 0.0;  // max |rho^(-n) - rho^(n)+|
  double min_population = 0.0;     // over diag(rho^(0))
  double max_population = 0.0;
  double max_population_imag = 0.0;
  double min_eigenvalue = 0.0;     // over sampled phases of rho(t)
  double harmonic_decay = 0.0;     // ||rho^(N)|| / ||rho^(0)||
};

FloquetInvariants check_invariants(const FloquetDensity& fd, int phases = 16);

struct TimeTrace {
  std::vector<double> times;    // over the final period
  std::vector<CMatrix> samples;
  double convergence = 0.0;     // last period-to-period change of the average
  int periods = 0;              // periods integrated before convergence
};

struct PeriodAverage {
  CMatrix mean;
  TimeTrace trace;
};

struct IntegratorOptions {
  double convergence_tol = 1e-9;
  int steps_per_period = 0;  // 0: derive from the rate scale
  int trace_samples = 64;
};

// Fixed-step RK4 over whole drive periods until the period average settles.
// The linear one-period map and the period-average map are integrated once
// (as 16x16 matrices) and then iterated on the state.
PeriodAverage integrate_to_period_average(const LiouvillianHarmonics& liouv, double delta,
                                          const CMatrix& rho0, int horizon_periods,
                                          const IntegratorOptions& opts = {});

// Plain RK4 of the master equation from t0 to t1 in the given number of steps.
CMatrix propagate_density(const LiouvillianHarmonics& liouv, double delta, const CMatrix& rho0,
                          double t0, double t1, int steps);

// Steady state of a time-independent Liouvillian (trace-row replacement).
CMatrix solve_static(const CMatrix& l0);

// (sigma11 + sigma22) / 2
CMatrix ground_mixture();

}  // namespace slowlight
