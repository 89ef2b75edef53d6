#include "slowlight/kernels.hpp"

namespace slowlight::kernels::scalar {

// Written out on (re, im) pairs so the reference path does not depend on
// how std::complex multiplication is lowered (no NaN recovery branches).
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) noexcept {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr)};
  }
}

void mul_inplace(const cplx* x, cplx* y, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    y[i] = {xr * yr - xi * yi, xr * yi + xi * yr};
  }
}

cplx dotu(const cplx* x, const cplx* y, std::size_t n) noexcept {
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    sr += xr * yr - xi * yi;
    si += xr * yi + xi * yr;
  }
  return {sr, si};
}

}  // namespace slowlight::kernels::scalar
