// Compiled with -mavx2 -mfma. Only reached through the dispatcher after a
// CPUID check, so nothing here may be inlined into generic code.
#include <immintrin.h>

#include "slowlight/kernels.hpp"

namespace slowlight::kernels::avx2 {

namespace {

// Two complex doubles per __m256d: [re0, im0, re1, im1].
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);          // [br0, br0, br1, br1]
  const __m256d b_im = _mm256_permute_pd(b, 0xF);     // [bi0, bi0, bi1, bi1]
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);     // [ai0, ar0, ai1, ar1]
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

}  // namespace

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) noexcept {
  const auto* xp = reinterpret_cast<const double*>(x);
  auto* yp = reinterpret_cast<double*>(y);
  const __m256d a_re = _mm256_set1_pd(a.real());
  const __m256d a_im = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
    const __m256d x1 = _mm256_loadu_pd(xp + 2 * i + 4);
    const __m256d x0s = _mm256_permute_pd(x0, 0x5);
    const __m256d x1s = _mm256_permute_pd(x1, 0x5);
    const __m256d p0 = _mm256_fmaddsub_pd(a_re, x0, _mm256_mul_pd(a_im, x0s));
    const __m256d p1 = _mm256_fmaddsub_pd(a_re, x1, _mm256_mul_pd(a_im, x1s));
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), p0));
    _mm256_storeu_pd(yp + 2 * i + 4, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i + 4), p1));
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
    const __m256d p0 =
        _mm256_fmaddsub_pd(a_re, x0, _mm256_mul_pd(a_im, _mm256_permute_pd(x0, 0x5)));
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), p0));
  }
  if (i < n) scalar::axpy(a, x + i, y + i, n - i);
}

void mul_inplace(const cplx* x, cplx* y, std::size_t n) noexcept {
  const auto* xp = reinterpret_cast<const double*>(x);
  auto* yp = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    _mm256_storeu_pd(yp + 2 * i, cmul(yv, xv));
  }
  if (i < n) scalar::mul_inplace(x + i, y + i, n - i);
}

cplx dotu(const cplx* x, const cplx* y, std::size_t n) noexcept {
  const auto* xp = reinterpret_cast<const double*>(x);
  const auto* yp = reinterpret_cast<const double*>(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = _mm256_add_pd(acc, cmul(_mm256_loadu_pd(xp + 2 * i), _mm256_loadu_pd(yp + 2 * i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  cplx s{lanes[0] + lanes[2], lanes[1] + lanes[3]};
  if (i < n) s += scalar::dotu(x + i, y + i, n - i);
  return s;
}

}  // namespace slowlight::kernels::avx2
