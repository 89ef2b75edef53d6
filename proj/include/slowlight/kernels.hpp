#pragma once

#include <complex>
#include <span>
#include <string_view>

namespace slowlight::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

// Best ISA the running CPU supports (cached after the first call).
Isa detected_isa() noexcept;

// ISA currently used by the dispatching entry points. Defaults to
// detected_isa(); tests force Scalar to compare the two paths.
Isa active_isa() noexcept;
void set_active_isa(Isa isa);

std::string_view isa_name(Isa isa) noexcept;

// y[i] += a * x[i]
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);

// y[i] *= x[i]
void mul_inplace(std::span<const cplx> x, std::span<cplx> y);

// sum_i x[i] * y[i] (no conjugation)
cplx dotu(std::span<const cplx> x, std::span<const cplx> y);

// Row-major C(m x n) += A(m x k) * B(k x n).
void gemm_acc(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
              const cplx* b, cplx* c);

namespace scalar {
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) noexcept;
void mul_inplace(const cplx* x, cplx* y, std::size_t n) noexcept;
cplx dotu(const cplx* x, const cplx* y, std::size_t n) noexcept;
}  // namespace scalar

#if defined(SLOWLIGHT_HAVE_AVX2)
namespace avx2 {
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) noexcept;
void mul_inplace(const cplx* x, cplx* y, std::size_t n) noexcept;
cplx dotu(const cplx* x, const cplx* y, std::size_t n) noexcept;
}  // namespace avx2
#endif

}  // namespace slowlight::kernels
