#include "slowlight/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace slowlight::kernels {

namespace {

Isa probe_cpu() noexcept {
#if defined(SLOWLIGHT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

std::atomic<Isa>& active_slot() noexcept {
  static std::atomic<Isa> slot{detected_isa()};
  return slot;
}

}  // namespace

Isa detected_isa() noexcept {
  static const Isa isa = probe_cpu();
  return isa;
}

Isa active_isa() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2)
    throw std::invalid_argument("AVX2 kernels requested but not supported by this CPU");
  active_slot().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
#if defined(SLOWLIGHT_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::axpy(a, x.data(), y.data(), x.size());
#endif
  scalar::axpy(a, x.data(), y.data(), x.size());
}

void mul_inplace(std::span<const cplx> x, std::span<cplx> y) {
  if (x.size() != y.size()) throw std::invalid_argument("mul_inplace: size mismatch");
#if defined(SLOWLIGHT_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::mul_inplace(x.data(), y.data(), x.size());
#endif
  scalar::mul_inplace(x.data(), y.data(), x.size());
}

cplx dotu(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dotu: size mismatch");
#if defined(SLOWLIGHT_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::dotu(x.data(), y.data(), x.size());
#endif
  return scalar::dotu(x.data(), y.data(), x.size());
}

void gemm_acc(std::size_t m, std::size_t n, std::size_t k, const cplx* a, const cplx* b,
              cplx* c) {
#if defined(SLOWLIGHT_HAVE_AVX2)
  const bool wide = active_isa() == Isa::Avx2;
#endif
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const cplx aip = a[i * k + p];
      if (aip == cplx{}) continue;
#if defined(SLOWLIGHT_HAVE_AVX2)
      if (wide) {
        avx2::axpy(aip, b + p * n, crow, n);
        continue;
      }
#endif
      scalar::axpy(aip, b + p * n, crow, n);
    }
  }
}

}  // namespace slowlight::kernels
