#include "slowlight/model.hpp"

#include <cmath>
#include <complex>

#include "slowlight/errors.hpp"
#include "slowlight/kernels.hpp"

namespace slowlight {

namespace {

constexpr cplx kI{0.0, 1.0};

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

void check_system(const AtomicSystem& s) {
  require(s.gamma31 >= 0 && s.gamma32 >= 0 && s.gamma41 >= 0 && s.gamma42 >= 0,
          "decay rates must be non-negative");
  require(s.gamma2_deph >= 0 && s.gamma3_deph >= 0 && s.gamma4_deph >= 0,
          "dephasing rates must be non-negative");
  for (int sign : {s.signs.s31, s.signs.s41, s.signs.s32, s.signs.s42})
    require(sign == 1 || sign == -1, "dipole signs must be +1 or -1");
}

}  // namespace

CMatrix LiouvillianHarmonics::at(double t, double delta) const {
  const cplx e = std::exp(kI * delta * t);
  CMatrix out = l0;
  kernels::axpy(e, lp.flat(), out.flat());
  kernels::axpy(std::conj(e), lm.flat(), out.flat());
  return out;
}

CMatrix transition(std::size_t to, std::size_t from) {
  require(to >= 1 && to <= kLevels && from >= 1 && from <= kLevels, "level label out of range");
  CMatrix m(kLevels, kLevels);
  m(to - 1, from - 1) = 1.0;
  return m;
}

HamiltonianParts build_hamiltonian_parts(const AtomicSystem& system, const DriveConfig& drive) {
  check_system(system);
  const auto& sg = system.signs;
  const double op3 = sg.s31 * drive.omega_p, op4 = sg.s41 * drive.omega_p;
  const double oc3 = sg.s32 * drive.omega_c, oc4 = sg.s42 * drive.omega_c;

  CMatrix hs(kLevels, kLevels);
  hs(1, 1) = -(drive.delta_p - drive.delta_c);
  hs(2, 2) = -drive.delta_p;
  hs(3, 3) = -(drive.delta_p - system.omega43);
  hs(0, 2) = hs(2, 0) = -0.5 * op3;
  hs(0, 3) = hs(3, 0) = -0.5 * op4;

  CMatrix hd(kLevels, kLevels);
  hd(1, 2) = hd(2, 1) = -0.5 * oc3;
  hd(1, 3) = hd(3, 1) = -0.5 * oc4;
  return {std::move(hs), std::move(hd)};
}

CMatrix commutator_superop(const CMatrix& h) {
  CMatrix l(kLiouvilleDim, kLiouvilleDim);
  for (std::size_t i = 0; i < kLevels; ++i)
    for (std::size_t j = 0; j < kLevels; ++j)
      for (std::size_t k = 0; k < kLevels; ++k) {
        // (H rho)_ij = H_ik rho_kj ; (rho H)_ij = rho_ik H_kj
        l(vec_index(i, j), vec_index(k, j)) += -kI * h(i, k);
        l(vec_index(i, j), vec_index(i, k)) += kI * h(k, j);
      }
  return l;
}

CMatrix dissipator_superop(const CMatrix& jump, double rate) {
  CMatrix l(kLiouvilleDim, kLiouvilleDim);
  if (rate == 0.0) return l;
  const CMatrix ada = jump.adjoint() * jump;
  for (std::size_t i = 0; i < kLevels; ++i)
    for (std::size_t j = 0; j < kLevels; ++j)
      for (std::size_t k = 0; k < kLevels; ++k)
        for (std::size_t m = 0; m < kLevels; ++m) {
          // (A rho A^+)_ij = A_ik rho_km conj(A_jm)
          cplx v = rate * jump(i, k) * std::conj(jump(j, m));
          if (j == m) v -= 0.5 * rate * ada(i, k);
          if (i == k) v -= 0.5 * rate * ada(m, j);
          if (v != cplx{}) l(vec_index(i, j), vec_index(k, m)) += v;
        }
  return l;
}

CMatrix probe_detuning_derivative() {
  CMatrix dh(kLevels, kLevels);
  for (std::size_t i = 1; i < kLevels; ++i) dh(i, i) = -1.0;
  return commutator_superop(dh);
}

LiouvillianHarmonics build_liouvillian(const AtomicSystem& system, const DriveConfig& drive,
                                       const PumpModel& pump) {
  const auto h = build_hamiltonian_parts(system, drive);
  CMatrix l0 = commutator_superop(h.static_part);
  l0 += dissipator_superop(transition(1, 3), system.gamma31);
  l0 += dissipator_superop(transition(2, 3), system.gamma32);
  l0 += dissipator_superop(transition(1, 4), system.gamma41);
  l0 += dissipator_superop(transition(2, 4), system.gamma42);
  l0 += dissipator_superop(transition(3, 3), system.gamma3_deph);
  l0 += dissipator_superop(transition(4, 4), system.gamma4_deph);
  l0 += dissipator_superop(transition(2, 2), system.gamma2_deph);

  const double r = effective_pump_rate(pump);
  if (pump.form == PumpForm::Lindblad) {
    l0 += dissipator_superop(transition(2, 1), r);
  } else {
    l0(vec_index(0, 0), vec_index(0, 0)) -= r;
    l0(vec_index(1, 1), vec_index(0, 0)) += r;
  }

  CMatrix lp = commutator_superop(h.drive_part);
  CMatrix lm = commutator_superop(h.drive_part.adjoint());
  return {std::move(l0), std::move(lp), std::move(lm)};
}

double pump_rate_from_field(const PumpField& f) {
  const double g5 = f.gamma51 + f.gamma52;
  const double g51 = f.gamma51 + f.gamma5_deph;
  require(f.gamma51 >= 0 && f.gamma52 >= 0 && f.gamma5_deph >= 0, "pump-level rates must be non-negative");
  require(g5 > 0, "total decay out of level 5 must be positive");
  if (!(g51 > 0)) throw InvalidArgument("degenerate pump model: gamma51 + gamma5_deph = 0");
  if (f.omega_op == 0.0) return 0.0;
  const double saturation = g5 * (g51 * g51 + 4.0 * f.delta_op * f.delta_op) /
                            (g51 * f.omega_op * f.omega_op);
  return f.gamma52 / (saturation + 1.0);
}

double effective_pump_rate(const PumpModel& pump) {
  if (pump.mode == PumpMode::FiveLevelField) return pump_rate_from_field(pump.field);
  require(pump.rate >= 0, "pump rate must be non-negative");
  return pump.rate;
}

std::vector<std::string> validate_system(const AtomicSystem& system, const DriveConfig& drive,
                                         const PumpModel& pump) {
  std::vector<std::string> out;
  const auto& s = system.signs;
  const int prod = s.s31 * s.s41 * s.s32 * s.s42;
  // Exactly one sign opposite to the other three <=> odd number of minus signs
  // with either one or three negatives; product -1 covers both.
  if (prod != -1)
    out.emplace_back("dipole phase constraint violated: need three dipoles in phase and one opposite");
  if (system.gamma31 < 0 || system.gamma32 < 0 || system.gamma41 < 0 || system.gamma42 < 0)
    out.emplace_back("negative spontaneous emission rate");
  if (drive.omega_p == 0.0)
    out.emplace_back("probe Rabi frequency is zero: susceptibility is undefined");
  if (drive.omega_c != 0.0 && !(drive.delta > 0.0))
    out.emplace_back("coupling half-splitting delta must be positive with couplings on");
  if (pump.mode == PumpMode::DirectRate) {
    if (pump.rate < 0) out.emplace_back("negative pump rate");
    if (pump.rate >= pump.field.gamma52)
      out.emplace_back("pump rate exceeds the single-level pump bound R_op < Gamma52");
  }
  if (drive.omega_p == 0.0 && effective_pump_rate(pump) == 0.0)
    out.emplace_back("no probe and no pump: ground-state steady state may not be unique");
  return out;
}

CMatrix apply_superop(const CMatrix& superop, const CMatrix& rho) {
  if (rho.rows() != kLevels || rho.cols() != kLevels || superop.rows() != kLiouvilleDim)
    throw InvalidArgument("apply_superop: shape mismatch");
  const auto v = matvec(superop, rho.flat());
  CMatrix out(kLevels, kLevels);
  std::copy(v.begin(), v.end(), out.flat().begin());
  return out;
}

}  // namespace slowlight
