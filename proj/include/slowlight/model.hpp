#pragma once

#include <array>
#include <string>
#include <vector>

#include "slowlight/matrix.hpp"

// Four-level double-Lambda core (|1>,|2> ground, |3>,|4> excited) driven by
// a weak probe on 1->3/1->4 and a bichromatic coupling on 2->3/2->4, with an
// incoherent 1->2 pump. Everything here is in units of Gamma3 with hbar = 1.
namespace slowlight {

inline constexpr std::size_t kLevels = 4;
inline constexpr std::size_t kLiouvilleDim = kLevels * kLevels;

// Row-major vectorisation index of rho_ij (0-based levels).
constexpr std::size_t vec_index(std::size_t i, std::size_t j) noexcept { return i * kLevels + j; }

// Dipole phase pattern, one sign per transition.
struct DipoleSigns {
  int s31 = +1;
  int s41 = -1;
  int s32 = +1;
  int s42 = +1;

  bool operator==(const DipoleSigns&) const = default;
};

struct AtomicSystem {
  double gamma31 = 0.5;
  double gamma32 = 0.5;
  double gamma41 = 0.5;
  double gamma42 = 0.5;
  double gamma2_deph = 0.01;
  double gamma3_deph = 0.0;
  double gamma4_deph = 0.0;
  double omega43 = 140.0;
  DipoleSigns signs{};
};

struct DriveConfig {
  double omega_c = 30.0;
  double omega_p = 0.01;
  // Half the frequency difference of the two coupling fields.
  double delta = 0.2;
  double delta_c = 70.0;
  double delta_p = 70.0;

  double two_photon_detuning() const noexcept { return delta_p - delta_c; }
};

enum class PumpMode { DirectRate, FiveLevelField };

// How the 1->2 pump acts on the density matrix.
enum class PumpForm {
  // -R rho11 (sigma11 - sigma22): moves population, leaves rho1j alone.
  PopulationTransfer,
  // Lindblad D[|2><1|] at rate R: also damps rho1j at R/2.
  Lindblad,
};

struct PumpField {
  double omega_op = 0.0;
  double delta_op = 0.0;
  double gamma51 = 0.5;
  double gamma52 = 0.5;
  double gamma5_deph = 0.0;
};

struct PumpModel {
  PumpMode mode = PumpMode::DirectRate;
  double rate = 0.0;  // used in DirectRate mode
  PumpField field{};  // used in FiveLevelField mode
  PumpForm form = PumpForm::PopulationTransfer;

  static PumpModel direct(double r, PumpForm form = PumpForm::PopulationTransfer) {
    PumpModel p;
    p.rate = r;
    p.form = form;
    return p;
  }
};

struct HamiltonianParts {
  CMatrix static_part;  // 4x4
  CMatrix drive_part;   // 4x4, multiplies (e^{i delta t} + e^{-i delta t})
};

// Liouvillian of d rho/dt = L0 rho + Lp rho e^{i delta t} + Lm rho e^{-i delta t}
// acting on the row-major vectorised density matrix.
struct LiouvillianHarmonics {
  CMatrix l0;
  CMatrix lp;
  CMatrix lm;

  // L(t) = L0 + Lp e^{i delta t} + Lm e^{-i delta t}
  CMatrix at(double t, double delta) const;
};

HamiltonianParts build_hamiltonian_parts(const AtomicSystem& system, const DriveConfig& drive);

LiouvillianHarmonics build_liouvillian(const AtomicSystem& system, const DriveConfig& drive,
                                       const PumpModel& pump);

// -i[H, .]
CMatrix commutator_superop(const CMatrix& h);

// dL0/d(delta_p) at fixed delta_c: the probe detuning enters only the
// diagonal of H_static, so this is -i[-diag(0, 1, 1, 1), .].
CMatrix probe_detuning_derivative();
// (rate/2)(2 A rho A^+ - A^+A rho - rho A^+A)
CMatrix dissipator_superop(const CMatrix& jump, double rate);

// Transition operator |to><from| for 1-based level labels.
CMatrix transition(std::size_t to, std::size_t from);

// Pump rate of a driven three-level 1-5-2 subsystem. Strictly below
// gamma52 for any finite field.
double pump_rate_from_field(const PumpField& field);

// Rate the model actually uses (direct, or computed from the field).
double effective_pump_rate(const PumpModel& pump);

std::vector<std::string> validate_system(const AtomicSystem& system, const DriveConfig& drive,
                                         const PumpModel& pump);

// Apply a superoperator to a 4x4 density matrix.
CMatrix apply_superop(const CMatrix& superop, const CMatrix& rho);

}  // namespace slowlight
