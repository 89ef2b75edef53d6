#include <random>

#include "doctest.h"
#include "slowlight/errors.hpp"
#include "slowlight/model.hpp"
#include "test_util.hpp"

using namespace slowlight;

namespace {

bool contains(const std::vector<std::string>& v, std::string_view needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

CMatrix projector(std::size_t level) {
  CMatrix p(4, 4);
  p(level - 1, level - 1) = 1.0;
  return p;
}

}  // namespace

TEST_CASE("Hamiltonian with all fields off") {
  AtomicSystem sys;
  DriveConfig d;
  d.omega_c = d.omega_p = 0.0;
  d.delta_p = d.delta_c = 0.0;
  const auto h = build_hamiltonian_parts(sys, d);
  // -(1/2) * 2 (delta_p - omega43) on level 4 with delta_p = 0
  CHECK(h.static_part(3, 3) == cplx{140.0});
  for (std::size_t i = 0; i < 3; ++i) CHECK(h.static_part(i, i) == cplx{0.0});
  CHECK(h.drive_part.max_abs() == 0.0);
}

TEST_CASE("probe coupling to level 4 carries the opposite dipole sign") {
  const auto h = build_hamiltonian_parts(AtomicSystem{}, DriveConfig{});
  CHECK(h.static_part(0, 3).real() == doctest::Approx(0.005));
  CHECK(h.static_part(3, 0).real() == doctest::Approx(0.005));
  CHECK(h.static_part(0, 2).real() == doctest::Approx(-0.005));
  CHECK(h.drive_part(1, 2).real() == doctest::Approx(-15.0));
  CHECK(h.drive_part(1, 3).real() == doctest::Approx(-15.0));
}

TEST_CASE("Hamiltonian parts are Hermitian") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int k = 0; k < 20; ++k) {
    AtomicSystem sys;
    sys.signs = {k & 1 ? 1 : -1, k & 2 ? 1 : -1, k & 4 ? 1 : -1, k & 8 ? 1 : -1};
    DriveConfig d{u(rng), u(rng), std::abs(u(rng)), u(rng), u(rng)};
    const auto h = build_hamiltonian_parts(sys, d);
    CHECK(max_abs_diff(h.static_part, h.static_part.adjoint()) == 0.0);
    CHECK(max_abs_diff(h.drive_part, h.drive_part.adjoint()) == 0.0);
  }
}

TEST_CASE("pump moves population from level 1 to level 2") {
  DriveConfig d;
  d.omega_c = d.omega_p = 0.0;
  const auto l = build_liouvillian(AtomicSystem{}, d, PumpModel::direct(0.3));
  const CMatrix out = apply_superop(l.l0, projector(1));
  CHECK(out(1, 1).real() == doctest::Approx(0.3));
  CHECK(out(0, 0).real() == doctest::Approx(-0.3));
}

TEST_CASE("spontaneous emission out of level 3") {
  const AtomicSystem sys;
  DriveConfig d;
  d.omega_c = d.omega_p = 0.0;
  const auto l = build_liouvillian(sys, d, PumpModel{});
  const CMatrix out = apply_superop(l.l0, projector(3));
  CHECK(out(0, 0).real() == doctest::Approx(sys.gamma31));
  CHECK(out(1, 1).real() == doctest::Approx(sys.gamma32));
  CHECK(out(2, 2).real() == doctest::Approx(-(sys.gamma31 + sys.gamma32)));
}

TEST_CASE("dephasing of the 1-2 coherence at gamma2/2") {
  AtomicSystem sys;
  DriveConfig d;
  d.omega_c = d.omega_p = 0.0;
  d.delta_p = d.delta_c = 0.0;
  const auto l = build_liouvillian(sys, d, PumpModel{});
  CMatrix rho(4, 4);
  rho(0, 1) = 1.0;
  CHECK(apply_superop(l.l0, rho)(0, 1).real() == doctest::Approx(-sys.gamma2_deph / 2));

  // the Lindblad pump also damps rho_1j
  const auto ll = build_liouvillian(sys, d, PumpModel::direct(0.2, PumpForm::Lindblad));
  CHECK(apply_superop(ll.l0, rho)(0, 1).real() == doctest::Approx(-sys.gamma2_deph / 2 - 0.1));
  const auto lp = build_liouvillian(sys, d, PumpModel::direct(0.2));
  CHECK(apply_superop(lp.l0, rho)(0, 1).real() == doctest::Approx(-sys.gamma2_deph / 2));
}

TEST_CASE("generator conserves trace and Hermiticity") {
  std::mt19937_64 rng(21);
  AtomicSystem sys;
  sys.gamma3_deph = 0.07;
  sys.gamma4_deph = 0.03;
  const DriveConfig d{30.0, 0.01, 0.2, 70.0, 70.3};
  for (auto form : {PumpForm::PopulationTransfer, PumpForm::Lindblad}) {
    const auto l = build_liouvillian(sys, d, PumpModel::direct(0.25, form));
    for (int k = 0; k < 16; ++k) {
      const CMatrix rho = testutil::random_hermitian(rng, 4);
      const CMatrix a0 = apply_superop(l.l0, rho);
      const CMatrix ap = apply_superop(l.lp, rho);
      const CMatrix am = apply_superop(l.lm, rho);
      CHECK(std::abs(a0.trace()) <= 1e-14 * 16);
      CHECK(std::abs(ap.trace()) <= 1e-14 * 16);
      CHECK(std::abs(am.trace()) <= 1e-14 * 16);
      for (double t : {0.0, 1.3, 7.9}) {
        const CMatrix full = apply_superop(l.at(t, d.delta), rho);
        CHECK(std::abs(full.trace()) <= 1e-13);
        CHECK(max_abs_diff(full, full.adjoint()) <= 1e-12);
      }
      // L0 rho^+ = (L0 rho)^+ and Lm(rho^+) = (Lp rho)^+
      const CMatrix g = testutil::random_matrix(rng, 4, 4);
      CHECK(max_abs_diff(apply_superop(l.l0, g.adjoint()), apply_superop(l.l0, g).adjoint()) <= 1e-12);
      CHECK(max_abs_diff(apply_superop(l.lm, g.adjoint()), apply_superop(l.lp, g).adjoint()) <= 1e-12);
    }
  }
}

TEST_CASE("L- is the superoperator of the adjoint drive") {
  const AtomicSystem sys;
  const DriveConfig d;
  const auto l = build_liouvillian(sys, d, PumpModel{});
  const auto h = build_hamiltonian_parts(sys, d);
  CHECK(max_abs_diff(l.lm, commutator_superop(h.drive_part.adjoint())) == 0.0);
  CHECK(max_abs_diff(l.lp, commutator_superop(h.drive_part)) == 0.0);
}

TEST_CASE("probe detuning derivative matches a finite difference of L0") {
  const AtomicSystem sys;
  DriveConfig a, b;
  const double h = 1e-4;
  a.delta_p -= h;
  b.delta_p += h;
  const CMatrix fd = (build_liouvillian(sys, b, PumpModel{}).l0 - build_liouvillian(sys, a, PumpModel{}).l0) *
                     cplx{0.5 / h};
  CHECK(max_abs_diff(fd, probe_detuning_derivative()) <= 1e-8);
}

TEST_CASE("pump rate from the five-level field") {
  PumpField f;
  CHECK(pump_rate_from_field(f) == 0.0);
  f.omega_op = 1e6;
  const double r = pump_rate_from_field(f);
  CHECK(r < f.gamma52);
  CHECK(r == doctest::Approx(f.gamma52).epsilon(1e-9));

  f.omega_op = std::sqrt(0.5 * 1.0);  // Omega^2 = gamma51 * Gamma5
  CHECK(pump_rate_from_field(f) == doctest::Approx(0.25));

  f.gamma51 = 0.0;
  CHECK_THROWS_AS(pump_rate_from_field(f), InvalidArgument);

  PumpModel p;
  p.mode = PumpMode::FiveLevelField;
  p.field.omega_op = std::sqrt(0.5);
  CHECK(effective_pump_rate(p) == doctest::Approx(0.25));
}

TEST_CASE("pump rate is monotone in the field and in the detuning") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  for (int k = 0; k < 200; ++k) {
    PumpField f{u(rng), u(rng) - 2.5, u(rng), u(rng), u(rng) - 0.01};
    const double r = pump_rate_from_field(f);
    CHECK(r < f.gamma52);
    PumpField g = f;
    g.omega_op *= 1.1;
    CHECK(pump_rate_from_field(g) > r);
    g = f;
    g.delta_op = f.delta_op * 1.2 + (f.delta_op >= 0 ? 0.1 : -0.1);
    CHECK(pump_rate_from_field(g) < r);
  }
}

TEST_CASE("validation diagnostics") {
  const AtomicSystem sys;
  const DriveConfig d;
  CHECK(validate_system(sys, d, PumpModel{}).empty());

  AtomicSystem all_plus;
  all_plus.signs = {1, 1, 1, 1};
  CHECK(contains(validate_system(all_plus, d, PumpModel{}), "dipole phase constraint violated"));

  CHECK(contains(validate_system(sys, d, PumpModel::direct(0.6)), "pump rate exceeds"));

  DriveConfig off = d;
  off.omega_p = 0.0;
  CHECK(contains(validate_system(sys, off, PumpModel{}), "may not be unique"));
}
