#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "slowlight/floquet.hpp"
#include "slowlight/model.hpp"
#include "slowlight/spectroscopy.hpp"

namespace slowlight {

struct GridSpec {
  double lo = -1.0;
  double hi = 1.0;
  std::size_t points = 2001;
};

struct PulseSpec {
  double sigma_s = 1e-6;
  double window_s = 32e-6;
  std::size_t samples = 1u << 14;
};

// Everything a run needs. Defaults are the cold-cloud slow/fast-light setup:
// Omega_c = 30, delta = 0.2, R_op = 0, 5e11 cm^-3, 1 mm.
struct ScenarioConfig {
  std::string scenario;  // preset name, empty for a custom run

  AtomicSystem system{};
  DriveConfig drive{};
  PumpModel pump{};
  TruncationOptions truncation{};

  double density_m3 = 5e17;
  double length_m = 1e-3;
  LineData line{};

  bool doppler_enabled = false;
  DopplerConfig doppler{};

  GridSpec scan_grid{-1.0, 1.0, 2001};
  PulseSpec pulse{};
  GridSpec sweep_rates{0.0, 0.5, 26};
  // Rate points for Doppler-averaged sweeps over the same range (each
  // point is a full velocity average).
  std::size_t doppler_rate_points = 11;

  std::string out_dir = ".";
  bool csv = true;
  bool svg = false;
  unsigned threads = 1;
};

// Grammar, one statement per line:
//   # comment           (also after a value)
//   [section]           system | drive | pump | medium | doppler | scan | pulse | sweep | run
//   key = value
// Physical quantities carry their unit in the key (omega_c_gamma3,
// length_mm, temperature_k, ...). A key without its unit suffix is a
// UnitError; anything else unknown is a ParseError. Keys are unique across
// sections, so the section header is optional but must match when present.
ScenarioConfig parse_config(std::string_view text);

// Canonical key = value dump of every setting (the run echo). Joined with
// " = " and newlines it parses back to the same configuration.
std::vector<std::pair<std::string, std::string>> describe(const ScenarioConfig& cfg);

}  // namespace slowlight
