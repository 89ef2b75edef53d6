#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "slowlight/csv.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/scenarios.hpp"

using namespace slowlight;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("slowlight_" + name);
  fs::remove_all(d);
  return d;
}

struct Shell {
  int status = 0;
  std::string out;
};

Shell run_cli(const std::string& args) {
  Shell r;
  const std::string cmd = std::string(SLOWLIGHT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST_CASE("fig2a spectrum has two absorption maxima near the coupling splitting") {
  ScenarioConfig cfg = preset("fig2a");
  cfg.out_dir = fresh_dir("fig2a").string();
  cfg.svg = true;
  const RunReport rep = run_scenario(cfg);
  const Table t = parse_csv(read_file(fs::path(cfg.out_dir) / "fig2a_spectrum.csv"));
  const auto im = t.column_values("im_chi_scaled");
  const auto x = t.column_values("two_photon_detuning_Gamma3");
  const auto peaks = local_maxima(im);
  REQUIRE(peaks.size() == 2);
  // The maxima sit a residual light shift outside +-Delta (about 3%).
  CHECK(x[peaks[0]] == doctest::Approx(-0.1).epsilon(0.05));
  CHECK(x[peaks[1]] == doctest::Approx(0.1).epsilon(0.05));
  CHECK(x[peaks[0]] == doctest::Approx(-x[peaks[1]]));
  CHECK(rep.value("fig2a.centre_slope") > 0.0);
  CHECK(rep.value("fig2a.im_chi_local_maxima") == 2.0);

  // every headline value is in the summary CSV
  CHECK(read_file(fs::path(cfg.out_dir) / "fig2a_summary.csv") == to_csv(rep.headline));
  const std::string summary = to_csv(rep.headline);
  for (const auto& [k, v] : rep.headline)
    CHECK(summary.find(k + "," + format_double(v) + "\n") != std::string::npos);
  CHECK(fs::exists(fs::path(cfg.out_dir) / "fig2a_spectrum.svg"));
  CHECK_THROWS_AS(rep.value("nope"), InvalidArgument);
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("fig4 report carries slow and fast group indices") {
  ScenarioConfig cfg = preset("fig4");
  cfg.out_dir = fresh_dir("fig4").string();
  cfg.svg = true;
  const RunReport rep = run_scenario(cfg);
  CHECK(rep.value("fig4.n_g_slow") > 1.0);
  CHECK(rep.value("fig4.n_g_fast") < 0.0);
  CHECK(rep.value("fig4.slow_delay_s") > 0.0);
  CHECK(rep.value("fig4.fast_delay_s") < 0.0);
  // measured peak delay vs the group-index prediction
  for (const char* c : {"slow", "fast"}) {
    const double d = rep.value(std::string("fig4.") + c + "_delay_s");
    const double p = rep.value(std::string("fig4.") + c + "_predicted_delay_s");
    CHECK(std::abs(d - p) <= 0.1 * std::abs(p));
  }
  const std::string svg = read_file(fs::path(cfg.out_dir) / "fig4_pulse.svg");
  std::size_t lines = 0;
  for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++lines;
  CHECK(lines == 3);
  for (const char* f : {"fig4_pulse_reference.csv", "fig4_pulse_slow.csv", "fig4_pulse_fast.csv"}) {
    const Table t = parse_csv(read_file(fs::path(cfg.out_dir) / f));
    CHECK(t.columns == std::vector<std::string>{"time_s", "re_envelope", "im_envelope", "intensity"});
  }
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("identical configs write identical bytes") {
  ScenarioConfig cfg;
  cfg.scan_grid = {-0.5, 0.5, 41};
  cfg.svg = true;
  cfg.out_dir = fresh_dir("repro_a").string();
  run_scan(cfg);
  const std::string a_csv = read_file(fs::path(cfg.out_dir) / "scan_spectrum.csv");
  const std::string a_svg = read_file(fs::path(cfg.out_dir) / "scan_spectrum.svg");
  const auto first = cfg.out_dir;
  cfg.out_dir = fresh_dir("repro_b").string();
  cfg.threads = 3;
  run_scan(cfg);
  CHECK(read_file(fs::path(cfg.out_dir) / "scan_spectrum.csv") == a_csv);
  CHECK(read_file(fs::path(cfg.out_dir) / "scan_spectrum.svg") == a_svg);
  fs::remove_all(first);
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("unknown scenario") {
  ScenarioConfig cfg;
  cfg.scenario = "fig7";
  CHECK_THROWS_WITH_AS(run_scenario(cfg), doctest::Contains("available: fig2a"), InvalidArgument);
}

TEST_CASE("sweep subcommand building block") {
  ScenarioConfig cfg;
  cfg.sweep_rates = {0.0, 0.5, 6};
  cfg.csv = false;
  const RunReport rep = run_sweep(cfg);
  CHECK(rep.value("sweep.sign_changes") == 1.0);
  CHECK(rep.value("sweep.monotone_decreasing") == 1.0);
  CHECK(rep.value("sweep.bound_marker_Gamma3") == 0.5);
  CHECK(rep.files.empty());
}

TEST_CASE("command line") {
  const auto dir = fresh_dir("cli");
  fs::create_directories(dir);
  const auto conf = dir / "small.conf";
  write_file_atomic(conf, "[scan]\nscan_min_gamma3 = -0.3\nscan_max_gamma3 = 0.3\nscan_points = 7\n");

  const Shell ok = run_cli("scan --config " + conf.string() + " --out " + dir.string());
  CHECK(ok.status == 0);
  CHECK(ok.out.find("\"status\"") != std::string::npos);
  CHECK(fs::exists(dir / "scan_spectrum.csv"));
  CHECK(parse_csv(read_file(dir / "scan_spectrum.csv")).rows.size() == 7);

  const Shell bad = run_cli("scenario fig99");
  CHECK(bad.status != 0);
  CHECK(bad.out.find("\"error\"") != std::string::npos);
  CHECK(bad.out.find("fig2a") != std::string::npos);

  write_file_atomic(dir / "broken.conf", "omega_c_gamma3 = 30\nomega_c = 2\n");
  const Shell unit = run_cli("scan --config " + (dir / "broken.conf").string() + " --out " + dir.string());
  CHECK(unit.status == 1);
  CHECK(unit.out.find("\"line\":2") != std::string::npos);

  const Shell usage = run_cli("--threads 0 scan");
  CHECK(usage.status == 2);
  fs::remove_all(dir);
}
