#include <filesystem>
#include <random>

#include "doctest.h"
#include "slowlight/config.hpp"
#include "slowlight/csv.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/scenarios.hpp"
#include "slowlight/svg.hpp"

using namespace slowlight;

namespace {

std::string join(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

PlotSpec labelled(std::string title, std::string x, std::string y) {
  PlotSpec s;
  s.title = std::move(title);
  s.x_label = std::move(x);
  s.y_label = std::move(y);
  return s;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("empty config gives the documented defaults") {
  const ScenarioConfig c = parse_config("");
  const ScenarioConfig d;
  CHECK(c.drive.omega_c == 30.0);
  CHECK(c.drive.delta == 0.2);
  CHECK(c.drive.omega_p == 0.01);
  CHECK(c.drive.delta_c == 70.0);
  CHECK(c.drive.two_photon_detuning() == 0.0);
  CHECK(c.pump.rate == 0.0);
  CHECK(c.density_m3 == 5e17);
  CHECK(c.length_m == 1e-3);
  CHECK(c.system.omega43 == 140.0);
  CHECK(c.system.signs == DipoleSigns{1, -1, 1, 1});
  CHECK(join(describe(c)) == join(describe(d)));
}

TEST_CASE("keys carry their units") {
  CHECK(parse_config("omega_c_gamma3 = 30").drive.omega_c == 30.0);
  CHECK(parse_config("[drive]\nomega_c_gamma3 = 55 # strong\n").drive.omega_c == 55.0);
  CHECK(parse_config("density_per_cm3 = 2e11").density_m3 == doctest::Approx(2e17));
  CHECK(parse_config("length_mm = 3").length_m == doctest::Approx(3e-3));
  CHECK(parse_config("sigma_us = 2").pulse.sigma_s == doctest::Approx(2e-6));
  CHECK_THROWS_AS(parse_config("omega_c = 30"), UnitError);
  CHECK_THROWS_AS(parse_config("length = 1"), UnitError);
  CHECK_THROWS_AS(parse_config("density_per_km3 = 1"), UnitError);
}

TEST_CASE("parse errors carry the line number") {
  auto line_of = [](const char* text) {
    try {
      parse_config(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("# header\n\nbogus_key = 1\n") == 3);
  CHECK(line_of("omega_c_gamma3 = thirty") == 1);
  CHECK(line_of("\n[nonsense]") == 2);
  CHECK(line_of("[pump]\nomega_c_gamma3 = 1") == 2);
  CHECK(line_of("omega_c_gamma3 30") == 1);
  CHECK(line_of("omega_c_gamma3 =") == 1);
  CHECK(line_of("[drive") == 1);
  CHECK(line_of("dipole_signs = +,+,+") == 1);
  CHECK(line_of("rule = simpson") == 1);
}

TEST_CASE("describe parses back to the same configuration") {
  ScenarioConfig c;
  c.drive.omega_c = 17.25;
  c.drive.delta_p = c.drive.delta_c - 0.125;
  c.pump.mode = PumpMode::FiveLevelField;
  c.pump.field.omega_op = 0.3;
  c.pump.form = PumpForm::Lindblad;
  c.system.signs = {-1, 1, 1, 1};
  c.doppler_enabled = true;
  c.doppler.rule = QuadratureRule::AdaptiveKronrod;
  c.doppler.temperature_K = 300.5;
  c.truncation.max_order = 77;
  c.svg = true;
  c.threads = 3;
  c.out_dir = "/tmp/x y";
  const auto once = describe(c);
  const auto twice = describe(parse_config(join(once)));
  CHECK(join(once) == join(twice));
  for (const auto& name : preset_names()) {
    const auto p = describe(preset(name));
    CHECK(join(describe(parse_config(join(p)))) == join(p));
  }
}

TEST_CASE("presets echo the figure parameters") {
  const auto a = preset("fig2a");
  CHECK(a.drive.omega_c == 20.0);
  CHECK(a.drive.delta == 0.1);
  CHECK(a.pump.rate == 0.0);
  const auto c = preset("fig2c");
  CHECK(c.drive.omega_c == 30.0);
  CHECK(c.drive.delta == 0.2);
  CHECK(preset("fig3a").pump.rate == 0.06);
  CHECK(preset("fig3c").pump.rate == 0.4);
  CHECK(preset("fig4").density_m3 == 5e17);
  CHECK(preset("fig4").length_m == 1e-3);
  CHECK(preset("fig6").doppler.temperature_K == 320.0);
  CHECK(preset("fig6").sweep_rates.hi == 0.5);
  CHECK(preset_names().size() == 7);
  try {
    preset("fig9");
    FAIL("unknown preset accepted");
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    for (const auto& n : preset_names()) CHECK(msg.find(n) != std::string::npos);
  }
}

TEST_CASE("CSV round trip is exact") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  Table t{{"a", "b", "c"}, {}};
  for (int i = 0; i < 50; ++i) t.rows.push_back({u(rng), u(rng) * 1e-300, std::nextafter(1.0, 2.0)});
  t.rows.push_back({0.1, -0.0, 5e-324});
  const Table back = parse_csv(to_csv(t));
  CHECK(back.columns == t.columns);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(back.rows[i][j] == t.rows[i][j]);
  CHECK(to_csv(back) == to_csv(t));
  CHECK(t.column_values("b").size() == t.rows.size());
  CHECK_THROWS(t.column("zzz"));
  try {
    parse_csv("a,b\n1,2\n3\n");
    FAIL("ragged CSV accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_csv("a\nx\n"), ParseError);
}

TEST_CASE("spectrum table layout") {
  SusceptibilitySpectrum s;
  s.detuning = {-0.5, 0.5};
  s.chi = {{1.0, 2.0}, {3.0, 4.0}};
  const Table t = spectrum_table(s);
  CHECK(t.columns.at(0) == "two_photon_detuning_Gamma3");
  CHECK(t.column_values("re_chi_scaled") == std::vector<double>{1.0, 3.0});
  CHECK(t.column_values("im_chi_scaled") == std::vector<double>{2.0, 4.0});
}

TEST_CASE("atomic file write") {
  const auto dir = std::filesystem::temp_directory_path() / "slowlight_io_test";
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "f.txt", "hello\n");
  write_file_atomic(dir / "f.txt", "again\n");
  CHECK(read_file(dir / "f.txt") == "again\n");
  CHECK(std::distance(std::filesystem::directory_iterator(dir), {}) == 1);
  std::filesystem::remove_all(dir);
  CHECK_THROWS(read_file(dir / "missing"));
}

TEST_CASE("SVG rendering") {
  const Series two{"line", {0.0, 1.0}, {0.0, 2.0}};
  const std::string svg = render_svg({two}, labelled("t", "x", "y"));
  CHECK(count(svg, "<polyline") == 1);
  const auto at = svg.find("points=\"");
  const auto end = svg.find('"', at + 8);
  const std::string pts = svg.substr(at + 8, end - at - 8);
  CHECK(count(pts, ",") == 2);
  CHECK(svg.starts_with("<svg") == true);
  CHECK(svg == render_svg({two}, labelled("t", "x", "y")));

  const Series a{"slow", {0, 1, 2}, {0, 1, 0}}, b{"fast", {0, 1, 2}, {1, 0, 1}}, c{"reference", {0, 1, 2}, {0.5, 0.5, 0.5}};
  PlotSpec spec = labelled("pulses", "time (us)", "intensity");
  spec.markers.push_back({1.5, "bound"});
  const std::string three = render_svg({a, b, c}, spec);
  CHECK(count(three, "<polyline") == 3);
  for (const char* label : {"slow", "fast", "reference", "bound"}) CHECK(three.find(label) != std::string::npos);

  CHECK_THROWS_AS(render_svg({}, spec), InvalidArgument);
  CHECK_THROWS_AS(render_svg({Series{"x", {0, 1}, {1}}}, spec), InvalidArgument);
  CHECK_THROWS_AS(render_svg({Series{"x", {}, {}}}, spec), InvalidArgument);

  const auto ticks = nice_ticks(0.0, 1.0);
  CHECK(ticks.front() >= 0.0);
  CHECK(ticks.back() <= 1.0);
  CHECK(ticks.size() >= 3);
}
