#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "slowlight/config.hpp"
#include "slowlight/csv.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/kernels.hpp"
#include "slowlight/scenarios.hpp"

using nlohmann::json;
using namespace slowlight;

namespace {

json to_json(const RunReport& r) {
  json j;
  j["status"] = "ok";
  j["scenario"] = r.scenario;
  j["wall_seconds"] = r.wall_seconds;
  j["isa"] = kernels::isa_name(kernels::active_isa());
  json params = json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  j["parameters"] = params;
  j["files"] = r.files;
  json head = json::object();
  for (const auto& [k, v] : r.headline) head[k] = v;
  j["headline"] = head;
  j["warnings"] = r.warnings;
  return j;
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"status", "error"}, {"kind", kind}, {"message", message}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pump-controlled slow and fast light in a far-detuned Raman medium"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, isa;
  bool svg = false;
  unsigned threads = 0;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--svg", svg, "also write SVG plots");
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--isa", isa, "kernel variant: scalar or avx2 (default: best available)")
      ->check(CLI::IsMember({"scalar", "avx2"}));

  auto* scan_cmd = app.add_subcommand("scan", "susceptibility spectrum over two-photon detuning");
  auto* pulse_cmd = app.add_subcommand("pulse", "propagate a Gaussian probe pulse");
  auto* sweep_cmd = app.add_subcommand("sweep", "group index versus pump rate");
  auto* scenario_cmd = app.add_subcommand("scenario", "run a named preset");
  std::string preset_name;
  scenario_cmd->add_option("name", preset_name, "preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cout << error_json("usage", e.what()).dump() << "\n";
    return 2;
  }

  try {
    if (!isa.empty())
      kernels::set_active_isa(isa == "avx2" ? kernels::Isa::Avx2 : kernels::Isa::Scalar);

    ScenarioConfig cfg;
    if (*scenario_cmd) cfg = preset(preset_name);
    if (!config_path.empty()) {
      // File settings override the preset (or the defaults). The file is
      // parsed on its own first so errors report its own line numbers.
      const std::string user = read_file(config_path);
      parse_config(user);
      std::string text;
      for (const auto& [k, v] : describe(cfg)) text += k + " = " + v + "\n";
      cfg = parse_config(text + user);
      if (*scenario_cmd) cfg.scenario = preset_name;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (svg) cfg.svg = true;
    if (threads) cfg.threads = threads;

    RunReport report;
    if (*scan_cmd) report = run_scan(cfg);
    else if (*pulse_cmd) report = run_pulse(cfg);
    else if (*sweep_cmd) report = run_sweep(cfg);
    else report = run_scenario(cfg);
    std::cout << to_json(report).dump(2) << "\n";
    return 0;
  } catch (const ParseError& e) {
    json j = error_json("parse", e.what());
    j["line"] = e.line();
    std::cout << j.dump() << "\n";
  } catch (const ScanError& e) {
    json j = error_json("scan", e.what());
    j["index"] = e.index();
    j["two_photon_detuning_Gamma3"] = e.detuning();
    std::cout << j.dump() << "\n";
  } catch (const std::exception& e) {
    std::cout << error_json("runtime", e.what()).dump() << "\n";
  }
  return 1;
}
