// Command-line front end: run, validate, presets.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "primecoh/config.hpp"
#include "primecoh/experiment.hpp"
#include "primecoh/presets.hpp"
#include "primecoh/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailures = 1;
constexpr int kExitConfigError = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Returns the parsed config, or prints diagnostics and returns nullopt.
std::optional<primecoh::ExperimentConfig> load(const std::string& path) {
  const auto text = read_file(path);
  if (!text) {
    std::cerr << path << ": cannot read file\n";
    return std::nullopt;
  }
  try {
    return primecoh::parse_config(*text, path);
  } catch (const primecoh::ConfigError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << d << '\n';
    return std::nullopt;
  }
}

int cmd_validate(const std::string& path) {
  const auto cfg = load(path);
  if (!cfg) return kExitConfigError;
  std::cout << path << ": ok (" << cfg->runs.size() << " run" << (cfg->runs.size() == 1 ? "" : "s")
            << ")\n";
  return kExitOk;
}

int cmd_run(const std::string& path, const primecoh::SweepOptions& opt) {
  const auto cfg = load(path);
  if (!cfg) return kExitConfigError;
  const auto artifacts = primecoh::run_sweep(*cfg, opt);
  int failures = 0;
  for (const auto& a : artifacts) {
    if (a.ok) {
      std::cout << "ok     " << a.run_id << "  " << a.report_json.string() << '\n';
    } else {
      ++failures;
      std::cout << "FAILED " << a.run_id << "  " << a.error << '\n';
    }
  }
  return failures ? kExitRunFailures : kExitOk;
}

int cmd_presets(const std::string& name, const std::string& out_dir) {
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    for (const auto& p : primecoh::presets()) {
      const auto file = std::filesystem::path(out_dir) / (p.name + ".json");
      std::ofstream(file) << p.config.dump(2) << '\n';
      std::cout << file.string() << '\n';
    }
    return kExitOk;
  }
  if (name.empty()) {
    for (const auto& p : primecoh::presets()) std::cout << p.name << "\t" << p.description << '\n';
    return kExitOk;
  }
  const auto p = primecoh::find_preset(name);
  if (!p) {
    std::cerr << "unknown preset '" << name << "'\n";
    return kExitConfigError;
  }
  std::cout << p->config.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"primecoh " PRIMECOH_VERSION
               ": spectral observables of divergence-kernel operators on the primes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PRIMECOH_VERSION);

  std::string config_path;
  primecoh::SweepOptions sweep;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Execute every run in a config file");
  run->add_option("config", config_path, "Config file (JSON)")->required();
  run->add_option("--out", sweep.out_dir, "Output directory")->capture_default_str();
  run->add_option("--jobs", sweep.jobs, "Runs executed concurrently")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_flag("--emit-kernel", sweep.emit_kernel, "Also write <run>/kernel.csv");
  run->add_option("--seed", seed, "Override the seed of every run");

  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("config", config_path, "Config file (JSON)")->required();

  std::string preset_name;
  std::string preset_out;
  auto* presets = app.add_subcommand("presets", "List, print or export the built-in configs");
  presets->add_option("name", preset_name, "Preset to print");
  presets->add_option("--out", preset_out, "Write every preset as <dir>/<name>.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*run) {
      sweep.seed_override = seed;
      return cmd_run(config_path, sweep);
    }
    if (*validate) return cmd_validate(config_path);
    if (*presets) return cmd_presets(preset_name, preset_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRunFailures;
  }
  return kExitConfigError;
}
