// scamp: command-line front end for the cat-state comparison amplifier.
//
//   scamp run      [--config F] [overrides]          one key=value record
//   scamp sweep    --figure ID [--grid A:B:S] [--out F]
//   scamp wigner   [overrides] [--grid Q:Q:S] [--out PREFIX]
//   scamp validate [--out report.json]
//
// Exit status: 0 success, 1 engine or runtime error, 2 usage or config error.

#include "scamp/audit.hpp"
#include "scamp/errors.hpp"
#include "scamp/pipeline.hpp"
#include "scamp/sweep.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using scamp::pipeline::PipelineConfig;

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;

struct Overrides {
  std::string config_path;
  std::optional<std::string> engine, alpha, parity, squeezing, t2, eta1, eta2;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "flat key = value config file");
  cmd->add_option("--engine", o.engine, "chi | fock | both");
  cmd->add_option("--alpha", o.alpha, "input cat amplitude");
  cmd->add_option("--parity", o.parity, "even | odd");
  cmd->add_option("--squeezing", o.squeezing, "auto | VALUE");
  cmd->add_option("--t2", o.t2, "stage-2 transmissivity");
  cmd->add_option("--eta1", o.eta1, "stage-1 detector efficiency");
  cmd->add_option("--eta2", o.eta2, "stage-2 detector efficiency");
}

// Defaults, then the config file, then command-line flags.
PipelineConfig resolve(const Overrides& o, std::vector<std::string>* keys = nullptr) {
  PipelineConfig cfg;
  if (!o.config_path.empty()) cfg = scamp::sweep::load_config(o.config_path, cfg, keys);
  const std::pair<const char*, const std::optional<std::string>*> flags[] = {
      {"engine", &o.engine}, {"alpha", &o.alpha}, {"parity", &o.parity},
      {"squeezing", &o.squeezing}, {"t2", &o.t2}, {"eta1", &o.eta1}, {"eta2", &o.eta2},
  };
  for (const auto& [key, value] : flags) {
    if (!*value) continue;
    try {
      scamp::sweep::apply_setting(cfg, key, **value);
    } catch (const scamp::ConfigError& e) {
      throw scamp::ConfigError(std::string("--") + e.what());
    }
    if (keys) keys->emplace_back(key);
  }
  return cfg;
}

bool was_set(const std::vector<std::string>& keys, std::initializer_list<const char*> names) {
  return std::any_of(keys.begin(), keys.end(), [&](const std::string& k) {
    return std::find(names.begin(), names.end(), k) != names.end();
  });
}

// Writes to `path`, or to standard output when it is empty.
template <typename Fn>
void emit(const std::string& path, Fn write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw scamp::ConfigError("--out: cannot open " + path);
  write(out);
}

int cmd_run(const Overrides& o, const std::string& out_path) {
  const PipelineConfig cfg = resolve(o);
  cfg.validate();
  const auto result = scamp::pipeline::run(cfg);
  emit(out_path, [&](std::ostream& os) { scamp::sweep::write_record(result, os); });
  return kOk;
}

int cmd_sweep(const Overrides& o, const std::string& figure, const std::string& grid,
              const std::string& out_path, int threads) {
  std::vector<std::string> keys;
  scamp::sweep::SweepSpec spec;
  spec.base = resolve(o, &keys);
  spec.id = scamp::sweep::parse_figure(figure);
  if (!grid.empty()) spec.alpha = scamp::sweep::Grid::parse(grid);
  spec.threads = threads;
  if (was_set(keys, {"t2"})) spec.t2_values = {spec.base.t2};
  if (was_set(keys, {"eta", "eta1", "eta2"})) {
    if (spec.base.eta1 != spec.base.eta2) {
      throw scamp::ConfigError("eta: sweeps use one efficiency for both detectors");
    }
    spec.eta_values = {spec.base.eta1};
  }
  // Per-point fields are swept; validate the rest against a representative point.
  PipelineConfig probe = spec.base;
  probe.t2 = spec.t2_values.front();
  probe.eta1 = probe.eta2 = spec.eta_values.front();
  probe.validate();
  for (const double t2 : spec.t2_values) {
    if (!(t2 > 0.0 && t2 < 1.0)) throw scamp::ConfigError("t2: must lie in (0, 1)");
  }
  for (const double eta : spec.eta_values) {
    if (!(eta > 0.0 && eta <= 1.0)) throw scamp::ConfigError("eta: must lie in (0, 1]");
  }
  emit(out_path, [&](std::ostream& os) { scamp::sweep::write_sweep(spec, os); });
  return kOk;
}

int cmd_wigner(const Overrides& o, const std::string& grid, const std::string& prefix) {
  const PipelineConfig cfg = resolve(o);
  cfg.validate();
  scamp::phase_space::QuadratureGrid q;
  if (!grid.empty()) {
    const auto g = scamp::sweep::Grid::parse(grid);
    q = {g.min, g.max, g.min, g.max, g.step};
  }
  const auto report = scamp::pipeline::wigner_report(cfg, q);
  const std::string base = prefix.empty() ? "wigner" : prefix;
  emit(base + "_output.csv", [&](std::ostream& os) { scamp::sweep::write_wigner_csv(report.output, os); });
  emit(base + "_ideal.csv", [&](std::ostream& os) { scamp::sweep::write_wigner_csv(report.ideal, os); });
  scamp::sweep::write_wigner_summary(report, std::cout);
  return kOk;
}

int cmd_validate(const std::string& out_path) {
  const auto report = scamp::audit::run_all();
  std::cout << report.to_text();
  if (!out_path.empty()) emit(out_path, [&](std::ostream& os) { os << report.to_json() << '\n'; });
  return report.ok() ? kOk : kRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"State comparison amplifier for cat states"};
  app.require_subcommand(1);

  Overrides o;
  std::string figure, grid, out_path;
  int threads = 0;

  auto* run = app.add_subcommand("run", "run the amplifier once and print a record");
  add_overrides(run, o);
  run->add_option("--out", out_path, "write the record here instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "write a figure sweep as CSV");
  add_overrides(sweep, o);
  sweep->add_option("--figure", figure, "3a 3b 4a 4b 5a 5b 6a 6b 9 or a figure name")->required();
  sweep->add_option("--grid", grid, "alpha grid MIN:MAX:STEP");
  sweep->add_option("--out", out_path, "CSV path (default stdout)");
  sweep->add_option("--threads", threads, "worker threads, 0 = all cores");

  auto* wigner = app.add_subcommand("wigner", "export output and ideal Wigner grids");
  add_overrides(wigner, o);
  wigner->add_option("--grid", grid, "quadrature grid MIN:MAX:STEP for q and p");
  wigner->add_option("--out", out_path, "file prefix for the two CSVs");

  auto* validate = app.add_subcommand("validate", "run the invariant and audit suites");
  validate->add_option("--out", out_path, "also write a JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(o, out_path);
    if (*sweep) return cmd_sweep(o, figure, grid, out_path, threads);
    if (*wigner) return cmd_wigner(o, grid, out_path);
    if (*validate) return cmd_validate(out_path);
  } catch (const scamp::ConfigError& e) {
    std::cerr << "scamp: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "scamp: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}
