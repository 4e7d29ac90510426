// subrad: command-line front end for band structures, wavepacket evolution,
// band projection and initial-state sweeps.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "subrad/errors.hpp"
#include "subrad/scenario.hpp"
#include "subrad/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct Overrides {
  std::string config;
  std::string out;
  int workers = 1;
  std::optional<double> dt_max;
  std::optional<long> sum_cutoff;
};

std::filesystem::path output_dir(const Overrides& o, const std::string& from_config) {
  if (!o.out.empty()) return o.out;
  if (!from_config.empty()) return from_config;
  throw subrad::ConfigError("output_dir: not set in the config and no --out given");
}

void apply(const Overrides& o, subrad::ModelParams& model) {
  if (o.sum_cutoff) model.sum_cutoff = *o.sum_cutoff;
  model.validate();
}

void apply(const Overrides& o, subrad::ScenarioConfig& config) {
  apply(o, config.model);
  if (o.dt_max) {
    config.propagator.step.dt_max = *o.dt_max;
    config.propagator.step.dt_min = std::min(config.propagator.step.dt_min, *o.dt_max);
  }
  config.validate();
}

int run_bands(const Overrides& o) {
  auto config = subrad::load_bands(o.config);
  apply(o, config.model);
  const auto dir = output_dir(o, config.output_dir);
  const auto results = subrad::run_bands(config);
  for (const auto& file : subrad::write_bands(config, results, dir)) {
    fmt::print("wrote {}\n", (dir / file).string());
  }
  return kOk;
}

int run_evolve(const Overrides& o, bool projection) {
  auto config = subrad::load_scenario(o.config);
  apply(o, config);
  if (projection) config.analyses.spectrum = true;
  const auto dir = output_dir(o, config.output_dir);
  const auto result = subrad::run_scenario(config, dir);
  for (const auto& w : result.warnings) fmt::print(stderr, "warning: {}\n", w);
  const auto& last = result.observables.back();
  fmt::print("{}: {} samples to t={}, P_t={:.6g}", config.name, result.observables.size(), last.t,
             last.p_total);
  if (result.fit) fmt::print(", fitted rate {:.6g}", result.fit->rate);
  fmt::print("\nwrote {}\n", dir.string());
  return kOk;
}

int run_sweep(const Overrides& o) {
  auto spec = subrad::load_sweep(o.config);
  apply(o, spec.base);
  const auto dir = output_dir(o, spec.output_dir);
  const auto result = subrad::run_sweep(spec, o.workers);
  subrad::write_sweep(spec, result, dir);
  std::size_t failed = 0;
  for (const auto& row : result.rows) failed += row.error.empty() ? 0 : 1;
  fmt::print("{}: {} points, {} failed\n", spec.name, result.rows.size(), failed);
  if (result.best) {
    const auto& best = result.rows[*result.best];
    fmt::print("best at [{}]: fitted rate {:.6g}{}\n", fmt::join(best.coordinates, ", "),
               best.fitted_rate, best.below_floor ? " (below reporting floor)" : "");
  }
  fmt::print("wrote {}\n", dir.string());
  return !result.rows.empty() && failed == result.rows.size() ? kNumericalError : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-excitation dynamics in V-type atomic chains"};
  app.require_subcommand(1);
  Overrides o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory (overrides output_dir)");
    sub->add_option("--sum-cutoff", o.sum_cutoff, "Lattice-sum truncation M")->check(CLI::PositiveNumber);
  };
  auto* bands = app.add_subcommand("bands", "Band structure for each constant field");
  common(bands);
  auto* evolve = app.add_subcommand("evolve", "Propagate a wavepacket and write observables");
  common(evolve);
  evolve->add_option("--dt-max", o.dt_max, "Largest RK4 step, 1/gamma0")->check(CLI::PositiveNumber);
  auto* project = app.add_subcommand("project", "Evolve and write the band-projected spectrum");
  common(project);
  project->add_option("--dt-max", o.dt_max, "Largest RK4 step, 1/gamma0")->check(CLI::PositiveNumber);
  auto* sweep = app.add_subcommand("sweep", "Scan initial conditions for the longest lifetime");
  common(sweep);
  sweep->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--dt-max", o.dt_max, "Largest RK4 step, 1/gamma0")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (bands->parsed()) return run_bands(o);
    if (evolve->parsed()) return run_evolve(o, false);
    if (project->parsed()) return run_evolve(o, true);
    return run_sweep(o);
  } catch (const subrad::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const subrad::NumericalError& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return kNumericalError;
  } catch (const subrad::DomainError& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return kNumericalError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
