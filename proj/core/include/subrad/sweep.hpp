#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subrad/scenario.hpp"

namespace subrad {

/// One swept parameter. Recognised names: momentum_over_k0, center_site,
/// psi_minus_phase_rad, zeeman_slope_gamma0.
struct SweepAxis {
  std::string parameter;
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  /// start, start + step, ... up to stop (inclusive within step/1e6).
  [[nodiscard]] std::vector<double> values() const;
};

enum class FigureOfMerit { fitted_rate, p_total_at_horizon };

struct SweepSpec {
  std::string name = "sweep";
  ScenarioConfig base;
  std::vector<SweepAxis> axes;
  double horizon = 1e12;    ///< 1/gamma0
  double t_first = 1.0;     ///< first log-spaced sample
  int per_decade = 4;
  FigureOfMerit merit = FigureOfMerit::fitted_rate;
  std::string output_dir;

  void validate() const;
  /// Scenario for one grid point (axis values in axis order).
  [[nodiscard]] ScenarioConfig point(std::span<const double> coordinates) const;
};

struct SweepRow {
  std::vector<double> coordinates;
  double fitted_rate = 0.0;
  double fit_residual = 0.0;
  double fit_window_end = 0.0;  ///< shortened when P_t underflows
  double p_total_at_horizon = 0.0;
  bool below_floor = false;
  std::string error;            ///< empty on success
};

struct SweepResult {
  std::vector<SweepRow> rows;   ///< grid order, independent of worker count
  std::optional<std::size_t> best;
};

SweepSpec parse_sweep(std::string_view json_text);
SweepSpec load_sweep(const std::filesystem::path& path);

/// Evaluates every grid point with `workers` threads. Points sharing a model
/// and field share one immutable Propagator. Failures are recorded per row.
SweepResult run_sweep(const SweepSpec& spec, int workers = 1);

/// sweep.csv and manifest.json.
void write_sweep(const SweepSpec& spec, const SweepResult& result,
                 const std::filesystem::path& dir);

}  // namespace subrad
