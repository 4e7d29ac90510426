#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subrad/analysis.hpp"
#include "subrad/bands.hpp"
#include "subrad/field.hpp"
#include "subrad/model.hpp"
#include "subrad/propagation.hpp"
#include "subrad/state.hpp"

namespace subrad {

/// Initial Gaussian. When `band` is set, psi_+- are replaced by `amplitude`
/// times the Bloch eigenvector of that band at k_c, evaluated in the local
/// uniform field at n_c.
struct InitialSpec {
  GaussianSpec gaussian;
  std::optional<Band> band;
  double amplitude = 0.0;

  bool operator==(const InitialSpec&) const = default;
};

struct SamplingSpec {
  enum class Spacing { linear, log };
  Spacing spacing = Spacing::linear;
  double t_start = 0.0;
  double t_end = 0.0;
  int count = 2;            ///< linear: samples including both ends
  double t_first = 1.0;     ///< log: first positive sample
  int per_decade = 4;       ///< log: samples per decade

  /// Sample times, strictly increasing. Log spacing prepends t_start.
  [[nodiscard]] std::vector<double> times() const;
  void validate() const;

  /// Compares only the fields the spacing uses.
  bool operator==(const SamplingSpec& other) const;
};

struct AnalysisSpec {
  bool spectrum = false;    ///< write the band-projection heatmap (spectrum.csv)
  bool amplitudes = false;  ///< write raw amplitudes (amplitudes.csv)
  std::optional<std::pair<double, double>> fit_window;  ///< defaults to the whole run
  PlateauOptions plateau;
  double turning_prominence = 0.2;  ///< k0
  double peak_half_window = 0.5;    ///< k0
  double rate_floor = 1e-11;        ///< gamma0; fitted rates below are reported as floor-bounded

  bool operator==(const AnalysisSpec&) const = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  ModelParams model;
  std::vector<Breakpoint> zero_point{{0.0, 0.0}};
  InitialSpec initial;
  SamplingSpec sampling;
  PropagatorOptions propagator;
  AnalysisSpec analyses;
  std::string output_dir;

  [[nodiscard]] FieldSchedule schedule() const;
  [[nodiscard]] WavepacketState initial_state() const;
  /// Resolved (psi_+, psi_-) after band selection.
  [[nodiscard]] GaussianSpec resolved_gaussian() const;
  void validate() const;
};

bool operator==(const PropagatorOptions& a, const PropagatorOptions& b);
bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

/// Parses the JSON scenario format. Unknown keys and out-of-range values
/// throw ConfigError naming the offending field.
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string to_json(const ScenarioConfig& config);

struct ScenarioResult {
  ScenarioConfig config;
  std::vector<WavepacketState> states;
  std::vector<Observables> observables;
  std::vector<double> reversals;
  std::optional<DecayFit> fit;
  std::vector<Plateau> plateaus;
  std::vector<double> peak_track;  ///< peak-local spectral centroid per sample, k0
  std::vector<TurningPoint> turning_points;
  std::vector<double> local_field;  ///< (n_bar - n0(t)) b0 per sample
  std::vector<BandProjection> projections;  ///< only with analyses.spectrum
  std::vector<std::string> warnings;
};

/// Runs the propagation and every analysis. Pure: no files touched.
ScenarioResult simulate(const ScenarioConfig& config);

/// Writes manifest.json and observables.csv (plus spectrum.csv and
/// amplitudes.csv when requested) into `dir`, creating it if needed.
void write_bundle(const ScenarioResult& result, const std::filesystem::path& dir);

ScenarioResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& dir);

/// Band-structure job: one scan per constant field.
struct BandsConfig {
  std::string name = "bands";
  ModelParams model;
  std::vector<double> constant_fields{0.0};
  int k_points = 1001;
  Labeling labeling = Labeling::continuity;
  std::string output_dir;

  void validate() const;
};

BandsConfig parse_bands(std::string_view json_text);
BandsConfig load_bands(const std::filesystem::path& path);

struct BandsResult {
  double constant_field = 0.0;
  std::vector<BandPair> scan;
};

std::vector<BandsResult> run_bands(const BandsConfig& config);

/// bands_bc<value>.csv per field plus manifest.json. Returns the CSV names.
std::vector<std::string> write_bands(const BandsConfig& config,
                                     const std::vector<BandsResult>& results,
                                     const std::filesystem::path& dir);

/// File name used for one constant field, e.g. "bands_bc4.csv".
std::string bands_file_name(double constant_field);

}  // namespace subrad
