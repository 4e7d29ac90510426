#include "subrad/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "scenario_json.hpp"
#include "subrad/errors.hpp"

namespace subrad {

using detail::json;

namespace {

constexpr const char* kSweepSchema = "subrad.sweep/1";
constexpr const char* kParameters[] = {"momentum_over_k0", "center_site", "psi_minus_phase_rad",
                                       "zeeman_slope_gamma0"};

const char* merit_name(FigureOfMerit m) {
  return m == FigureOfMerit::fitted_rate ? "fitted_rate" : "p_total_at_horizon";
}

template <class F>
void parallel_for(std::size_t count, int workers, F&& body) {
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next++; i < count; i = next++) body(i);
  };
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || count < 2) {
    drain();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(threads, count); ++w) pool.emplace_back(drain);
}

std::vector<std::vector<double>> grid_points(const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<double>> points{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : points) {
      for (const double v : axis.values()) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }
  return points;
}

struct PropagatorKey {
  ModelParams model;
  std::vector<Breakpoint> knots;
  bool operator==(const PropagatorKey&) const = default;
};

}  // namespace

std::vector<double> SweepAxis::values() const {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) || step == 0.0) {
    throw ConfigError(fmt::format("axes.{}: start, stop and a non-zero step must be finite", parameter));
  }
  const double span = (stop - start) / step;
  if (span < -1e-6) throw ConfigError(fmt::format("axes.{}: step points away from stop", parameter));
  const auto n = static_cast<long>(std::floor(span + 1e-6)) + 1;
  if (n > 1000000) throw ConfigError(fmt::format("axes.{}: {} values is too many", parameter, n));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

void SweepSpec::validate() const {
  if (name.empty()) throw ConfigError("name: must not be empty");
  if (axes.empty()) throw ConfigError("axes: need at least one axis");
  for (const auto& axis : axes) {
    if (std::find(std::begin(kParameters), std::end(kParameters), axis.parameter) == std::end(kParameters)) {
      throw ConfigError(fmt::format("axes.parameter: unknown parameter '{}'", axis.parameter));
    }
    if (axis.parameter == "psi_minus_phase_rad" && base.initial.band) {
      throw ConfigError("axes.parameter: psi_minus_phase_rad needs explicit psi, not a band");
    }
    (void)axis.values();
  }
  if (!(horizon > t_first) || !std::isfinite(horizon)) {
    throw ConfigError(fmt::format("horizon_inv_gamma0: must exceed t_first ({}), got {}", t_first, horizon));
  }
  if (!(t_first > 0.0)) throw ConfigError("t_first_inv_gamma0: must be positive");
  if (per_decade < 1) throw ConfigError("per_decade: must be >= 1");
}

ScenarioConfig SweepSpec::point(std::span<const double> coordinates) const {
  if (coordinates.size() != axes.size()) {
    throw ConfigError(fmt::format("sweep point has {} coordinates for {} axes", coordinates.size(), axes.size()));
  }
  ScenarioConfig c = base;
  c.sampling.spacing = SamplingSpec::Spacing::log;
  c.sampling.t_start = 0.0;
  c.sampling.t_first = t_first;
  c.sampling.t_end = horizon;
  c.sampling.per_decade = per_decade;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string& p = axes[i].parameter;
    const double v = coordinates[i];
    if (p == "momentum_over_k0") {
      c.initial.gaussian.momentum_over_k0 = v;
    } else if (p == "center_site") {
      c.initial.gaussian.center_site = v;
    } else if (p == "psi_minus_phase_rad") {
      c.initial.gaussian.psi_minus = std::polar(std::abs(base.initial.gaussian.psi_minus), v);
    } else if (p == "zeeman_slope_gamma0") {
      c.model.zeeman_slope = v;
    }
  }
  c.name = fmt::format("{}[{}]", name, fmt::join(coordinates, ","));
  return c;
}

SweepSpec parse_sweep(std::string_view json_text) {
  json doc = detail::parse_text(json_text);
  detail::Reader r(doc, "");
  SweepSpec s;
  s.name = r.string("name", s.name);
  s.horizon = r.number("horizon_inv_gamma0", s.horizon);
  s.t_first = r.number("t_first_inv_gamma0", s.t_first);
  s.per_decade = static_cast<int>(r.integer("per_decade", s.per_decade));
  const std::string merit = r.string("figure_of_merit", "fitted_rate");
  if (merit == "fitted_rate") {
    s.merit = FigureOfMerit::fitted_rate;
  } else if (merit == "p_total_at_horizon") {
    s.merit = FigureOfMerit::p_total_at_horizon;
  } else {
    throw ConfigError(fmt::format("figure_of_merit: expected fitted_rate or p_total_at_horizon, got '{}'", merit));
  }
  s.output_dir = r.string("output_dir", "");

  const json& axes = r.raw("axes");
  if (!axes.is_array()) throw ConfigError("axes: expected a list");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    detail::Reader a(axes[i], fmt::format("axes[{}]", i));
    s.axes.push_back({a.string("parameter"), a.number("start"), a.number("stop"), a.number("step")});
    a.finish();
  }

  json base = r.raw("base");
  if (!base.is_object()) throw ConfigError("base: expected an object");
  if (base.contains("sampling")) throw ConfigError("base.sampling: set by the sweep horizon");
  base["sampling"] = {{"spacing", "log"},
                      {"t_start_inv_gamma0", 0.0},
                      {"t_first_inv_gamma0", s.t_first},
                      {"t_end_inv_gamma0", s.horizon},
                      {"per_decade", s.per_decade}};
  if (!base.contains("name")) base["name"] = s.name;
  detail::Reader b(base, "base");
  s.base = detail::read_scenario(b);
  r.finish();
  s.validate();
  return s;
}

SweepSpec load_sweep(const std::filesystem::path& path) { return parse_sweep(detail::read_file(path)); }

SweepResult run_sweep(const SweepSpec& spec, int workers) {
  spec.validate();
  const auto points = grid_points(spec.axes);
  SweepResult result;
  result.rows.resize(points.size());

  std::vector<ScenarioConfig> configs(points.size());
  std::vector<PropagatorKey> keys;
  std::vector<std::size_t> key_of(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    result.rows[i].coordinates = points[i];
    try {
      configs[i] = spec.point(points[i]);
      configs[i].validate();
    } catch (const std::exception& e) {
      result.rows[i].error = e.what();
      continue;
    }
    const PropagatorKey key{configs[i].model, configs[i].zero_point};
    auto it = std::find(keys.begin(), keys.end(), key);
    key_of[i] = static_cast<std::size_t>(it - keys.begin());
    if (it == keys.end()) keys.push_back(key);
  }

  std::vector<std::shared_ptr<const Propagator>> propagators(keys.size());
  std::vector<std::string> build_errors(keys.size());
  parallel_for(keys.size(), workers, [&](std::size_t k) {
    try {
      propagators[k] = std::make_shared<const Propagator>(
          keys[k].model, FieldSchedule(keys[k].model.zeeman_slope, keys[k].knots), spec.base.propagator);
    } catch (const std::exception& e) {
      build_errors[k] = e.what();
    }
  });

  parallel_for(points.size(), workers, [&](std::size_t i) {
    SweepRow& row = result.rows[i];
    if (!row.error.empty()) return;
    const std::size_t k = key_of[i];
    if (!propagators[k]) {
      row.error = build_errors[k];
      return;
    }
    try {
      const ScenarioConfig& c = configs[i];
      const auto times = c.sampling.times();
      const auto states = propagators[k]->sample(c.initial_state(), times);
      std::vector<double> p_total;
      p_total.reserve(states.size());
      for (const auto& s : states) p_total.push_back(populations(s).total);

      auto [begin, end] = c.analyses.fit_window.value_or(std::pair{spec.t_first, spec.horizon});
      for (std::size_t j = 0; j < times.size(); ++j) {
        if (times[j] >= begin && times[j] <= end && !(p_total[j] > 0.0)) {
          end = j > 0 ? times[j - 1] : begin;
          break;
        }
      }
      const DecayFit fit = decay_fit(times, p_total, begin, end);
      row.fitted_rate = fit.rate;
      row.fit_residual = fit.residual;
      row.fit_window_end = end;
      row.p_total_at_horizon = p_total.back();
      row.below_floor = std::abs(fit.rate) < c.analyses.rate_floor;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });

  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    if (!row.error.empty()) continue;
    if (!result.best) {
      result.best = i;
      continue;
    }
    const SweepRow& best = result.rows[*result.best];
    const bool better = spec.merit == FigureOfMerit::fitted_rate
                            ? row.fitted_rate < best.fitted_rate
                            : row.p_total_at_horizon > best.p_total_at_horizon;
    if (better) result.best = i;
  }
  return result;
}

void write_sweep(const SweepSpec& spec, const SweepResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream csv;
  for (const auto& axis : spec.axes) csv << axis.parameter << ',';
  csv << "fitted_rate,fit_residual,fit_window_end,p_total_at_horizon,below_floor,error\n";
  for (const auto& row : result.rows) {
    for (const double c : row.coordinates) csv << fmt::format("{},", c);
    std::string error = row.error;
    std::replace(error.begin(), error.end(), '"', '\'');
    csv << fmt::format("{},{},{},{},{},{}\n", row.fitted_rate, row.fit_residual, row.fit_window_end,
                       row.p_total_at_horizon, row.below_floor ? 1 : 0,
                       error.empty() ? std::string() : fmt::format("\"{}\"", error));
  }
  detail::write_text(dir / "sweep.csv", csv.str());

  json m;
  m["schema"] = kSweepSchema;
  m["name"] = spec.name;
  m["base"] = detail::scenario_json(spec.base);
  json axes = json::array();
  for (const auto& a : spec.axes) {
    axes.push_back({{"parameter", a.parameter}, {"start", a.start}, {"stop", a.stop}, {"step", a.step}});
  }
  m["axes"] = axes;
  m["horizon_inv_gamma0"] = spec.horizon;
  m["t_first_inv_gamma0"] = spec.t_first;
  m["per_decade"] = spec.per_decade;
  m["figure_of_merit"] = merit_name(spec.merit);
  m["tolerances"] = {{"dt_max_inv_gamma0", spec.base.propagator.step.dt_max},
                     {"max_condition", spec.base.propagator.max_condition},
                     {"sum_cutoff", spec.base.model.sum_cutoff},
                     {"rate_floor_gamma0", spec.base.analyses.rate_floor}};
  std::size_t failed = 0;
  std::vector<std::string> errors;
  for (const auto& row : result.rows) {
    if (!row.error.empty()) {
      ++failed;
      errors.push_back(fmt::format("[{}]: {}", fmt::join(row.coordinates, ","), row.error));
    }
  }
  json summary = {{"points", result.rows.size()}, {"failed", failed}};
  if (result.best) {
    const SweepRow& best = result.rows[*result.best];
    summary["best"] = {{"coordinates", best.coordinates},
                       {"fitted_rate", best.fitted_rate},
                       {"p_total_at_horizon", best.p_total_at_horizon},
                       {"below_floor", best.below_floor}};
  } else {
    summary["best"] = nullptr;
  }
  m["summary"] = summary;
  m["errors"] = errors;
  m["files"] = {"sweep.csv"};
  detail::write_text(dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace subrad
