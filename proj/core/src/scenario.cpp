#include "subrad/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "scenario_json.hpp"
#include "subrad/csv.hpp"
#include "subrad/errors.hpp"

namespace subrad {

namespace detail {

namespace {

constexpr const char* kScenarioSchema = "subrad.scenario/1";
constexpr const char* kBandsSchema = "subrad.bands/1";

const char* method_name(Method m) {
  switch (m) {
    case Method::automatic: return "automatic";
    case Method::spectral: return "spectral";
    case Method::stepping: return "stepping";
  }
  return "automatic";
}

Method parse_method(const std::string& text, const std::string& where) {
  if (text == "automatic") return Method::automatic;
  if (text == "spectral") return Method::spectral;
  if (text == "stepping") return Method::stepping;
  throw ConfigError(fmt::format("{}: expected automatic, spectral or stepping, got '{}'", where, text));
}

Band parse_band(const std::string& text, const std::string& where) {
  if (text == "I") return Band::I;
  if (text == "II") return Band::II;
  throw ConfigError(fmt::format("{}: expected I or II, got '{}'", where, text));
}

Labeling parse_labeling(const std::string& text, const std::string& where) {
  if (text == "continuity") return Labeling::continuity;
  if (text == "energy") return Labeling::energy;
  throw ConfigError(fmt::format("{}: expected continuity or energy, got '{}'", where, text));
}

const char* labeling_name(Labeling l) { return l == Labeling::energy ? "energy" : "continuity"; }

int to_int(long long v, const std::string& where) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(fmt::format("{}: out of range", where));
  }
  return static_cast<int>(v);
}

std::vector<Breakpoint> read_knots(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) {
    throw ConfigError(fmt::format("{}: expected a non-empty list of [t, n0] pairs", where));
  }
  std::vector<Breakpoint> knots;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string at = fmt::format("{}[{}]", where, i);
    if (!v[i].is_array() || v[i].size() != 2) throw ConfigError(fmt::format("{}: expected [t, n0]", at));
    knots.push_back({Reader::as_number(v[i][0], at + "[0]"), Reader::as_number(v[i][1], at + "[1]")});
  }
  return knots;
}

json sampling_json(const SamplingSpec& s) {
  json out;
  if (s.spacing == SamplingSpec::Spacing::linear) {
    out["spacing"] = "linear";
    out["t_start_inv_gamma0"] = s.t_start;
    out["t_end_inv_gamma0"] = s.t_end;
    out["count"] = s.count;
  } else {
    out["spacing"] = "log";
    out["t_start_inv_gamma0"] = s.t_start;
    out["t_first_inv_gamma0"] = s.t_first;
    out["t_end_inv_gamma0"] = s.t_end;
    out["per_decade"] = s.per_decade;
  }
  return out;
}

SamplingSpec read_sampling(Reader& r, double bloch_period) {
  SamplingSpec s;
  const std::string spacing = r.string("spacing", "linear");
  if (spacing == "linear") {
    s.spacing = SamplingSpec::Spacing::linear;
  } else if (spacing == "log") {
    s.spacing = SamplingSpec::Spacing::log;
  } else {
    throw ConfigError(fmt::format("{}: expected linear or log, got '{}'", r.field("spacing"), spacing));
  }
  s.t_start = r.number("t_start_inv_gamma0", 0.0);
  const bool in_gamma = r.has("t_end_inv_gamma0");
  const bool in_periods = r.has("t_end_bloch_periods");
  if (in_gamma == in_periods) {
    throw ConfigError(fmt::format("{}: give exactly one of t_end_inv_gamma0 or t_end_bloch_periods",
                                  r.field("t_end_inv_gamma0")));
  }
  s.t_end = in_gamma ? r.number("t_end_inv_gamma0") : r.number("t_end_bloch_periods") * bloch_period;
  if (s.spacing == SamplingSpec::Spacing::linear) {
    s.count = to_int(r.integer("count", 1001), r.field("count"));
  } else {
    s.t_first = r.number("t_first_inv_gamma0", 1.0);
    s.per_decade = to_int(r.integer("per_decade", 4), r.field("per_decade"));
  }
  r.finish();
  return s;
}

PropagatorOptions read_propagator(Reader& r) {
  PropagatorOptions p;
  p.method = parse_method(r.string("method", "automatic"), r.field("method"));
  p.step.dt_max = r.number("dt_max_inv_gamma0", p.step.dt_max);
  p.step.error_control = r.boolean("error_control", p.step.error_control);
  p.step.local_tolerance = r.number("local_tolerance", p.step.local_tolerance);
  p.step.dt_min = r.number("dt_min_inv_gamma0", p.step.dt_min);
  p.step.norm_tolerance = r.number("norm_tolerance", p.step.norm_tolerance);
  p.max_condition = r.number("max_condition", p.max_condition);
  r.finish();
  return p;
}

json propagator_json(const PropagatorOptions& p) {
  json out;
  out["method"] = method_name(p.method);
  out["dt_max_inv_gamma0"] = p.step.dt_max;
  out["error_control"] = p.step.error_control;
  out["local_tolerance"] = p.step.local_tolerance;
  out["dt_min_inv_gamma0"] = p.step.dt_min;
  out["norm_tolerance"] = p.step.norm_tolerance;
  out["max_condition"] = p.max_condition;
  return out;
}

AnalysisSpec read_analyses(Reader& r) {
  AnalysisSpec a;
  a.spectrum = r.boolean("spectrum", a.spectrum);
  a.amplitudes = r.boolean("amplitudes", a.amplitudes);
  if (r.has("fit_window_inv_gamma0")) {
    const std::string where = r.field("fit_window_inv_gamma0");
    const json& w = r.raw("fit_window_inv_gamma0");
    if (!w.is_array() || w.size() != 2) throw ConfigError(fmt::format("{}: expected [begin, end]", where));
    a.fit_window = std::pair{Reader::as_number(w[0], where + "[0]"), Reader::as_number(w[1], where + "[1]")};
  }
  if (r.has("plateau")) {
    Reader p = r.child("plateau");
    a.plateau.relative_slope = p.number("relative_slope", a.plateau.relative_slope);
    a.plateau.min_duration = p.number("min_duration_inv_gamma0", a.plateau.min_duration);
    p.finish();
  }
  a.turning_prominence = r.number("turning_prominence_k0", a.turning_prominence);
  a.peak_half_window = r.number("peak_half_window_k0", a.peak_half_window);
  a.rate_floor = r.number("rate_floor_gamma0", a.rate_floor);
  r.finish();
  return a;
}

json analyses_json(const AnalysisSpec& a) {
  json out;
  out["spectrum"] = a.spectrum;
  out["amplitudes"] = a.amplitudes;
  if (a.fit_window) out["fit_window_inv_gamma0"] = json::array({a.fit_window->first, a.fit_window->second});
  out["plateau"] = {{"relative_slope", a.plateau.relative_slope},
                    {"min_duration_inv_gamma0", a.plateau.min_duration}};
  out["turning_prominence_k0"] = a.turning_prominence;
  out["peak_half_window_k0"] = a.peak_half_window;
  out["rate_floor_gamma0"] = a.rate_floor;
  return out;
}

InitialSpec read_initial(Reader& r) {
  InitialSpec init;
  init.gaussian.center_site = r.number("center_site", 0.0);
  init.gaussian.momentum_over_k0 = r.number("momentum_over_k0");
  init.gaussian.width = r.number("width_sites2", init.gaussian.width);
  if (r.has("band")) {
    if (r.has("psi_plus") || r.has("psi_minus")) {
      throw ConfigError(fmt::format("{}: cannot be combined with psi_plus/psi_minus", r.field("band")));
    }
    init.band = parse_band(r.string("band"), r.field("band"));
    init.amplitude = r.number("amplitude");
  } else {
    init.gaussian.psi_plus = r.complex("psi_plus", 0.0);
    init.gaussian.psi_minus = r.complex("psi_minus", 0.0);
  }
  r.finish();
  return init;
}

json initial_json(const InitialSpec& init) {
  json out;
  out["center_site"] = init.gaussian.center_site;
  out["momentum_over_k0"] = init.gaussian.momentum_over_k0;
  out["width_sites2"] = init.gaussian.width;
  if (init.band) {
    out["band"] = band_name(*init.band);
    out["amplitude"] = init.amplitude;
  } else {
    out["psi_plus"] = complex_to_json(init.gaussian.psi_plus);
    out["psi_minus"] = complex_to_json(init.gaussian.psi_minus);
  }
  return out;
}

}  // namespace

ModelParams read_model(Reader& r, bool constant_field_allowed) {
  ModelParams m;
  m.spacing_over_lambda = r.number("spacing_over_lambda", m.spacing_over_lambda);
  m.atom_count = to_int(r.integer("atom_count", m.atom_count), r.field("atom_count"));
  m.zeeman_slope = r.number("zeeman_slope_gamma0", m.zeeman_slope);
  if (constant_field_allowed) m.constant_field = r.number("constant_field_gamma0", m.constant_field);
  m.sum_cutoff = static_cast<long>(r.integer("sum_cutoff", m.sum_cutoff));
  r.finish();
  m.validate();
  return m;
}

json model_json(const ModelParams& m, bool with_constant_field) {
  json out;
  out["spacing_over_lambda"] = m.spacing_over_lambda;
  out["atom_count"] = m.atom_count;
  out["zeeman_slope_gamma0"] = m.zeeman_slope;
  if (with_constant_field) out["constant_field_gamma0"] = m.constant_field;
  out["sum_cutoff"] = m.sum_cutoff;
  return out;
}

ScenarioConfig read_scenario(Reader& r) {
  ScenarioConfig c;
  c.name = r.string("name", c.name);
  if (r.has("model")) {
    Reader m = r.child("model");
    c.model = read_model(m, false);
  }
  if (r.has("field")) {
    Reader f = r.child("field");
    if (f.has("zero_point")) c.zero_point = read_knots(f.raw("zero_point"), f.field("zero_point"));
    f.finish();
  }
  {
    Reader i = r.child("initial");
    c.initial = read_initial(i);
  }
  {
    Reader s = r.child("sampling");
    c.sampling = read_sampling(s, c.model.bloch_period());
  }
  if (r.has("propagator")) {
    Reader p = r.child("propagator");
    c.propagator = read_propagator(p);
  }
  if (r.has("analyses")) {
    Reader a = r.child("analyses");
    c.analyses = read_analyses(a);
  }
  c.output_dir = r.string("output_dir", "");
  r.finish();
  c.validate();
  return c;
}

json scenario_json(const ScenarioConfig& c) {
  json out;
  out["name"] = c.name;
  out["model"] = model_json(c.model, false);
  json knots = json::array();
  for (const auto& k : c.zero_point) knots.push_back(json::array({k.t, k.zero_point}));
  out["field"] = {{"zero_point", knots}};
  out["initial"] = initial_json(c.initial);
  out["sampling"] = sampling_json(c.sampling);
  out["propagator"] = propagator_json(c.propagator);
  out["analyses"] = analyses_json(c.analyses);
  if (!c.output_dir.empty()) out["output_dir"] = c.output_dir;
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("write failed for {}", path.string()));
}

}  // namespace detail

using detail::json;

// --- configuration ---------------------------------------------------------

std::vector<double> SamplingSpec::times() const {
  validate();
  std::vector<double> out;
  if (spacing == Spacing::linear) {
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      out.push_back(i + 1 == count ? t_end : t_start + (t_end - t_start) * i / (count - 1));
    }
    return out;
  }
  out.push_back(t_start);
  for (int k = 0;; ++k) {
    const double t = t_first * std::pow(10.0, static_cast<double>(k) / per_decade);
    if (t > t_end * (1.0 + 1e-12)) break;
    out.push_back(std::min(t, t_end));
  }
  if (out.back() < t_end * (1.0 - 1e-12)) out.push_back(t_end);
  return out;
}

void SamplingSpec::validate() const {
  if (!std::isfinite(t_start) || t_start < 0.0) {
    throw ConfigError(fmt::format("sampling.t_start_inv_gamma0: must be >= 0, got {}", t_start));
  }
  if (!std::isfinite(t_end) || !(t_end > t_start)) {
    throw ConfigError(fmt::format("sampling.t_end_inv_gamma0: must exceed t_start ({}), got {}", t_start, t_end));
  }
  if (spacing == Spacing::linear) {
    if (count < 2) throw ConfigError(fmt::format("sampling.count: need at least 2 samples, got {}", count));
  } else {
    if (!(t_first > t_start) || !(t_first <= t_end)) {
      throw ConfigError(fmt::format("sampling.t_first_inv_gamma0: must lie in (t_start, t_end], got {}", t_first));
    }
    if (per_decade < 1) throw ConfigError(fmt::format("sampling.per_decade: must be >= 1, got {}", per_decade));
  }
}

bool SamplingSpec::operator==(const SamplingSpec& other) const {
  if (spacing != other.spacing || t_start != other.t_start || t_end != other.t_end) return false;
  if (spacing == Spacing::linear) return count == other.count;
  return t_first == other.t_first && per_decade == other.per_decade;
}

FieldSchedule ScenarioConfig::schedule() const { return {model.zeeman_slope, zero_point}; }

GaussianSpec ScenarioConfig::resolved_gaussian() const {
  GaussianSpec g = initial.gaussian;
  if (initial.band) {
    const double n0 = schedule().zero_point(sampling.t_start);
    const double local = (g.center_site - n0) * model.zeeman_slope;
    std::tie(g.psi_plus, g.psi_minus) =
        band_polarization(LatticeSums(model), g.momentum_over_k0, local, *initial.band, initial.amplitude);
  }
  return g;
}

WavepacketState ScenarioConfig::initial_state() const {
  WavepacketState s = gaussian_initial(resolved_gaussian(), model);
  s.t = sampling.t_start;
  return s;
}

void ScenarioConfig::validate() const {
  if (name.empty()) throw ConfigError("name: must not be empty");
  model.validate();
  if (model.constant_field != 0.0) {
    throw ConfigError("model.constant_field_gamma0: only used by band-structure jobs");
  }
  (void)schedule();
  sampling.validate();
  const auto& g = initial.gaussian;
  if (!std::isfinite(g.center_site)) throw ConfigError("initial.center_site: must be finite");
  if (std::abs(g.momentum_over_k0) > model.zone_edge()) {
    throw ConfigError(fmt::format("initial.momentum_over_k0: {} lies outside the zone [-{}, {}]",
                                  g.momentum_over_k0, model.zone_edge(), model.zone_edge()));
  }
  if (!(g.width > 0.0) || !std::isfinite(g.width)) {
    throw ConfigError(fmt::format("initial.width_sites2: must be positive, got {}", g.width));
  }
  if (initial.band) {
    if (g.psi_plus != 0.0 || g.psi_minus != 0.0) {
      throw ConfigError("initial.band: cannot be combined with psi_plus/psi_minus");
    }
    if (!(initial.amplitude > 0.0) || !std::isfinite(initial.amplitude)) {
      throw ConfigError(fmt::format("initial.amplitude: must be positive, got {}", initial.amplitude));
    }
  } else if (g.psi_plus == 0.0 && g.psi_minus == 0.0) {
    throw ConfigError("initial.psi_plus: psi_plus and psi_minus are both zero");
  }
  const auto& st = propagator.step;
  if (!(st.dt_max > 0.0) || !std::isfinite(st.dt_max)) {
    throw ConfigError(fmt::format("propagator.dt_max_inv_gamma0: must be positive, got {}", st.dt_max));
  }
  if (!(st.local_tolerance > 0.0)) throw ConfigError("propagator.local_tolerance: must be positive");
  if (!(st.dt_min > 0.0) || st.dt_min > st.dt_max) {
    throw ConfigError("propagator.dt_min_inv_gamma0: must be positive and <= dt_max");
  }
  if (!(st.norm_tolerance >= 0.0)) throw ConfigError("propagator.norm_tolerance: must be >= 0");
  if (!(propagator.max_condition >= 1.0)) throw ConfigError("propagator.max_condition: must be >= 1");
  if (propagator.method == Method::spectral &&
      !schedule().constant_on(sampling.t_start, sampling.times().back())) {
    throw ConfigError("propagator.method: spectral needs a zero point that is fixed over the run");
  }
  const auto& a = analyses;
  if (a.fit_window && !(a.fit_window->second > a.fit_window->first)) {
    throw ConfigError("analyses.fit_window_inv_gamma0: end must exceed begin");
  }
  if (!(a.plateau.relative_slope > 0.0)) throw ConfigError("analyses.plateau.relative_slope: must be positive");
  if (!(a.plateau.min_duration >= 0.0)) throw ConfigError("analyses.plateau.min_duration_inv_gamma0: must be >= 0");
  if (!(a.turning_prominence > 0.0)) throw ConfigError("analyses.turning_prominence_k0: must be positive");
  if (!(a.peak_half_window > 0.0)) throw ConfigError("analyses.peak_half_window_k0: must be positive");
  if (!(a.rate_floor >= 0.0)) throw ConfigError("analyses.rate_floor_gamma0: must be >= 0");
}

bool operator==(const PropagatorOptions& a, const PropagatorOptions& b) {
  return a.method == b.method && a.max_condition == b.max_condition &&
         a.step.dt_max == b.step.dt_max && a.step.error_control == b.step.error_control &&
         a.step.local_tolerance == b.step.local_tolerance && a.step.dt_min == b.step.dt_min &&
         a.step.norm_tolerance == b.step.norm_tolerance;
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  return a.name == b.name && a.model == b.model && a.zero_point == b.zero_point &&
         a.initial == b.initial && a.sampling == b.sampling && a.propagator == b.propagator &&
         a.analyses.spectrum == b.analyses.spectrum && a.analyses.amplitudes == b.analyses.amplitudes &&
         a.analyses.fit_window == b.analyses.fit_window &&
         a.analyses.plateau.relative_slope == b.analyses.plateau.relative_slope &&
         a.analyses.plateau.min_duration == b.analyses.plateau.min_duration &&
         a.analyses.turning_prominence == b.analyses.turning_prominence &&
         a.analyses.peak_half_window == b.analyses.peak_half_window &&
         a.analyses.rate_floor == b.analyses.rate_floor && a.output_dir == b.output_dir;
}

ScenarioConfig parse_scenario(std::string_view json_text) {
  const json doc = detail::parse_text(json_text);
  detail::Reader r(doc, "");
  return detail::read_scenario(r);
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return parse_scenario(detail::read_file(path));
}

std::string to_json(const ScenarioConfig& config) { return detail::scenario_json(config).dump(2) + "\n"; }

// --- simulation ------------------------------------------------------------

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

ScenarioResult simulate(const ScenarioConfig& config) {
  config.validate();
  ScenarioResult r;
  r.config = config;
  const FieldSchedule schedule = config.schedule();
  const Propagator propagator(config.model, schedule, config.propagator);
  r.warnings = propagator.warnings();

  const std::vector<double> times = config.sampling.times();
  r.states = propagator.sample(config.initial_state(), times);
  r.observables = observe(r.states, config.model);
  r.reversals = reversal_times(r.observables);

  std::vector<double> p_total;
  p_total.reserve(times.size());
  for (const auto& o : r.observables) p_total.push_back(o.p_total);

  // Fit window, cut short at the first sample where P_t has underflowed.
  const double default_begin =
      config.sampling.spacing == SamplingSpec::Spacing::log ? config.sampling.t_first : times.front();
  auto [fit_begin, fit_end] = config.analyses.fit_window.value_or(std::pair{default_begin, times.back()});
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= fit_begin && times[i] <= fit_end && !(p_total[i] > 0.0)) {
      r.warnings.push_back(fmt::format("P_t underflowed at t={}; decay fit stops at the previous sample", times[i]));
      fit_end = i > 0 ? times[i - 1] : fit_begin;
      break;
    }
  }
  try {
    r.fit = decay_fit(times, p_total, fit_begin, fit_end);
  } catch (const DomainError& e) {
    r.warnings.push_back(fmt::format("no decay fit: {}", e.what()));
  }
  r.plateaus = plateau_detect(times, p_total, config.analyses.plateau);

  r.peak_track.reserve(times.size());
  r.local_field.reserve(times.size());
  std::size_t resolved = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& o = r.observables[i];
    const bool alive = std::isfinite(o.n_bar);
    r.local_field.push_back(alive ? (o.n_bar - schedule.zero_point(times[i])) * config.model.zeeman_slope : kNaN);
    if (alive) {
      r.peak_track.push_back(peak_momentum(momentum_spectrum(r.states[i], config.model), config.model,
                                           config.analyses.peak_half_window));
      if (resolved == i) ++resolved;
    } else {
      r.peak_track.push_back(kNaN);
    }
  }
  r.turning_points = momentum_turning_points(std::span(times).first(resolved),
                                             std::span<const double>(r.peak_track).first(resolved),
                                             config.model, config.analyses.turning_prominence);

  if (config.analyses.spectrum) {
    const LatticeSums sums(config.model);
    const auto grid = spectrum_grid(config.model);
    const BlochTable table(sums, grid);
    r.projections.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      // Once the packet is gone its centre is undefined; project at the chain centre.
      const double field = std::isfinite(r.local_field[i])
                               ? r.local_field[i]
                               : -schedule.zero_point(times[i]) * config.model.zeeman_slope;
      r.projections.push_back(band_projection(momentum_spectrum(r.states[i], config.model), table, field));
    }
  }
  return r;
}

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json scenario_manifest(const ScenarioResult& r, const std::vector<std::string>& files) {
  const auto& c = r.config;
  json m;
  m["schema"] = detail::kScenarioSchema;
  m["name"] = c.name;
  m["config"] = detail::scenario_json(c);
  const GaussianSpec g = c.resolved_gaussian();
  m["resolved_initial"] = {{"psi_plus", detail::complex_to_json(g.psi_plus)},
                           {"psi_minus", detail::complex_to_json(g.psi_minus)},
                           {"norm_squared", r.states.empty() ? 0.0 : r.states.front().norm_squared()}};
  m["derived"] = {{"k0a", c.model.k0a()},
                  {"zone_edge_k0", c.model.zone_edge()},
                  {"bloch_period_inv_gamma0", c.model.bloch_period()},
                  {"first_site", c.model.first_site()},
                  {"samples", r.states.size()}};
  m["tolerances"] = {{"dt_max_inv_gamma0", c.propagator.step.dt_max},
                     {"error_control", c.propagator.step.error_control},
                     {"local_tolerance", c.propagator.step.local_tolerance},
                     {"norm_tolerance", c.propagator.step.norm_tolerance},
                     {"max_condition", c.propagator.max_condition},
                     {"sum_cutoff", c.model.sum_cutoff},
                     {"population_floor", 1e-12},
                     {"lightcone_rule", "bins with |k| < k0, by bin centre"},
                     {"plateau_relative_slope", c.analyses.plateau.relative_slope},
                     {"plateau_min_duration_inv_gamma0", c.analyses.plateau.min_duration},
                     {"rate_floor_gamma0", c.analyses.rate_floor}};

  json summary;
  if (!r.observables.empty()) {
    const auto& last = r.observables.back();
    summary["t_final"] = last.t;
    summary["p_total_final"] = last.p_total;
    double peak_lc = 0.0;
    for (const auto& o : r.observables) {
      if (std::isfinite(o.lightcone)) peak_lc = std::max(peak_lc, o.lightcone);
    }
    summary["lightcone_peak"] = peak_lc;
  }
  summary["reversal_times"] = r.reversals;
  if (r.fit) {
    summary["decay_fit"] = {{"rate_gamma0", r.fit->rate},
                            {"residual", r.fit->residual},
                            {"samples", r.fit->samples},
                            {"below_floor", std::abs(r.fit->rate) < c.analyses.rate_floor}};
  } else {
    summary["decay_fit"] = nullptr;
  }
  json plateaus = json::array();
  for (const auto& p : r.plateaus) plateaus.push_back({{"start", p.start}, {"end", p.end}, {"level", p.level}});
  summary["plateaus"] = plateaus;
  json turns = json::array();
  for (const auto& t : r.turning_points) turns.push_back({{"t", t.t}, {"k_over_k0", t.k_over_k0}});
  summary["momentum_turning_points"] = turns;
  if (!r.projections.empty()) {
    summary["band_weight_final"] = {{"I", number_or_null(r.projections.back().total_one())},
                                    {"II", number_or_null(r.projections.back().total_two())}};
  }
  m["summary"] = summary;
  m["warnings"] = r.warnings;
  m["files"] = files;
  return m;
}

}  // namespace

void write_bundle(const ScenarioResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files{"observables.csv"};
  {
    std::ostringstream out;
    write_observables_csv(out, result.observables);
    detail::write_text(dir / "observables.csv", out.str());
  }
  if (!result.projections.empty()) {
    const auto grid = spectrum_grid(result.config.model);
    std::ostringstream out;
    write_spectrum_header(out);
    for (std::size_t i = 0; i < result.projections.size(); ++i) {
      write_spectrum_rows(out, result.states[i].t, grid, result.projections[i]);
    }
    detail::write_text(dir / "spectrum.csv", out.str());
    files.emplace_back("spectrum.csv");
  }
  if (result.config.analyses.amplitudes) {
    std::ostringstream out;
    write_amplitudes_csv(out, result.states, result.config.model);
    detail::write_text(dir / "amplitudes.csv", out.str());
    files.emplace_back("amplitudes.csv");
  }
  detail::write_text(dir / "manifest.json", scenario_manifest(result, files).dump(2) + "\n");
}

ScenarioResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& dir) {
  ScenarioResult result = simulate(config);
  write_bundle(result, dir);
  return result;
}

// --- band structure --------------------------------------------------------

void BandsConfig::validate() const {
  if (name.empty()) throw ConfigError("name: must not be empty");
  model.validate();
  if (constant_fields.empty()) throw ConfigError("constant_fields_gamma0: need at least one value");
  for (const double bc : constant_fields) {
    if (!std::isfinite(bc)) throw ConfigError("constant_fields_gamma0: values must be finite");
  }
  if (k_points < 2) throw ConfigError(fmt::format("k_points: need at least 2, got {}", k_points));
}

BandsConfig parse_bands(std::string_view json_text) {
  const json doc = detail::parse_text(json_text);
  detail::Reader r(doc, "");
  BandsConfig c;
  c.name = r.string("name", c.name);
  if (r.has("model")) {
    detail::Reader m = r.child("model");
    c.model = detail::read_model(m, false);
  }
  if (r.has("constant_fields_gamma0")) {
    const std::string where = r.field("constant_fields_gamma0");
    const json& v = r.raw("constant_fields_gamma0");
    if (!v.is_array()) throw ConfigError(fmt::format("{}: expected a list of numbers", where));
    c.constant_fields.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      c.constant_fields.push_back(detail::Reader::as_number(v[i], fmt::format("{}[{}]", where, i)));
    }
  }
  c.k_points = detail::to_int(r.integer("k_points", c.k_points), r.field("k_points"));
  c.labeling = detail::parse_labeling(r.string("labeling", "continuity"), r.field("labeling"));
  c.output_dir = r.string("output_dir", "");
  r.finish();
  c.validate();
  return c;
}

BandsConfig load_bands(const std::filesystem::path& path) { return parse_bands(detail::read_file(path)); }

std::vector<BandsResult> run_bands(const BandsConfig& config) {
  config.validate();
  const LatticeSums sums(config.model);
  const auto grid = zone_grid(config.model, config.k_points);
  std::vector<BandsResult> out;
  for (const double bc : config.constant_fields) {
    out.push_back({bc, band_scan(sums, bc, grid, config.labeling)});
  }
  return out;
}

std::string bands_file_name(double constant_field) {
  return fmt::format("bands_bc{}.csv", constant_field);
}

std::vector<std::string> write_bands(const BandsConfig& config, const std::vector<BandsResult>& results,
                                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  json fields = json::array();
  for (const auto& res : results) {
    const std::string file = bands_file_name(res.constant_field);
    std::ostringstream out;
    write_bands_csv(out, res.scan);
    detail::write_text(dir / file, out.str());
    files.push_back(file);

    double min_rate[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double max_rate[2] = {0.0, 0.0};
    double min_gap = std::numeric_limits<double>::infinity();
    std::size_t degenerate = 0;
    for (const auto& pair : res.scan) {
      for (const auto& p : pair) {
        const int b = p.band == Band::I ? 0 : 1;
        min_rate[b] = std::min(min_rate[b], p.decay_rate());
        max_rate[b] = std::max(max_rate[b], p.decay_rate());
      }
      min_gap = std::min(min_gap, band_gap(pair));
      if (pair[0].degenerate) ++degenerate;
    }
    fields.push_back({{"constant_field_gamma0", res.constant_field},
                      {"file", file},
                      {"decay_rate_min", {{"I", min_rate[0]}, {"II", min_rate[1]}}},
                      {"decay_rate_max", {{"I", max_rate[0]}, {"II", max_rate[1]}}},
                      {"min_gap", min_gap},
                      {"degenerate_points", degenerate}});
  }
  json m;
  m["schema"] = detail::kBandsSchema;
  m["name"] = config.name;
  m["model"] = detail::model_json(config.model, false);
  m["k_points"] = config.k_points;
  m["labeling"] = detail::labeling_name(config.labeling);
  m["tolerances"] = {{"sum_cutoff", config.model.sum_cutoff}, {"degeneracy_threshold", 1e-10}};
  m["fields"] = fields;
  m["files"] = files;
  detail::write_text(dir / "manifest.json", m.dump(2) + "\n");
  return files;
}

}  // namespace subrad
