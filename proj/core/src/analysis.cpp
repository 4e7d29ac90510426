#include "subrad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>
#include <unsupported/Eigen/FFT>

#include "subrad/errors.hpp"

namespace subrad {
namespace {

constexpr double kEmptyState = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Wraps a momentum difference into [-edge, edge).
double wrap(double dk, double edge) {
  const double period = 2.0 * edge;
  return dk - period * std::floor((dk + edge) / period);
}

std::complex<double> zone_phase(double k, double edge) {
  return std::polar(1.0, std::numbers::pi * k / edge);
}

double zone_angle_to_k(std::complex<double> z, double edge) {
  return std::arg(z) * edge / std::numbers::pi;
}

}  // namespace

Populations populations(const WavepacketState& state) {
  Populations p;
  p.plus = state.plus().squaredNorm();
  p.minus = state.minus().squaredNorm();
  p.total = p.plus + p.minus;
  return p;
}

double mean_position(const WavepacketState& state, const ModelParams& params) {
  const int n = state.atom_count();
  double total = 0.0;
  double moment = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = std::norm(state.plus()(i)) + std::norm(state.minus()(i));
    total += w;
    moment += params.site(i) * w;
  }
  if (!(total > kEmptyState)) {
    throw DomainError(fmt::format("mean position undefined: total probability {:.3e}", total));
  }
  return moment / total;
}

double force_expectation(const WavepacketState& state, double zeeman_slope,
                         double spacing_over_lambda) {
  const Populations p = populations(state);
  if (!(p.total > kEmptyState)) {
    throw DomainError(fmt::format("force undefined: total probability {:.3e}", p.total));
  }
  return zeeman_slope / spacing_over_lambda * (p.plus - p.minus) / p.total;
}

double MomentumSpectrum::total() const {
  double sum = 0.0;
  for (std::size_t j = 0; j < size(); ++j) sum += weight(j);
  return sum;
}

std::vector<double> spectrum_grid(const ModelParams& params) {
  const int n = params.atom_count;
  std::vector<double> k(static_cast<std::size_t>(n));
  const double step = 1.0 / (n * params.spacing_over_lambda);
  for (int i = 0; i < n; ++i) k[static_cast<std::size_t>(i)] = (params.first_site() + i) * step;
  return k;
}

MomentumSpectrum momentum_spectrum(const WavepacketState& state, const ModelParams& params) {
  const int n = params.atom_count;
  if (state.atom_count() != n) {
    throw ConfigError(fmt::format("state has {} sites, model has {}", state.atom_count(), n));
  }
  std::vector<std::complex<double>> plus(state.plus().begin(), state.plus().end());
  std::vector<std::complex<double>> minus(state.minus().begin(), state.minus().end());
  std::vector<std::complex<double>> plus_k, minus_k;
  Eigen::FFT<double> fft;
  fft.fwd(plus_k, plus);
  fft.fwd(minus_k, minus);

  MomentumSpectrum out;
  out.k_over_k0 = spectrum_grid(params);
  out.plus.resize(static_cast<std::size_t>(n));
  out.minus.resize(static_cast<std::size_t>(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const int first = params.first_site();
  for (int i = 0; i < n; ++i) {
    const int j = first + i;  // signed momentum index
    const auto slot = static_cast<std::size_t>(((j % n) + n) % n);
    // Shift the transform origin from array index 0 to site `first`.
    const auto phase = std::polar(
        scale, -2.0 * std::numbers::pi * static_cast<double>((static_cast<long long>(j) * first) % n) / n);
    out.plus[static_cast<std::size_t>(i)] = phase * plus_k[slot];
    out.minus[static_cast<std::size_t>(i)] = phase * minus_k[slot];
  }
  return out;
}

BlochTable::BlochTable(const LatticeSums& sums, std::span<const double> k_grid)
    : k_(k_grid.begin(), k_grid.end()), cutoff_(sums.cutoff()) {
  same_.reserve(k_.size());
  cross_.reserve(k_.size());
  for (const double k : k_) {
    const auto [same, cross] = sums(k);
    same_.push_back(same);
    cross_.push_back(cross);
  }
}

BlochMatrix BlochTable::at(std::size_t j, double uniform_field) const {
  BlochMatrix out;
  out.k = k_[j];
  out.cutoff_used = cutoff_;
  out.matrix << same_[j] + std::complex<double>(uniform_field, -0.5), cross_[j], cross_[j],
      same_[j] + std::complex<double>(-uniform_field, -0.5);
  return out;
}

double BandProjection::total_one() const {
  double sum = 0.0;
  for (std::size_t j = 0; j < p_one.size(); ++j) {
    if (!unresolved[j]) sum += p_one[j];
  }
  return sum;
}

double BandProjection::total_two() const {
  double sum = 0.0;
  for (std::size_t j = 0; j < p_two.size(); ++j) {
    if (!unresolved[j]) sum += p_two[j];
  }
  return sum;
}

BandProjection band_projection(const MomentumSpectrum& spectrum, const BlochTable& table,
                               double uniform_field) {
  if (table.size() != spectrum.size()) {
    throw ConfigError(fmt::format("Bloch table has {} momenta, spectrum has {}", table.size(),
                                  spectrum.size()));
  }
  const std::size_t n = spectrum.size();
  BandProjection out;
  out.p_one.resize(n);
  out.p_two.resize(n);
  out.residual.resize(n);
  out.unresolved.assign(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(table.grid()[j] - spectrum.k_over_k0[j]) > 1e-12) {
      throw ConfigError("Bloch table grid does not match the spectrum grid");
    }
    const BandPair pair = band_eigs(table.at(j, uniform_field));
    if (pair[0].degenerate) {
      out.unresolved[j] = true;
      out.p_one[j] = out.p_two[j] = out.residual[j] = kNaN;
      continue;
    }
    Eigen::Matrix2cd basis;
    basis << pair[0].eigenvector, pair[1].eigenvector;
    const Eigen::Vector2cd c(spectrum.plus[j], spectrum.minus[j]);
    const Eigen::Vector2cd coeffs = basis.partialPivLu().solve(c);
    out.p_one[j] = std::norm(coeffs(0));
    out.p_two[j] = std::norm(coeffs(1));
    out.residual[j] = c.squaredNorm() - out.p_one[j] - out.p_two[j];
  }
  return out;
}

double lightcone_fraction(const MomentumSpectrum& spectrum) {
  double inside = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double w = spectrum.weight(j);
    total += w;
    if (std::abs(spectrum.k_over_k0[j]) < 1.0) inside += w;
  }
  if (!(total > 0.0)) throw DomainError("light-cone fraction of an empty spectrum");
  return inside / total;
}

Observables observe(const WavepacketState& state, const ModelParams& params) {
  Observables row;
  const Populations p = populations(state);
  row.t = state.t;
  row.p_plus = p.plus;
  row.p_minus = p.minus;
  row.p_total = p.total;
  if (p.total > kEmptyState) {
    row.n_bar = mean_position(state, params);
    row.force = force_expectation(state, params.zeeman_slope, params.spacing_over_lambda);
    row.lightcone = lightcone_fraction(momentum_spectrum(state, params));
  } else {
    row.n_bar = row.force = row.lightcone = kNaN;
  }
  return row;
}

std::vector<Observables> observe(std::span<const WavepacketState> states,
                                 const ModelParams& params) {
  std::vector<Observables> rows;
  rows.reserve(states.size());
  for (const auto& s : states) rows.push_back(observe(s, params));
  return rows;
}

std::vector<double> reversal_times(std::span<const Observables> trajectory) {
  std::vector<double> out;
  bool have_last = false;
  double last_t = 0.0;
  double last_d = 0.0;
  for (const auto& row : trajectory) {
    const double d = row.p_plus - row.p_minus;
    if (d == 0.0 || !std::isfinite(d)) continue;
    if (have_last && (d > 0.0) != (last_d > 0.0)) {
      out.push_back(last_t + (row.t - last_t) * last_d / (last_d - d));
    }
    have_last = true;
    last_t = row.t;
    last_d = d;
  }
  return out;
}

DecayFit decay_fit(std::span<const double> times, std::span<const double> p_total, double t_begin,
                   double t_end) {
  if (times.size() != p_total.size()) throw ConfigError("decay_fit: series lengths differ");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_begin || times[i] > t_end) continue;
    if (!(p_total[i] > 0.0)) {
      throw DomainError(fmt::format("decay_fit: P_t = {} at t = {} is not positive", p_total[i],
                                    times[i]));
    }
    x.push_back(times[i]);
    y.push_back(std::log(p_total[i]));
  }
  if (x.size() < 2) {
    throw DomainError(fmt::format("decay_fit: window [{}, {}] holds {} samples", t_begin, t_end,
                                  x.size()));
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    ss += r * r;
  }
  return {-slope, std::sqrt(ss / n), x.size()};
}

std::vector<Plateau> plateau_detect(std::span<const double> times, std::span<const double> p_total,
                                    PlateauOptions options) {
  if (times.size() != p_total.size()) throw ConfigError("plateau_detect: series lengths differ");
  const std::size_t n = times.size();
  std::vector<Plateau> out;
  if (n == 0) return out;

  auto flat = [&](std::size_t i) {
    if (n == 1) return true;
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    const double slope = (p_total[hi] - p_total[lo]) / (times[hi] - times[lo]);
    return std::abs(slope) < options.relative_slope * std::abs(p_total[i]);
  };

  std::size_t i = 0;
  while (i < n) {
    if (!flat(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    double sum = 0.0;
    while (j < n && flat(j)) sum += p_total[j++];
    const Plateau p{times[i], times[j - 1], sum / static_cast<double>(j - i)};
    if (p.end - p.start >= options.min_duration || (i == 0 && j == n)) out.push_back(p);
    i = j;
  }
  return out;
}

double momentum_centroid(const MomentumSpectrum& spectrum, const ModelParams& params) {
  const double edge = params.zone_edge();
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    acc += spectrum.weight(j) * zone_phase(spectrum.k_over_k0[j], edge);
  }
  return zone_angle_to_k(acc, edge);
}

double peak_momentum(const MomentumSpectrum& spectrum, const ModelParams& params,
                     double half_window) {
  const double edge = params.zone_edge();
  std::size_t peak = 0;
  for (std::size_t j = 1; j < spectrum.size(); ++j) {
    if (spectrum.weight(j) > spectrum.weight(peak)) peak = j;
  }
  const double centre = spectrum.k_over_k0[peak];
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    if (std::abs(wrap(spectrum.k_over_k0[j] - centre, edge)) <= half_window) {
      acc += spectrum.weight(j) * zone_phase(spectrum.k_over_k0[j], edge);
    }
  }
  return zone_angle_to_k(acc, edge);
}

std::vector<TurningPoint> momentum_turning_points(std::span<const double> times,
                                                  std::span<const double> k_track,
                                                  const ModelParams& params, double prominence) {
  if (times.size() != k_track.size()) throw ConfigError("turning points: series lengths differ");
  std::vector<TurningPoint> out;
  const std::size_t n = times.size();
  if (n < 3) return out;
  const double edge = params.zone_edge();

  std::vector<double> u(n);
  u[0] = k_track[0];
  for (std::size_t i = 1; i < n; ++i) u[i] = u[i - 1] + wrap(k_track[i] - k_track[i - 1], edge);

  auto record = [&](std::size_t i) {
    out.push_back({times[i], wrap(u[i], edge), i});
  };

  int direction = 0;
  std::size_t lo = 0, hi = 0, ext = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (direction == 0) {
      if (u[i] > u[hi]) hi = i;
      if (u[i] < u[lo]) lo = i;
      if (u[i] - u[lo] >= prominence) {
        direction = 1;
        ext = hi;
      } else if (u[hi] - u[i] >= prominence) {
        direction = -1;
        ext = lo;
      }
    } else if (direction > 0) {
      if (u[i] >= u[ext]) {
        ext = i;
      } else if (u[ext] - u[i] >= prominence) {
        record(ext);
        direction = -1;
        ext = i;
      }
    } else {
      if (u[i] <= u[ext]) {
        ext = i;
      } else if (u[i] - u[ext] >= prominence) {
        record(ext);
        direction = 1;
        ext = i;
      }
    }
  }
  return out;
}

}  // namespace subrad
