#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "subrad/bands.hpp"
#include "subrad/model.hpp"
#include "subrad/state.hpp"

namespace subrad {

struct Populations {
  double plus = 0.0;
  double minus = 0.0;
  double total = 0.0;
};

Populations populations(const WavepacketState& state);

/// Probability-weighted site index, normalised by the current total.
/// Throws DomainError when the total is <= 1e-12.
double mean_position(const WavepacketState& state, const ModelParams& params);

/// (b0 / a) (P+ - P-) / P_t, in gamma0 / lambda.
double force_expectation(const WavepacketState& state, double zeeman_slope,
                         double spacing_over_lambda);

/// Unitary DFT of each arm, ordered by ascending momentum in [-k_edge, k_edge).
struct MomentumSpectrum {
  std::vector<double> k_over_k0;
  std::vector<std::complex<double>> plus;
  std::vector<std::complex<double>> minus;

  [[nodiscard]] std::size_t size() const { return k_over_k0.size(); }
  [[nodiscard]] double weight(std::size_t j) const {
    return std::norm(plus[j]) + std::norm(minus[j]);
  }
  [[nodiscard]] double total() const;
};

/// Physical momenta k_j = j / (N a) in k0 units for the N-site chain.
std::vector<double> spectrum_grid(const ModelParams& params);

MomentumSpectrum momentum_spectrum(const WavepacketState& state, const ModelParams& params);

/// Bloch sums evaluated once on the spectrum grid; only the uniform field
/// changes between time samples.
class BlochTable {
 public:
  BlochTable(const LatticeSums& sums, std::span<const double> k_grid);

  [[nodiscard]] BlochMatrix at(std::size_t j, double uniform_field) const;
  [[nodiscard]] std::size_t size() const { return k_.size(); }
  [[nodiscard]] std::span<const double> grid() const { return k_; }

 private:
  std::vector<double> k_;
  std::vector<std::complex<double>> same_;
  std::vector<std::complex<double>> cross_;
  long cutoff_;
};

/// Decomposition c(k) = alpha v_I(k) + beta v_II(k) onto the right
/// eigenvectors of the Bloch matrix in a uniform field.
struct BandProjection {
  std::vector<double> p_one;     ///< |alpha|^2 per k; NaN where unresolved
  std::vector<double> p_two;     ///< |beta|^2 per k; NaN where unresolved
  std::vector<double> residual;  ///< |c|^2 - |alpha|^2 - |beta|^2 (non-orthogonality)
  std::vector<bool> unresolved;  ///< degenerate Bloch eigenvectors at that k

  [[nodiscard]] double total_one() const;
  [[nodiscard]] double total_two() const;
};

/// Throws ConfigError if the table grid does not match the spectrum grid.
BandProjection band_projection(const MomentumSpectrum& spectrum, const BlochTable& table,
                               double uniform_field);

/// Fraction of spectral weight strictly inside the light cone |k| < k0,
/// classified by bin centre. Throws DomainError if the spectrum is empty.
double lightcone_fraction(const MomentumSpectrum& spectrum);

/// One row of the observables table.
struct Observables {
  double t = 0.0;
  double p_plus = 0.0;
  double p_minus = 0.0;
  double p_total = 0.0;
  double n_bar = 0.0;
  double force = 0.0;
  double lightcone = 0.0;
};

Observables observe(const WavepacketState& state, const ModelParams& params);
std::vector<Observables> observe(std::span<const WavepacketState> states,
                                 const ModelParams& params);

/// Linearly interpolated zero crossings of P+ - P-. Samples where the
/// difference is exactly zero are skipped, so a start at P+ = P- is not a
/// crossing.
std::vector<double> reversal_times(std::span<const Observables> trajectory);

struct DecayFit {
  double rate = 0.0;      ///< -d ln P_t / dt, gamma0
  double residual = 0.0;  ///< rms of ln P_t about the fit
  std::size_t samples = 0;
};

/// Least squares slope of ln P_t over samples with t in [t_begin, t_end].
/// Throws DomainError on non-positive P_t in the window or fewer than two
/// samples.
DecayFit decay_fit(std::span<const double> times, std::span<const double> p_total,
                   double t_begin, double t_end);

struct PlateauOptions {
  double relative_slope = 1e-3;  ///< |dP_t/dt| < relative_slope * P_t, gamma0
  double min_duration = 2.0;     ///< 1/gamma0
};

struct Plateau {
  double start = 0.0;
  double end = 0.0;
  double level = 0.0;  ///< mean P_t over the interval
};

/// Maximal runs of samples with a small logarithmic slope (central
/// differences), dropped if shorter than min_duration.
std::vector<Plateau> plateau_detect(std::span<const double> times,
                                    std::span<const double> p_total,
                                    PlateauOptions options = {});

/// Circular mean of the spectral weight, in k0 units within the zone.
double momentum_centroid(const MomentumSpectrum& spectrum, const ModelParams& params);

/// Circular mean restricted to +-half_window (k0 units) around the peak bin.
double peak_momentum(const MomentumSpectrum& spectrum, const ModelParams& params,
                     double half_window = 0.5);

struct TurningPoint {
  double t = 0.0;
  double k_over_k0 = 0.0;
  std::size_t index = 0;
};

/// Turning points of a momentum track on the zone circle. The track is
/// unwrapped across the zone edge; a turn counts once the motion has
/// reversed by at least `prominence` (k0 units).
std::vector<TurningPoint> momentum_turning_points(std::span<const double> times,
                                                  std::span<const double> k_track,
                                                  const ModelParams& params,
                                                  double prominence = 0.2);

}  // namespace subrad
