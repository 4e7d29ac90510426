#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "subrad/model.hpp"

namespace subrad {

enum class Band { I, II };

const char* band_name(Band band);

/// Precomputed couplings g(k0*a*d), d = 1..M, reused for every Bloch momentum.
/// Building one is O(M); each evaluation afterwards is O(M) cosines.
class LatticeSums {
 public:
  explicit LatticeSums(const ModelParams& params);

  /// Truncated sums Sigma_ab(k) = sum_{d=1..M} g_ab(k0 a d) * 2 cos(k a d)
  /// for (same-arm, cross-arm), with k in k0 units.
  [[nodiscard]] std::pair<std::complex<double>, std::complex<double>> operator()(double k) const;

  [[nodiscard]] long cutoff() const { return static_cast<long>(same_.size()); }
  [[nodiscard]] double k0a() const { return k0a_; }

 private:
  double k0a_;
  std::vector<std::complex<double>> same_;
  std::vector<std::complex<double>> cross_;
};

/// 2x2 Bloch Hamiltonian of the infinite chain in a uniform field.
struct BlochMatrix {
  double k = 0.0;  ///< k0 units
  Eigen::Matrix2cd matrix;
  long cutoff_used = 0;
};

BlochMatrix bloch_sum(const LatticeSums& sums, double k, double uniform_field);

/// Convenience overload; builds the lattice sums from scratch (O(M)).
/// Uses params.constant_field. Throws ConfigError if |k| exceeds the zone edge.
BlochMatrix bloch_sum(const ModelParams& params, double k);

/// One eigenstate of a Bloch matrix.
struct BandPoint {
  double k = 0.0;
  Band band = Band::I;
  std::complex<double> eigenvalue;
  Eigen::Vector2cd eigenvector;  ///< Euclidean-normalised right eigenvector
  double p_plus = 0.0;
  double p_minus = 0.0;
  bool degenerate = false;

  /// -2 Im(lambda), in gamma0.
  [[nodiscard]] double decay_rate() const { return -2.0 * eigenvalue.imag(); }
};

using BandPair = std::array<BandPoint, 2>;

/// Eigenpairs sorted by real part (band I first). Eigenvalues closer than
/// 1e-10 are flagged degenerate and ordered by imaginary part instead.
/// Eigenvector phase is fixed so the first non-negligible component is real
/// and positive.
BandPair band_eigs(const BlochMatrix& bloch);

/// |lambda_II - lambda_I|.
double band_gap(const BandPair& pair);

enum class Labeling {
  energy,      ///< band I = lower real part at every k
  continuity,  ///< energy order seeds the first k, then labels follow eigenvector overlap
};

/// Band structure over a grid. Points are independent; the continuity pass
/// runs sequentially afterwards.
std::vector<BandPair> band_scan(const ModelParams& params, std::span<const double> k_grid,
                                Labeling labeling = Labeling::continuity);
std::vector<BandPair> band_scan(const LatticeSums& sums, double uniform_field,
                                std::span<const double> k_grid,
                                Labeling labeling = Labeling::continuity);

/// `points` uniform momenta spanning [-zone_edge, zone_edge] inclusive.
std::vector<double> zone_grid(const ModelParams& params, int points = 1001);

/// Columns: k_over_k0, band, re_ev, decay_rate, p_plus, p_minus.
void write_bands_csv(std::ostream& out, std::span<const BandPair> scan);

/// Amplitudes (psi_plus, psi_minus) placing a Gaussian on `band` at momentum
/// k in a local uniform field. `norm` sets sqrt(|psi_+|^2 + |psi_-|^2).
std::pair<std::complex<double>, std::complex<double>> band_polarization(
    const LatticeSums& sums, double k, double uniform_field, Band band, double norm);

}  // namespace subrad
