#pragma once

#include <numbers>

namespace subrad {

/// Dimensionless description of a finite V-type atomic chain.
///
/// Units throughout the library: hbar = 1, rates and energies in gamma0
/// (single-atom free-space decay rate), times in 1/gamma0, lengths in the
/// transition wavelength lambda, momenta in k0 = 2*pi/lambda. The dynamics
/// are written in the frame rotating at the atomic transition frequency.
struct ModelParams {
  double spacing_over_lambda = 0.1;  ///< a / lambda
  int atom_count = 201;              ///< N
  double zeeman_slope = 0.2;         ///< b0 = mu*B0 / (hbar*gamma0), field per site
  double constant_field = 0.0;       ///< bc = mu*Bc / (hbar*gamma0), band-structure mode
  long sum_cutoff = 50000;           ///< lattice-sum truncation M (neighbours per side)

  /// Throws ConfigError on out-of-range values.
  void validate() const;

  /// k0 * a, the phase accumulated between neighbouring sites at the light line.
  [[nodiscard]] double k0a() const { return 2.0 * std::numbers::pi * spacing_over_lambda; }

  /// Physical index of the first site: -(N-1)/2 for odd N, -N/2 for even N.
  [[nodiscard]] int first_site() const { return -(atom_count / 2); }
  [[nodiscard]] int site(int offset) const { return first_site() + offset; }

  /// Edge of the first Brillouin zone in k0 units, lambda / (2a).
  [[nodiscard]] double zone_edge() const { return 0.5 / spacing_over_lambda; }

  /// T_B = 2*pi / b0.
  [[nodiscard]] double bloch_period() const { return 2.0 * std::numbers::pi / zeeman_slope; }

  bool operator==(const ModelParams&) const = default;
};

}  // namespace subrad
