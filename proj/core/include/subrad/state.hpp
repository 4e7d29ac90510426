#pragma once

#include <complex>

#include <Eigen/Dense>

#include "subrad/model.hpp"

namespace subrad {

/// Single-excitation amplitudes C_{+,n}, C_{-,n} at time t, stored
/// interleaved in the Hamiltonian basis order.
struct WavepacketState {
  double t = 0.0;
  Eigen::VectorXcd amplitudes;

  [[nodiscard]] int atom_count() const { return static_cast<int>(amplitudes.size() / 2); }

  using ArmView = Eigen::Map<const Eigen::VectorXcd, 0, Eigen::InnerStride<2>>;
  [[nodiscard]] ArmView plus() const { return {amplitudes.data(), atom_count()}; }
  [[nodiscard]] ArmView minus() const { return {amplitudes.data() + 1, atom_count()}; }

  [[nodiscard]] double norm_squared() const { return amplitudes.squaredNorm(); }
};

/// C_{+-,n}(0) = psi_+- * exp(i k_c a n - (n - n_c)^2 / width).
struct GaussianSpec {
  double center_site = 0.0;            ///< n_c
  double momentum_over_k0 = 0.0;       ///< k_c
  std::complex<double> psi_plus = 0.0;
  std::complex<double> psi_minus = 0.0;
  double width = 200.0;

  bool operator==(const GaussianSpec&) const = default;
};

/// No renormalisation: psi_+- set the norm. Throws ConfigError if both psi
/// vanish or the width is not positive.
WavepacketState gaussian_initial(const GaussianSpec& spec, const ModelParams& params);

}  // namespace subrad
