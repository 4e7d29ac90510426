#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "subrad/green.hpp"
#include "subrad/model.hpp"

namespace subrad {

/// Position of |arm_n> in the 2N-dimensional single-excitation basis.
/// Site-major ordering: |+_n> precedes |-_n>.
constexpr Eigen::Index basis_index(int site_offset, Arm arm) {
  return 2 * static_cast<Eigen::Index>(site_offset) + (arm == Arm::plus ? 0 : 1);
}

/// Dense non-Hermitian single-excitation Hamiltonian in the rotating frame.
/// Complex symmetric; every diagonal entry is -i/2 + s_alpha * b_n.
struct EffectiveHamiltonian {
  Eigen::MatrixXcd matrix;
  int atom_count = 0;
  double build_time = 0.0;

  [[nodiscard]] Eigen::Index dimension() const { return matrix.rows(); }
};

/// Field-independent part: photon-mediated couplings plus the -i/2 on-site
/// decay. Depends only on |n - m|, the arms, and k0*a.
Eigen::MatrixXcd coupling_matrix(const ModelParams& params);

/// Interleaved diagonal (s_alpha * b_n) for a per-site field.
Eigen::VectorXd zeeman_diagonal(std::span<const double> field);

/// Throws ConfigError if field.size() != params.atom_count.
EffectiveHamiltonian build_hamiltonian(const ModelParams& params, std::span<const double> field,
                                       double build_time = 0.0);

/// max |H - H^T| relative to max |H|.
double symmetry_defect(const Eigen::MatrixXcd& matrix);

}  // namespace subrad
