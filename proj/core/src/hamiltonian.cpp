#include "subrad/hamiltonian.hpp"

#include <fmt/format.h>

#include "subrad/errors.hpp"

namespace subrad {

Eigen::MatrixXcd coupling_matrix(const ModelParams& params) {
  params.validate();
  const int n = params.atom_count;
  const double k0a = params.k0a();

  std::vector<std::complex<double>> same(static_cast<std::size_t>(n));
  std::vector<std::complex<double>> cross(static_cast<std::size_t>(n));
  for (int d = 1; d < n; ++d) {
    same[static_cast<std::size_t>(d)] = green_pp(k0a * d);
    cross[static_cast<std::size_t>(d)] = green_pm(k0a * d);
  }

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    h(basis_index(i, Arm::plus), basis_index(i, Arm::plus)) = {0.0, -0.5};
    h(basis_index(i, Arm::minus), basis_index(i, Arm::minus)) = {0.0, -0.5};
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto d = static_cast<std::size_t>(i > j ? i - j : j - i);
      h(basis_index(i, Arm::plus), basis_index(j, Arm::plus)) = same[d];
      h(basis_index(i, Arm::minus), basis_index(j, Arm::minus)) = same[d];
      h(basis_index(i, Arm::plus), basis_index(j, Arm::minus)) = cross[d];
      h(basis_index(i, Arm::minus), basis_index(j, Arm::plus)) = cross[d];
    }
  }
  return h;
}

Eigen::VectorXd zeeman_diagonal(std::span<const double> field) {
  Eigen::VectorXd diag(2 * static_cast<Eigen::Index>(field.size()));
  for (std::size_t i = 0; i < field.size(); ++i) {
    diag(basis_index(static_cast<int>(i), Arm::plus)) = field[i];
    diag(basis_index(static_cast<int>(i), Arm::minus)) = -field[i];
  }
  return diag;
}

EffectiveHamiltonian build_hamiltonian(const ModelParams& params, std::span<const double> field,
                                       double build_time) {
  if (field.size() != static_cast<std::size_t>(params.atom_count)) {
    throw ConfigError(fmt::format("field has {} entries but the chain has {} atoms", field.size(),
                                  params.atom_count));
  }
  EffectiveHamiltonian h{coupling_matrix(params), params.atom_count, build_time};
  h.matrix.diagonal() += zeeman_diagonal(field).cast<std::complex<double>>();
  return h;
}

double symmetry_defect(const Eigen::MatrixXcd& matrix) {
  const double scale = matrix.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (matrix - matrix.transpose()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace subrad
