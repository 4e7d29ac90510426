#include "subrad/state.hpp"

#include <cmath>

#include "subrad/errors.hpp"
#include "subrad/hamiltonian.hpp"

namespace subrad {

WavepacketState gaussian_initial(const GaussianSpec& spec, const ModelParams& params) {
  params.validate();
  if (spec.psi_plus == 0.0 && spec.psi_minus == 0.0) {
    throw ConfigError("initial.psi_plus and initial.psi_minus are both zero");
  }
  if (!(spec.width > 0.0)) {
    throw ConfigError("initial.width must be positive");
  }
  const double phase_per_site = spec.momentum_over_k0 * params.k0a();

  WavepacketState state;
  state.amplitudes.resize(2 * params.atom_count);
  for (int i = 0; i < params.atom_count; ++i) {
    const double n = params.site(i);
    const double offset = n - spec.center_site;
    const auto envelope = std::polar(std::exp(-offset * offset / spec.width), phase_per_site * n);
    state.amplitudes(basis_index(i, Arm::plus)) = spec.psi_plus * envelope;
    state.amplitudes(basis_index(i, Arm::minus)) = spec.psi_minus * envelope;
  }
  return state;
}

}  // namespace subrad
