#pragma once

#include <complex>

namespace subrad {

enum class Arm { plus, minus };

/// Sign of the Zeeman shift on an arm: +1 for |+>, -1 for |->.
constexpr int zeeman_sign(Arm arm) { return arm == Arm::plus ? 1 : -1; }

// Photon-mediated couplings between two atoms separated by rho = k0*r, in
// units of hbar*gamma0. These already include the 3*pi*gamma0*c/omega_A
// prefactor of the dipole-dipole term, so the lattice Hamiltonian uses them
// directly. All throw DomainError for rho <= 0 or non-finite rho.

/// Same-polarisation coupling: -(3/8) e^{i rho} (rho^2 - i rho + 1) / rho^3.
std::complex<double> green_pp(double rho);
std::complex<double> green_mm(double rho);

/// Cross-polarisation coupling: (3/8) e^{i rho} (rho^2 + 3i rho - 3) / rho^3.
std::complex<double> green_pm(double rho);
std::complex<double> green_mp(double rho);

std::complex<double> coupling(Arm to, Arm from, double rho);

}  // namespace subrad
