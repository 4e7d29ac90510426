#include "subrad/green.hpp"

#include <cmath>

#include <fmt/format.h>

#include "subrad/errors.hpp"

namespace subrad {
namespace {

void require_separation(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError(fmt::format("coupling needs a positive finite separation, got k0*r = {}", rho));
  }
}

constexpr std::complex<double> kI{0.0, 1.0};

}  // namespace

std::complex<double> green_pp(double rho) {
  require_separation(rho);
  const std::complex<double> poly = rho * rho - kI * rho + 1.0;
  return -0.375 * std::polar(1.0, rho) * poly / (rho * rho * rho);
}

std::complex<double> green_mm(double rho) { return green_pp(rho); }

std::complex<double> green_pm(double rho) {
  require_separation(rho);
  const std::complex<double> poly = rho * rho + 3.0 * kI * rho - 3.0;
  return 0.375 * std::polar(1.0, rho) * poly / (rho * rho * rho);
}

std::complex<double> green_mp(double rho) { return green_pm(rho); }

std::complex<double> coupling(Arm to, Arm from, double rho) {
  return to == from ? green_pp(rho) : green_pm(rho);
}

}  // namespace subrad
