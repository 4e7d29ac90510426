#include "subrad/bands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "subrad/errors.hpp"
#include "subrad/green.hpp"

namespace subrad {
namespace {

constexpr double kDegenerateSeparation = 1e-10;

void fix_phase(Eigen::Ref<Eigen::Vector2cd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-8) {
      v *= std::conj(v(i)) / mag;
      v(i) = mag;
      return;
    }
  }
}

double overlap(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
  return std::abs(a.dot(b));
}

}  // namespace

const char* band_name(Band band) { return band == Band::I ? "I" : "II"; }

LatticeSums::LatticeSums(const ModelParams& params) : k0a_(params.k0a()) {
  params.validate();
  const auto m = static_cast<std::size_t>(params.sum_cutoff);
  same_.resize(m);
  cross_.resize(m);
  for (std::size_t d = 1; d <= m; ++d) {
    const double rho = k0a_ * static_cast<double>(d);
    same_[d - 1] = green_pp(rho);
    cross_[d - 1] = green_pm(rho);
  }
}

std::pair<std::complex<double>, std::complex<double>> LatticeSums::operator()(double k) const {
  // Smallest terms first.
  std::complex<double> same = 0.0;
  std::complex<double> cross = 0.0;
  const double phase = k * k0a_;
  for (std::size_t d = same_.size(); d >= 1; --d) {
    const double c = 2.0 * std::cos(phase * static_cast<double>(d));
    same += same_[d - 1] * c;
    cross += cross_[d - 1] * c;
  }
  return {same, cross};
}

BlochMatrix bloch_sum(const LatticeSums& sums, double k, double uniform_field) {
  const auto [same, cross] = sums(k);
  BlochMatrix out;
  out.k = k;
  out.cutoff_used = sums.cutoff();
  out.matrix << same + std::complex<double>(uniform_field, -0.5), cross, cross,
      same + std::complex<double>(-uniform_field, -0.5);
  return out;
}

BlochMatrix bloch_sum(const ModelParams& params, double k) {
  params.validate();
  if (std::abs(k) > params.zone_edge() * (1.0 + 1e-12)) {
    throw ConfigError(fmt::format("momentum {} k0 lies outside the first zone [-{}, {}]", k,
                                  params.zone_edge(), params.zone_edge()));
  }
  return bloch_sum(LatticeSums(params), k, params.constant_field);
}

BandPair band_eigs(const BlochMatrix& bloch) {
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(bloch.matrix, true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(fmt::format("2x2 Bloch eigensolver failed at k = {}", bloch.k));
  }
  const Eigen::Vector2cd& values = solver.eigenvalues();
  const bool degenerate = std::abs(values(0) - values(1)) < kDegenerateSeparation;

  std::array<Eigen::Index, 2> order{0, 1};
  const bool swap = degenerate ? values(1).imag() < values(0).imag()
                               : values(1).real() < values(0).real();
  if (swap) std::swap(order[0], order[1]);

  BandPair pair;
  for (std::size_t b = 0; b < 2; ++b) {
    BandPoint& p = pair[b];
    p.k = bloch.k;
    p.band = b == 0 ? Band::I : Band::II;
    p.eigenvalue = values(order[b]);
    p.eigenvector = solver.eigenvectors().col(order[b]).normalized();
    fix_phase(p.eigenvector);
    p.p_plus = std::norm(p.eigenvector(0));
    p.p_minus = std::norm(p.eigenvector(1));
    p.degenerate = degenerate;
  }
  return pair;
}

double band_gap(const BandPair& pair) { return std::abs(pair[1].eigenvalue - pair[0].eigenvalue); }

std::vector<BandPair> band_scan(const LatticeSums& sums, double uniform_field,
                                std::span<const double> k_grid, Labeling labeling) {
  std::vector<BandPair> out;
  out.reserve(k_grid.size());
  for (const double k : k_grid) {
    out.push_back(band_eigs(bloch_sum(sums, k, uniform_field)));
  }
  if (labeling == Labeling::continuity) {
    for (std::size_t i = 1; i < out.size(); ++i) {
      const BandPair& prev = out[i - 1];
      BandPair& cur = out[i];
      const double keep =
          overlap(prev[0].eigenvector, cur[0].eigenvector) + overlap(prev[1].eigenvector, cur[1].eigenvector);
      const double swapped =
          overlap(prev[0].eigenvector, cur[1].eigenvector) + overlap(prev[1].eigenvector, cur[0].eigenvector);
      if (swapped > keep) {
        std::swap(cur[0], cur[1]);
        cur[0].band = Band::I;
        cur[1].band = Band::II;
      }
    }
  }
  return out;
}

std::vector<BandPair> band_scan(const ModelParams& params, std::span<const double> k_grid,
                                Labeling labeling) {
  params.validate();
  for (const double k : k_grid) {
    if (std::abs(k) > params.zone_edge() * (1.0 + 1e-12)) {
      throw ConfigError(fmt::format("k-grid point {} lies outside the first zone", k));
    }
  }
  return band_scan(LatticeSums(params), params.constant_field, k_grid, labeling);
}

std::vector<double> zone_grid(const ModelParams& params, int points) {
  if (points < 2) throw ConfigError("a zone grid needs at least two points");
  const double edge = params.zone_edge();
  std::vector<double> grid(static_cast<std::size_t>(points));
  // Integer numerator keeps k and -k exact negatives of each other.
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        edge * static_cast<double>(2 * i - (points - 1)) / static_cast<double>(points - 1);
  }
  return grid;
}

void write_bands_csv(std::ostream& out, std::span<const BandPair> scan) {
  out << "k_over_k0,band,re_ev,decay_rate,p_plus,p_minus\n";
  for (const auto& pair : scan) {
    for (const auto& p : pair) {
      fmt::print(out, "{},{},{},{},{},{}\n", p.k, band_name(p.band), p.eigenvalue.real(),
                 p.decay_rate(), p.p_plus, p.p_minus);
    }
  }
}

std::pair<std::complex<double>, std::complex<double>> band_polarization(
    const LatticeSums& sums, double k, double uniform_field, Band band, double norm) {
  const BandPair pair = band_eigs(bloch_sum(sums, k, uniform_field));
  const Eigen::Vector2cd& v = pair[band == Band::I ? 0 : 1].eigenvector;
  return {norm * v(0), norm * v(1)};
}

}  // namespace subrad
