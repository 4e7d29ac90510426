#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "subrad/bands.hpp"
#include "subrad/errors.hpp"

using namespace subrad;

namespace {

struct SumReference {
  double k;
  std::complex<double> same;
  std::complex<double> cross;
};

// tests/oracles/green_oracle.py: long-double sums, M = 50000, a = 0.1.
const SumReference kSums[] = {
    {0.5, {-4.739945104400645, -2.0780756037232506}, {-11.215333559558685, -0.23442439475742585}},
    {2.5, {0.8039147200360193, 0.499991327917332}, {1.2629832956443532, 8.67360235765926e-06}},
    {4.0, {3.3852381989609586, 0.4999956641486419}, {7.35218673212981, 4.337371119735893e-06}},
};

struct EigenReference {
  double k;
  double bc;
  std::complex<double> one;
  std::complex<double> two;
  double p_plus_one;
};

const EigenReference kEigen[] = {
    {0.5, 0.0, {-15.955278663959334, -2.812499998480677}, {6.475388455158036, -2.343651208965825}, 0.5},
    {0.5, 4.0, {-16.64698115238718, -2.798881837206249}, {7.167090943585892, -2.3572693702402527}, 0.3320971678905756},
    {2.5, 4.0, {-3.390739831295744, -1.1283648115604754e-05}, {4.99856927136778, -6.060517220448131e-06}, 0.02320269154072093},
    {4.0, 0.0, {-3.9669485331688494, -8.673222477852984e-06}, {10.737424931090768, 1.5197616187980233e-09}, 0.5},
    {4.0, 4.0, {-4.984627376070776, -8.145848318399736e-06}, {11.75510377399269, -5.258543978344486e-07}, 0.2610475362990666},
};

const LatticeSums& baseline_sums() {
  static const LatticeSums sums{ModelParams{}};
  return sums;
}

}  // namespace

TEST_CASE("lattice sums match the long-double oracle") {
  for (const auto& r : kSums) {
    CAPTURE(r.k);
    const auto [same, cross] = baseline_sums()(r.k);
    CHECK(std::abs(same - r.same) < 1e-11);
    CHECK(std::abs(cross - r.cross) < 1e-11);
  }
}

TEST_CASE("Bloch eigenpairs match the oracle") {
  for (const auto& r : kEigen) {
    CAPTURE(r.k);
    CAPTURE(r.bc);
    const auto pair = band_eigs(bloch_sum(baseline_sums(), r.k, r.bc));
    CHECK(pair[0].band == Band::I);
    CHECK(std::abs(pair[0].eigenvalue - r.one) < 1e-10);
    CHECK(std::abs(pair[1].eigenvalue - r.two) < 1e-10);
    CHECK(pair[0].p_plus == doctest::Approx(r.p_plus_one).epsilon(1e-9));
    for (const auto& point : pair) CHECK(std::abs(point.p_plus + point.p_minus - 1.0) < 1e-12);
  }
}

TEST_CASE("bands are even in k") {
  for (const double k : {0.3, 2.2, 4.9}) {
    const auto a = band_eigs(bloch_sum(baseline_sums(), k, 4.0));
    const auto b = band_eigs(bloch_sum(baseline_sums(), -k, 4.0));
    CHECK(a[0].eigenvalue == b[0].eigenvalue);
    CHECK(a[1].eigenvalue == b[1].eigenvalue);
  }
}

TEST_CASE("eigenvector phase convention") {
  const auto pair = band_eigs(bloch_sum(baseline_sums(), 3.0, 2.0));
  for (const auto& p : pair) {
    CHECK(p.eigenvector.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.eigenvector(0).imag() == 0.0);
    CHECK(p.eigenvector(0).real() > 0.0);
  }
}

TEST_CASE("truncation error shrinks with the cutoff") {
  auto eig = [](long cutoff) {
    ModelParams p;
    p.sum_cutoff = cutoff;
    return band_eigs(bloch_sum(LatticeSums(p), 2.5, 0.0));
  };
  const auto coarse = eig(25000);
  const auto mid = eig(50000);
  const auto fine = eig(100000);
  for (int b = 0; b < 2; ++b) {
    const double step_one = std::abs(mid[b].eigenvalue - coarse[b].eigenvalue);
    const double step_two = std::abs(fine[b].eigenvalue - mid[b].eigenvalue);
    CAPTURE(b);
    CHECK(step_two < 5e-5);
    CHECK(step_two < step_one);
  }
}

TEST_CASE("zone grid is symmetric and spans the zone") {
  const auto grid = zone_grid(ModelParams{}, 1001);
  REQUIRE(grid.size() == 1001);
  CHECK(grid.front() == -5.0);
  CHECK(grid.back() == 5.0);
  CHECK(grid[500] == 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(grid[i] == -grid[grid.size() - 1 - i]);
  CHECK_THROWS_AS(bloch_sum(testing::small_chain(), 5.5), ConfigError);
}

TEST_CASE("continuity labels follow the polarization through the crossing") {
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(1.5 + 0.01 * i);
  const auto follow = band_scan(baseline_sums(), 0.0, grid, Labeling::continuity);
  const auto energy = band_scan(baseline_sums(), 0.0, grid, Labeling::energy);
  // At zero field the eigenvectors are (1, 1) and (1, -1); continuity keeps
  // band I on the symmetric one across the degeneracy near 2.3.
  for (const auto& pair : follow) {
    CAPTURE(pair[0].k);
    CHECK(pair[0].eigenvector(1).real() > 0.7);
  }
  CHECK(energy.front()[0].eigenvector(1).real() > 0.7);
  CHECK(energy.back()[0].eigenvector(1).real() < -0.7);
}

TEST_CASE("band polarization scales the eigenvector") {
  const auto [plus, minus] = band_polarization(baseline_sums(), 1.5, 0.0, Band::I, 0.25);
  CHECK(std::norm(plus) + std::norm(minus) == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(std::abs(plus - minus) < 1e-12);
  const auto [p2, m2] = band_polarization(baseline_sums(), -0.5, 0.0, Band::II, 1.0);
  CHECK(std::abs(p2 + m2) < 1e-12);
}

TEST_CASE("bands CSV schema") {
  const double grid[] = {-1.0, 1.0};
  const auto scan = band_scan(baseline_sums(), 8.0, grid);
  std::ostringstream out;
  write_bands_csv(out, scan);
  const std::string text = out.str();
  CHECK(text.rfind("k_over_k0,band,re_ev,decay_rate,p_plus,p_minus\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
