#include <doctest.h>

#include <numbers>

#include "helpers.hpp"
#include "subrad/analysis.hpp"
#include "subrad/errors.hpp"

using namespace subrad;

namespace {

// Plane wave on the grid momentum k_j with fixed arm amplitudes.
WavepacketState plane_wave(const ModelParams& p, double k, std::complex<double> a_plus,
                           std::complex<double> a_minus) {
  WavepacketState s{0.0, Eigen::VectorXcd::Zero(2 * p.atom_count)};
  for (int i = 0; i < p.atom_count; ++i) {
    const auto phase = std::polar(1.0, k * p.k0a() * p.site(i)) / std::sqrt(double(p.atom_count));
    s.amplitudes(2 * i) = a_plus * phase;
    s.amplitudes(2 * i + 1) = a_minus * phase;
  }
  return s;
}

}  // namespace

TEST_CASE("populations, position and force") {
  const auto p = testing::small_chain(5);
  WavepacketState s{0.0, Eigen::VectorXcd::Zero(10)};
  s.amplitudes(2 * 4) = 0.6;       // + arm, site 2
  s.amplitudes(2 * 0 + 1) = 0.8;   // - arm, site -2
  const auto pop = populations(s);
  CHECK(pop.plus == doctest::Approx(0.36));
  CHECK(pop.minus == doctest::Approx(0.64));
  CHECK(mean_position(s, p) == doctest::Approx((0.36 * 2 - 0.64 * 2) / 1.0));
  CHECK(force_expectation(s, 0.2, 0.1) == doctest::Approx(2.0 * (0.36 - 0.64)));

  WavepacketState empty{0.0, Eigen::VectorXcd::Zero(10)};
  CHECK_THROWS_AS((void)mean_position(empty, p), DomainError);
  const auto o = observe(empty, p);
  CHECK(std::isnan(o.n_bar));
  CHECK(std::isnan(o.lightcone));
}

TEST_CASE("momentum grid and Parseval") {
  const ModelParams p;
  const auto grid = spectrum_grid(p);
  REQUIRE(grid.size() == 201);
  CHECK(grid[100] == 0.0);
  CHECK(grid.front() == doctest::Approx(-100.0 / 20.1));
  CHECK(grid[1] - grid[0] == doctest::Approx(1.0 / 20.1));

  GaussianSpec g;
  g.momentum_over_k0 = 2.7;
  g.center_site = -13;
  g.psi_plus = {0.1, 0.2};
  g.psi_minus = -0.3;
  const auto s = gaussian_initial(g, p);
  const auto spec = momentum_spectrum(s, p);
  CHECK(std::abs(spec.total() - s.norm_squared()) < 1e-12 * s.norm_squared());
  CHECK(peak_momentum(spec, p) == doctest::Approx(2.7).epsilon(0.01));
  CHECK(momentum_centroid(spec, p) == doctest::Approx(2.7).epsilon(0.01));
}

TEST_CASE("plane waves land in a single bin") {
  const ModelParams p;
  const auto grid = spectrum_grid(p);
  const double k = grid[130];
  const auto spec = momentum_spectrum(plane_wave(p, k, 1.0, 0.0), p);
  CHECK(spec.weight(130) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(peak_momentum(spec, p) == doctest::Approx(k).epsilon(1e-12));
  CHECK(lightcone_fraction(spec) < 1e-20);
  const auto inside = momentum_spectrum(plane_wave(p, grid[110], 1.0, 0.0), p);
  CHECK(lightcone_fraction(inside) == doctest::Approx(1.0));
}

TEST_CASE("single-band states project exactly") {
  ModelParams p;
  p.sum_cutoff = 5000;
  const LatticeSums sums(p);
  const auto grid = spectrum_grid(p);
  const BlochTable table(sums, grid);
  for (const std::size_t j : {20u, 140u, 190u}) {
    for (const Band band : {Band::I, Band::II}) {
      CAPTURE(j);
      const double field = 1.3;
      const auto pair = band_eigs(table.at(j, field));
      const auto& v = pair[band == Band::I ? 0 : 1].eigenvector;
      const auto spec = momentum_spectrum(plane_wave(p, grid[j], v(0), v(1)), p);
      const auto proj = band_projection(spec, table, field);
      const double own = band == Band::I ? proj.p_one[j] : proj.p_two[j];
      const double other = band == Band::I ? proj.p_two[j] : proj.p_one[j];
      CHECK(own == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(other < 1e-20);
      CHECK(std::abs(proj.residual[j]) <= 1e-10);
    }
  }
}

TEST_CASE("reversal times skip exact zeros") {
  std::vector<Observables> rows;
  const double diffs[] = {0.0, 0.2, 0.1, -0.3, -0.1, 0.0, 0.1};
  for (int i = 0; i < 7; ++i) rows.push_back({double(i), 0.5 + diffs[i] / 2, 0.5 - diffs[i] / 2});
  const auto r = reversal_times(rows);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(2.25));
  CHECK(r[1] == doctest::Approx(5.0));
}

TEST_CASE("decay fit recovers an exponential") {
  std::vector<double> t, pt;
  for (int i = 0; i <= 50; ++i) {
    t.push_back(0.1 * i);
    pt.push_back(0.9 * std::exp(-4.7 * t.back()));
  }
  const auto fit = decay_fit(t, pt, 0.0, 5.0);
  CHECK(fit.rate == doctest::Approx(4.7).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
  CHECK(decay_fit(t, pt, 1.0, 2.0).samples == 11);
  pt[3] = 0.0;
  CHECK_THROWS_AS((void)decay_fit(t, pt, 0.0, 5.0), DomainError);
  CHECK_THROWS_AS((void)decay_fit(t, pt, 4.95, 5.0), DomainError);
}

TEST_CASE("plateau staircase") {
  std::vector<double> t, pt;
  for (int i = 0; i <= 300; ++i) {
    const double x = 0.1 * i;
    t.push_back(x);
    const double step = 1.0 / (1.0 + std::exp(-(x - 10) * 5)) + 1.0 / (1.0 + std::exp(-(x - 20) * 5));
    pt.push_back(1.0 - 0.2 * step);
  }
  const auto plateaus = plateau_detect(t, pt);
  REQUIRE(plateaus.size() == 3);
  CHECK(plateaus[0].level == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(plateaus[1].level == doctest::Approx(0.8).epsilon(1e-3));
  CHECK(plateaus[2].level == doctest::Approx(0.6).epsilon(1e-3));
  CHECK(plateaus[1].start > 10.0);
  CHECK(plateaus[1].end < 20.0);
}

TEST_CASE("turning points unwrap across the zone edge") {
  const ModelParams p;
  std::vector<double> t, k;
  // Drifts up through +5 -> -5 and turns at -4 (unwrapped 6), then comes back.
  for (int i = 0; i <= 100; ++i) {
    t.push_back(i);
    const double u = i <= 50 ? 3.0 + 3.0 * i / 50.0 : 6.0 - 4.0 * (i - 50) / 50.0;
    double w = std::remainder(u, 10.0);
    k.push_back(w);
  }
  const auto turns = momentum_turning_points(t, k, p, 0.2);
  REQUIRE(turns.size() == 1);
  CHECK(turns[0].t == 50.0);
  CHECK(turns[0].k_over_k0 == doctest::Approx(-4.0));
}
