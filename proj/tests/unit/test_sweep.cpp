#include <doctest.h>

#include "helpers.hpp"
#include "subrad/errors.hpp"
#include "subrad/sweep.hpp"

using namespace subrad;

namespace {

const char* kSweep = R"({
  "name": "tiny",
  "base": {
    "model": {"atom_count": 21, "sum_cutoff": 2000},
    "initial": {"momentum_over_k0": 2.0, "band": "I", "amplitude": 0.3, "width_sites2": 20}
  },
  "axes": [{"parameter": "momentum_over_k0", "start": 1.5, "stop": 3.0, "step": 0.5}],
  "horizon_inv_gamma0": 1e4,
  "per_decade": 3
})";

}  // namespace

TEST_CASE("axis values include the end point") {
  const SweepAxis axis{"momentum_over_k0", 1.5, 4.5, 0.05};
  const auto v = axis.values();
  REQUIRE(v.size() == 61);
  CHECK(v.back() == doctest::Approx(4.5));
  CHECK_THROWS_AS((void)SweepAxis({"momentum_over_k0", 1.0, 2.0, -0.1}).values(), ConfigError);
}

TEST_CASE("sweep spec validation") {
  const auto s = parse_sweep(kSweep);
  CHECK(s.axes.size() == 1);
  CHECK(s.base.sampling.spacing == SamplingSpec::Spacing::log);
  auto bad = std::string(kSweep);
  bad.replace(bad.find("\"momentum_over_k0\", \"start\""), 18, "\"bogus\"");
  CHECK_THROWS_AS(parse_sweep(bad), ConfigError);
  auto sampled = std::string(kSweep);
  sampled.replace(sampled.find("\"initial\""), 9, "\"sampling\": {}, \"initial\"");
  CHECK_THROWS_AS(parse_sweep(sampled), ConfigError);
}

TEST_CASE("worker count does not change results") {
  const auto s = parse_sweep(kSweep);
  const auto one = run_sweep(s, 1);
  const auto two = run_sweep(s, 2);
  REQUIRE(one.rows.size() == 4);
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(one.rows[i].error.empty());
    CHECK(one.rows[i].coordinates == two.rows[i].coordinates);
    CHECK(one.rows[i].fitted_rate == two.rows[i].fitted_rate);
    CHECK(one.rows[i].p_total_at_horizon == two.rows[i].p_total_at_horizon);
  }
  CHECK(one.best == two.best);

  const auto a = testing::scratch_dir("sweep_a");
  const auto b = testing::scratch_dir("sweep_b");
  write_sweep(s, one, a);
  write_sweep(s, two, b);
  CHECK(testing::slurp(a / "sweep.csv") == testing::slurp(b / "sweep.csv"));
  CHECK(testing::slurp(a / "manifest.json") == testing::slurp(b / "manifest.json"));
}

TEST_CASE("a one-point sweep equals the scenario run") {
  auto text = std::string(kSweep);
  text.replace(text.find("\"stop\": 3.0"), 11, "\"stop\": 1.5");
  const auto s = parse_sweep(text);
  const auto sweep = run_sweep(s, 1);
  REQUIRE(sweep.rows.size() == 1);
  const double coords[] = {1.5};
  const auto single = simulate(s.point(coords));
  REQUIRE(single.fit.has_value());
  CHECK(sweep.rows[0].fitted_rate == single.fit->rate);
  CHECK(sweep.rows[0].p_total_at_horizon == single.observables.back().p_total);
}

TEST_CASE("point failures are recorded and the sweep continues") {
  auto text = std::string(kSweep);
  text.replace(text.find("\"stop\": 3.0"), 11, "\"stop\": 6.0");
  const auto s = parse_sweep(text);
  const auto r = run_sweep(s, 2);
  REQUIRE(r.rows.size() == 10);
  CHECK(r.rows[6].error.empty());
  CHECK(r.rows[8].error.find("momentum_over_k0") != std::string::npos);
  CHECK(r.rows[9].error.find("momentum_over_k0") != std::string::npos);
  REQUIRE(r.best.has_value());
  CHECK(*r.best < 8);
}
