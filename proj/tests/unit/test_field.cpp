#include <doctest.h>

#include "helpers.hpp"
#include "subrad/errors.hpp"
#include "subrad/field.hpp"

using namespace subrad;

TEST_CASE("model validation and site numbering") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.first_site() == -100);
  CHECK(p.site(200) == 100);
  CHECK(p.bloch_period() == doctest::Approx(10.0 * std::numbers::pi));
  CHECK(p.zone_edge() == doctest::Approx(5.0));

  ModelParams even = testing::small_chain(4);
  CHECK(even.first_site() == -2);
  ModelParams one = testing::small_chain(1);
  CHECK(one.first_site() == 0);

  ModelParams bad = p;
  bad.atom_count = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.spacing_over_lambda = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.sum_cutoff = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("zero point interpolates and clamps") {
  const FieldSchedule s(0.2, {{0, 0}, {20, 30}, {180, 30}, {200, 0}});
  CHECK(s.zero_point(-5) == 0.0);
  CHECK(s.zero_point(10) == doctest::Approx(15.0));
  CHECK(s.zero_point(100) == 30.0);
  CHECK(s.zero_point(190) == doctest::Approx(15.0));
  CHECK(s.zero_point(500) == 0.0);
  CHECK(s.constant_on(20, 180));
  CHECK_FALSE(s.constant_on(19, 21));
  CHECK(s.constant_on(200, 1e9));
}

TEST_CASE("segments alternate between ramps and frozen pieces") {
  const FieldSchedule s(0.2, {{0, 0}, {20, 30}, {180, 30}, {200, 0}});
  const auto seg = s.segments(0, 300);
  REQUIRE(seg.size() == 4);
  CHECK_FALSE(seg[0].constant);
  CHECK(seg[0].end == 20);
  CHECK(seg[1].constant);
  CHECK(seg[1].end == 180);
  CHECK_FALSE(seg[2].constant);
  CHECK(seg[3].constant);
  CHECK(seg[3].end == 300);

  const auto fixed = FieldSchedule::fixed(0.2, 3.0).segments(0, 50);
  REQUIRE(fixed.size() == 1);
  CHECK(fixed[0].constant);
}

TEST_CASE("knots must be strictly increasing") {
  CHECK_THROWS_AS(FieldSchedule(0.2, {}), ConfigError);
  CHECK_THROWS_AS(FieldSchedule(0.2, {{0, 0}, {0, 1}}), ConfigError);
  CHECK_THROWS_AS(FieldSchedule(0.2, {{5, 0}, {1, 1}}), ConfigError);
}

TEST_CASE("per-site field is linear in the site index") {
  const auto p = testing::small_chain(5);
  const auto b = field_at(FieldSchedule::fixed(0.2, 1.0), p, 0.0);
  REQUIRE(b.size() == 5);
  CHECK(b[0] == doctest::Approx(-0.6));
  CHECK(b[3] == doctest::Approx(0.0));
  CHECK(b[4] == doctest::Approx(0.2));
  for (const double v : uniform_field(p, 4.0)) CHECK(v == 4.0);
}
