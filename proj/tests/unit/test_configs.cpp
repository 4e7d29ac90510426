#include <doctest.h>

#include "helpers.hpp"
#include "subrad/scenario.hpp"
#include "subrad/sweep.hpp"

using namespace subrad;

namespace {

std::filesystem::path config(const char* name) {
  return std::filesystem::path(SUBRAD_CONFIG_DIR) / (std::string(name) + ".json");
}

}  // namespace

TEST_CASE("bundled configs load") {
  for (const char* name : {"fig2_left", "fig2_right", "fig3_left", "fig3_right", "superradiant",
                           "supp_kc4_antisym", "supp_kc2_antisym"}) {
    CAPTURE(name);
    const auto c = load_scenario(config(name));
    CHECK(c.name == name);
    CHECK(parse_scenario(to_json(c)) == c);
  }
  const auto bands = load_bands(config("fig1_bands"));
  CHECK(bands.constant_fields == std::vector<double>{0, 4, 8, 12});
  const auto sweep = load_sweep(config("kc_sweep"));
  CHECK(sweep.axes.front().values().size() == 61);
}

TEST_CASE("fig3_right ramps the zero point out and back") {
  const auto s = load_scenario(config("fig3_right")).schedule();
  CHECK(s.zero_point(20) == 30.0);
  CHECK(s.zero_point(180) == 30.0);
  CHECK(s.zero_point(200) == 0.0);
}

TEST_CASE("antisymmetric packets barely decay") {
  for (const char* name : {"supp_kc4_antisym", "supp_kc2_antisym"}) {
    CAPTURE(name);
    auto c = load_scenario(config(name));
    c.analyses.spectrum = false;
    c.sampling.count = 41;
    const auto r = simulate(c);
    const double start = r.observables.front().p_total;
    const double end = r.observables.back().p_total;
    CHECK(end / start > 0.9);
  }
}
