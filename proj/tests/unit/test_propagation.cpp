#include <doctest.h>

#include "helpers.hpp"
#include "subrad/errors.hpp"
#include "subrad/field.hpp"
#include "subrad/propagation.hpp"

using namespace subrad;

namespace {

WavepacketState packet(const ModelParams& p, double kc = 1.5) {
  GaussianSpec g;
  g.momentum_over_k0 = kc;
  g.psi_plus = 0.168;
  g.psi_minus = 0.168;
  g.width = 20;
  return gaussian_initial(g, p);
}

}  // namespace

TEST_CASE("single atom decays as exp(-t)") {
  const auto p = testing::small_chain(1);
  WavepacketState s{0.0, Eigen::VectorXcd::Zero(2)};
  s.amplitudes(0) = 1.0;
  const auto schedule = FieldSchedule::fixed(p.zeeman_slope);
  std::vector<double> times;
  for (int i = 1; i <= 20; ++i) times.push_back(i);

  for (const Method m : {Method::spectral, Method::stepping}) {
    const Propagator prop(p, schedule, {m, {}, 1e12});
    const auto out = prop.sample(s, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(std::abs(out[i].norm_squared() - std::exp(-times[i])) < 1e-12);
    }
  }
}

TEST_CASE("spectral decomposition of a chain") {
  const auto p = testing::small_chain(31);
  const auto h = build_hamiltonian(p, field_at(FieldSchedule::fixed(p.zeeman_slope), p, 0.0));
  const SpectralDecomposition d(h.matrix);
  CHECK(d.max_imag() <= 0.0);
  CHECK(d.condition_estimate() < 1e6);
  CHECK(d.transpose_orthogonality_defect() < 1e-8);
  const Eigen::MatrixXcd rebuilt = d.eigenvectors() * d.eigenvalues().asDiagonal() *
                                   d.eigenvectors().inverse();
  CHECK((rebuilt - h.matrix).norm() / h.matrix.norm() < 1e-12);
  CHECK_THROWS_AS(SpectralDecomposition(h.matrix, 1.0), NumericalError);
}

TEST_CASE("spectral and RK4 propagation agree") {
  const auto p = testing::small_chain(41);
  const auto schedule = FieldSchedule::fixed(p.zeeman_slope, 2.0);
  const auto s = packet(p);
  const auto a = eigen_propagate(build_hamiltonian(p, field_at(schedule, p, 0.0)), s, 3.0);
  const auto b = step_propagate(p, schedule, s, 3.0);
  CHECK((a.amplitudes - b.amplitudes).norm() < 1e-9);
  CHECK(a.t == 3.0);
}

TEST_CASE("RK4 results do not depend on the requested sample times") {
  const auto p = testing::small_chain(21);
  const Stepper stepper(p, FieldSchedule(p.zeeman_slope, {{0, 0}, {1, 3}}), {.dt_max = 0.01});
  const auto s = packet(p);
  const double dense[] = {0.123, 0.5, 0.77, 1.0, 1.5};
  const double sparse[] = {1.5};
  const auto a = stepper.march(s, dense);
  const auto b = stepper.march(s, sparse);
  CHECK(a.back().amplitudes == b.back().amplitudes);
}

TEST_CASE("hybrid propagation matches stepping through a ramp") {
  const auto p = testing::small_chain(21);
  const FieldSchedule schedule(p.zeeman_slope, {{0, 0}, {1, 2}, {3, 2}, {3.5, 0}});
  const auto s = packet(p);
  const double times[] = {0.5, 2.0, 3.2, 5.0};
  StepOptions step;
  step.dt_max = 1e-3;
  const auto hybrid = Propagator(p, schedule, {Method::automatic, step, 1e12}).sample(s, times);
  const auto rk = Propagator(p, schedule, {Method::stepping, step, 1e12}).sample(s, times);
  for (std::size_t i = 0; i < hybrid.size(); ++i) {
    CAPTURE(times[i]);
    CHECK(hybrid[i].t == times[i]);
    CHECK((hybrid[i].amplitudes - rk[i].amplitudes).norm() < 1e-9);
  }
}

TEST_CASE("norm never grows") {
  const auto p = testing::small_chain(41);
  const auto s = packet(p, 4.0);
  std::vector<double> times;
  for (int i = 0; i <= 100; ++i) times.push_back(0.5 * i);
  const auto out = Propagator(p, FieldSchedule::fixed(p.zeeman_slope)).sample(s, times);
  for (std::size_t i = 1; i < out.size(); ++i) {
    CHECK(out[i].norm_squared() <= out[i - 1].norm_squared() * (1 + 1e-12));
  }
}

TEST_CASE("error control reaches the same answer") {
  const auto p = testing::small_chain(21);
  const auto schedule = FieldSchedule::fixed(p.zeeman_slope);
  const auto s = packet(p);
  StepOptions controlled;
  controlled.dt_max = 0.05;
  controlled.error_control = true;
  controlled.local_tolerance = 1e-12;
  const auto a = step_propagate(p, schedule, s, 2.0, controlled);
  const auto b = eigen_propagate(build_hamiltonian(p, field_at(schedule, p, 0.0)), s, 2.0);
  CHECK((a.amplitudes - b.amplitudes).norm() < 1e-8);
}

TEST_CASE("propagator contracts") {
  const auto p = testing::small_chain(11);
  const auto s = packet(p);
  const Propagator prop(p, FieldSchedule::fixed(p.zeeman_slope));
  const double backwards[] = {1.0, 0.5};
  CHECK_THROWS_AS((void)prop.sample(s, backwards), ConfigError);
  const double same[] = {0.0};
  CHECK(prop.sample(s, same).front().amplitudes == s.amplitudes);

  const FieldSchedule ramp(p.zeeman_slope, {{0, 0}, {1, 1}});
  const Propagator spectral_only(p, ramp, {Method::spectral, {}, 1e12});
  const double through[] = {2.0};
  CHECK_THROWS_AS((void)spectral_only.sample(s, through), ConfigError);

  StepOptions unstable;
  unstable.dt_max = 0.5;
  const double later[] = {5.0};
  CHECK_THROWS_AS((void)Propagator(p, ramp, {Method::stepping, unstable, 1e12}).sample(s, later),
                  NumericalError);
}

TEST_CASE("failed decompositions fall back to stepping with a warning") {
  const auto p = testing::small_chain(11);
  const Propagator prop(p, FieldSchedule::fixed(p.zeeman_slope), {Method::automatic, {}, 1.0});
  CHECK(prop.decomposition(0.0) == nullptr);
  REQUIRE(prop.warnings().size() == 1);
  const double soon[] = {0.5};
  CHECK(prop.sample(packet(p), soon).size() == 1);
  const double far[] = {1e12};
  CHECK_THROWS_AS((void)prop.sample(packet(p), far), NumericalError);
}
