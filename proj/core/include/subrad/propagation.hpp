#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subrad/field.hpp"
#include "subrad/hamiltonian.hpp"
#include "subrad/model.hpp"
#include "subrad/state.hpp"

namespace subrad {

/// H = V diag(lambda) V^{-1} for a static Hamiltonian. V^{-1} is applied via
/// an LU solve; the complex-symmetric identity V^T V = diagonal is only
/// checked, never assumed.
class SpectralDecomposition {
 public:
  /// Throws NumericalError if the eigensolver fails or the estimated
  /// condition number of V exceeds `max_condition`.
  explicit SpectralDecomposition(const Eigen::MatrixXcd& matrix, double max_condition = 1e12);

  [[nodiscard]] const Eigen::VectorXcd& eigenvalues() const { return values_; }
  [[nodiscard]] const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }
  [[nodiscard]] double condition_estimate() const { return condition_; }

  /// Largest Im(lambda); <= 0 for a passive system.
  [[nodiscard]] double max_imag() const;

  /// Coefficients of `amplitudes` in the eigenbasis.
  [[nodiscard]] Eigen::VectorXcd to_modal(const Eigen::VectorXcd& amplitudes) const;

  /// V exp(-i Lambda dt) modal. Factors with Im(lambda)*dt < -700 are
  /// flushed to zero.
  [[nodiscard]] Eigen::VectorXcd evolve_modal(const Eigen::VectorXcd& modal, double dt) const;

  /// Off-diagonal mass of V^T V after normalising by its diagonal.
  [[nodiscard]] double transpose_orthogonality_defect() const;

 private:
  Eigen::VectorXcd values_;
  Eigen::MatrixXcd vectors_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  double condition_ = 0.0;
};

/// C(t) = V exp(-i Lambda (t - t0)) V^{-1} C(t0). Throws ConfigError if
/// t_target < state.t.
WavepacketState eigen_propagate(const SpectralDecomposition& decomposition,
                                const WavepacketState& state, double t_target);
WavepacketState eigen_propagate(const EffectiveHamiltonian& hamiltonian,
                                const WavepacketState& state, double t_target);

struct StepOptions {
  double dt_max = 1e-3;           ///< 1/gamma0; also the grid spacing of the march
  bool error_control = false;     ///< step-doubling with local_tolerance
  double local_tolerance = 1e-9;
  double dt_min = 1e-9;           ///< step underflow threshold
  double norm_tolerance = 1e-9;   ///< allowed per-step growth of the norm
};

/// Classic RK4 for dC/dt = -i H(t) C, where only the Zeeman diagonal of H
/// follows the schedule. Steps lie on the grid anchor + k * dt_max so the
/// result at a given time does not depend on which intermediate times were
/// requested.
class Stepper {
 public:
  Stepper(const ModelParams& params, FieldSchedule schedule, StepOptions options = {});

  /// Advances from `state` (the grid anchor) through every time in `times`
  /// (non-decreasing, >= state.t) and returns one snapshot per time.
  [[nodiscard]] std::vector<WavepacketState> march(const WavepacketState& state,
                                                   std::span<const double> times) const;

  [[nodiscard]] WavepacketState advance(const WavepacketState& state, double t_target) const;

  [[nodiscard]] const StepOptions& options() const { return options_; }

 private:
  void derivative(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& out) const;
  void rk4(double t, double dt, const Eigen::VectorXcd& y, Eigen::VectorXcd& out) const;
  void controlled_step(double t, double dt, Eigen::VectorXcd& y) const;

  Eigen::MatrixXcd couplings_;
  Eigen::VectorXd site_sign_;   // s_alpha * n
  Eigen::VectorXd arm_sign_;    // s_alpha
  FieldSchedule schedule_;
  StepOptions options_;
};

WavepacketState step_propagate(const ModelParams& params, const FieldSchedule& schedule,
                               const WavepacketState& state, double t_target,
                               StepOptions options = {});

enum class Method {
  automatic,  ///< spectral on frozen-field segments, RK4 on ramps
  spectral,   ///< requires a frozen field over the whole run
  stepping,   ///< RK4 everywhere
};

struct PropagatorOptions {
  Method method = Method::automatic;
  StepOptions step;
  double max_condition = 1e12;
};

/// Evolves wavepackets for one model and field schedule. All spectral
/// decompositions the schedule needs are built in the constructor, so a
/// constructed Propagator is immutable and may be shared between threads.
class Propagator {
 public:
  Propagator(const ModelParams& params, FieldSchedule schedule, PropagatorOptions options = {});

  /// Snapshots at each requested time. Times must be non-decreasing and not
  /// earlier than initial.t. Throws NumericalError when stepping breaks down.
  [[nodiscard]] std::vector<WavepacketState> sample(const WavepacketState& initial,
                                                    std::span<const double> times) const;

  /// Non-fatal notes, e.g. fallback from spectral to stepping.
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }

  /// Decomposition used on segments where n0 equals `zero_point`, or null if
  /// that segment falls back to stepping.
  [[nodiscard]] const SpectralDecomposition* decomposition(double zero_point) const;

  [[nodiscard]] const PropagatorOptions& options() const { return options_; }
  [[nodiscard]] const ModelParams& params() const { return params_; }
  [[nodiscard]] const FieldSchedule& schedule() const { return schedule_; }

 private:
  ModelParams params_;
  FieldSchedule schedule_;
  PropagatorOptions options_;
  Stepper stepper_;
  std::map<double, std::shared_ptr<const SpectralDecomposition>> spectral_;
  std::vector<std::string> warnings_;
};

/// Snapshots at `sample_times`; a sample equal to initial.t returns the
/// initial state unchanged. Throws ConfigError for decreasing times.
std::vector<WavepacketState> record_trajectory(const Propagator& propagator,
                                               const WavepacketState& initial,
                                               std::span<const double> sample_times);

}  // namespace subrad
