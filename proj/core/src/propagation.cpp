#include "subrad/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#ifdef SUBRAD_HAVE_LAPACKE
#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#endif

#include "subrad/errors.hpp"

namespace subrad {
namespace {

constexpr std::complex<double> kMinusI{0.0, -1.0};
constexpr double kUnderflowExponent = -700.0;

void require_forward(double from, double to) {
  if (!(to >= from)) {
    throw ConfigError(fmt::format("cannot propagate backwards from t={} to t={}", from, to));
  }
}

void require_sorted(std::span<const double> times, double start) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw ConfigError("sample times must be finite");
    if (times[i] < start) {
      throw ConfigError(
          fmt::format("sample time {} precedes the initial state at t={}", times[i], start));
    }
    if (i > 0 && times[i] < times[i - 1]) {
      throw ConfigError(fmt::format("sample times must be increasing ({} after {})", times[i],
                                    times[i - 1]));
    }
  }
}

}  // namespace

// --- spectral ------------------------------------------------------------

SpectralDecomposition::SpectralDecomposition(const Eigen::MatrixXcd& matrix, double max_condition) {
#ifdef SUBRAD_HAVE_LAPACKE
  const auto n = static_cast<lapack_int>(matrix.rows());
  Eigen::MatrixXcd work = matrix;
  values_.resize(n);
  vectors_.resize(n, n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'V', n, reinterpret_cast<lapack_complex_double*>(work.data()), n,
      reinterpret_cast<lapack_complex_double*>(values_.data()), nullptr, 1,
      reinterpret_cast<lapack_complex_double*>(vectors_.data()), n);
  if (info != 0) throw NumericalError(fmt::format("zgeev failed (info = {})", info));
#else
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("complex eigensolver did not converge");
  }
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
#endif
  lu_.compute(vectors_);
  const double rcond = lu_.rcond();
  condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(condition_ <= max_condition)) {
    throw NumericalError(fmt::format(
        "eigenvector matrix is ill-conditioned (cond ~ {:.3e} > {:.1e})", condition_, max_condition));
  }
}

double SpectralDecomposition::max_imag() const { return values_.imag().maxCoeff(); }

Eigen::VectorXcd SpectralDecomposition::to_modal(const Eigen::VectorXcd& amplitudes) const {
  return lu_.solve(amplitudes);
}

Eigen::VectorXcd SpectralDecomposition::evolve_modal(const Eigen::VectorXcd& modal, double dt) const {
  Eigen::VectorXcd scaled(modal.size());
  for (Eigen::Index j = 0; j < modal.size(); ++j) {
    const double growth = values_(j).imag() * dt;
    scaled(j) = growth < kUnderflowExponent
                    ? std::complex<double>(0.0)
                    : modal(j) * std::polar(std::exp(growth), -values_(j).real() * dt);
  }
  return vectors_ * scaled;
}

double SpectralDecomposition::transpose_orthogonality_defect() const {
  const Eigen::MatrixXcd gram = vectors_.transpose() * vectors_;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = 0; j < gram.cols(); ++j) {
      if (i == j) continue;
      const double scale = std::sqrt(std::abs(gram(i, i)) * std::abs(gram(j, j)));
      worst = std::max(worst, std::abs(gram(i, j)) / scale);
    }
  }
  return worst;
}

WavepacketState eigen_propagate(const SpectralDecomposition& decomposition,
                                const WavepacketState& state, double t_target) {
  require_forward(state.t, t_target);
  if (t_target == state.t) return state;
  return {t_target,
          decomposition.evolve_modal(decomposition.to_modal(state.amplitudes), t_target - state.t)};
}

WavepacketState eigen_propagate(const EffectiveHamiltonian& hamiltonian,
                                const WavepacketState& state, double t_target) {
  return eigen_propagate(SpectralDecomposition(hamiltonian.matrix), state, t_target);
}

// --- stepping ------------------------------------------------------------

Stepper::Stepper(const ModelParams& params, FieldSchedule schedule, StepOptions options)
    : couplings_(coupling_matrix(params)),
      site_sign_(2 * params.atom_count),
      arm_sign_(2 * params.atom_count),
      schedule_(std::move(schedule)),
      options_(options) {
  if (!(options_.dt_max > 0.0)) throw ConfigError("dt_max must be positive");
  if (!(options_.local_tolerance > 0.0)) throw ConfigError("local tolerance must be positive");
  for (int i = 0; i < params.atom_count; ++i) {
    const double n = params.site(i);
    site_sign_(basis_index(i, Arm::plus)) = n;
    site_sign_(basis_index(i, Arm::minus)) = -n;
    arm_sign_(basis_index(i, Arm::plus)) = 1.0;
    arm_sign_(basis_index(i, Arm::minus)) = -1.0;
  }
}

void Stepper::derivative(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& out) const {
  out.noalias() = couplings_ * y;
  const double n0 = schedule_.zero_point(t);
  const double b0 = schedule_.slope();
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    out(i) += b0 * (site_sign_(i) - n0 * arm_sign_(i)) * y(i);
  }
  out *= kMinusI;
}

void Stepper::rk4(double t, double dt, const Eigen::VectorXcd& y, Eigen::VectorXcd& out) const {
  Eigen::VectorXcd k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
  derivative(t, y, k1);
  tmp = y + (0.5 * dt) * k1;
  derivative(t + 0.5 * dt, tmp, k2);
  tmp = y + (0.5 * dt) * k2;
  derivative(t + 0.5 * dt, tmp, k3);
  tmp = y + dt * k3;
  derivative(t + dt, tmp, k4);
  out = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void Stepper::controlled_step(double t, double dt, Eigen::VectorXcd& y) const {
  const double before = y.squaredNorm();
  Eigen::VectorXcd full(y.size());
  rk4(t, dt, y, full);
  if (!options_.error_control) {
    if (full.squaredNorm() > before + options_.norm_tolerance) {
      throw NumericalError(fmt::format(
          "norm grew by {:.3e} during RK4 step at t={} (dt={}); reduce dt_max",
          full.squaredNorm() - before, t, dt));
    }
    y = std::move(full);
    return;
  }
  Eigen::VectorXcd half(y.size()), twice(y.size());
  rk4(t, 0.5 * dt, y, half);
  rk4(t + 0.5 * dt, 0.5 * dt, half, twice);
  const double error = (twice - full).norm() / 15.0;
  if (error <= options_.local_tolerance) {
    if (twice.squaredNorm() > before + options_.norm_tolerance) {
      throw NumericalError(fmt::format("norm grew by {:.3e} during RK4 step at t={}",
                                       twice.squaredNorm() - before, t));
    }
    y = std::move(twice);
    return;
  }
  if (0.5 * dt < options_.dt_min) {
    throw NumericalError(fmt::format(
        "step size underflow at t={}: dt={:.3e} still gives local error {:.3e} > {:.1e}", t,
        0.5 * dt, error, options_.local_tolerance));
  }
  controlled_step(t, 0.5 * dt, y);
  controlled_step(t + 0.5 * dt, 0.5 * dt, y);
}

std::vector<WavepacketState> Stepper::march(const WavepacketState& state,
                                            std::span<const double> times) const {
  require_sorted(times, state.t);
  const double anchor = state.t;
  const double dt = options_.dt_max;
  const double slack = 1e-9 * dt;

  std::vector<WavepacketState> out;
  out.reserve(times.size());
  Eigen::VectorXcd y = state.amplitudes;
  long long index = 0;  // y lives at anchor + index * dt
  for (const double target : times) {
    const auto last = static_cast<long long>(std::floor((target - anchor + slack) / dt));
    for (; index < last; ++index) {
      controlled_step(anchor + static_cast<double>(index) * dt, dt, y);
    }
    const double grid_t = anchor + static_cast<double>(index) * dt;
    if (std::abs(target - grid_t) <= slack) {
      out.push_back({target, y});
      continue;
    }
    Eigen::VectorXcd partial = y;
    controlled_step(grid_t, target - grid_t, partial);
    out.push_back({target, std::move(partial)});
  }
  return out;
}

WavepacketState Stepper::advance(const WavepacketState& state, double t_target) const {
  require_forward(state.t, t_target);
  const double times[] = {t_target};
  return march(state, times).front();
}

WavepacketState step_propagate(const ModelParams& params, const FieldSchedule& schedule,
                               const WavepacketState& state, double t_target, StepOptions options) {
  return Stepper(params, schedule, options).advance(state, t_target);
}

// --- propagator ----------------------------------------------------------

namespace {
constexpr double kMaxSteps = 1e10;
}  // namespace

Propagator::Propagator(const ModelParams& params, FieldSchedule schedule, PropagatorOptions options)
    : params_(params),
      schedule_(std::move(schedule)),
      options_(options),
      stepper_(params, schedule_, options.step) {
  params_.validate();
  if (options_.method == Method::stepping) return;

  // Zero points of every frozen piece: the clamped ends and any run of
  // equal consecutive knots.
  const auto& knots = schedule_.breakpoints();
  std::set<double> frozen{knots.front().zero_point, knots.back().zero_point};
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i].zero_point == knots[i - 1].zero_point) frozen.insert(knots[i].zero_point);
  }
  for (const double n0 : frozen) {
    const FieldSchedule at_rest = FieldSchedule::fixed(schedule_.slope(), n0);
    const auto field = field_at(at_rest, params_, 0.0);
    try {
      spectral_[n0] = std::make_shared<const SpectralDecomposition>(
          build_hamiltonian(params_, field).matrix, options_.max_condition);
    } catch (const NumericalError& e) {
      spectral_[n0] = nullptr;
      warnings_.push_back(fmt::format(
          "spectral propagator unavailable for zero point {}: {}; falling back to RK4", n0,
          e.what()));
    }
  }
}

const SpectralDecomposition* Propagator::decomposition(double zero_point) const {
  const auto it = spectral_.find(zero_point);
  return it == spectral_.end() ? nullptr : it->second.get();
}

std::vector<WavepacketState> Propagator::sample(const WavepacketState& initial,
                                                std::span<const double> times) const {
  require_sorted(times, initial.t);
  if (initial.amplitudes.size() != 2 * params_.atom_count) {
    throw ConfigError(fmt::format("state has {} amplitudes, expected {}",
                                  initial.amplitudes.size(), 2 * params_.atom_count));
  }
  std::vector<WavepacketState> out;
  out.reserve(times.size());
  std::size_t next = 0;
  while (next < times.size() && times[next] == initial.t) {
    out.push_back(initial);
    ++next;
  }
  if (next == times.size()) return out;

  if (options_.method == Method::stepping) {
    auto rest = stepper_.march(initial, times.subspan(next));
    std::move(rest.begin(), rest.end(), std::back_inserter(out));
    return out;
  }

  WavepacketState current = initial;
  for (const FieldSegment& segment : schedule_.segments(initial.t, times.back())) {
    std::vector<double> inside;
    while (next < times.size() && times[next] <= segment.end) inside.push_back(times[next++]);

    const SpectralDecomposition* spectral =
        segment.constant ? decomposition(schedule_.zero_point(segment.begin)) : nullptr;
    if (options_.method == Method::spectral && !segment.constant) {
      throw ConfigError(fmt::format(
          "spectral propagation needs a frozen field, but the zero point moves during [{}, {}]",
          segment.begin, segment.end));
    }

    if (spectral == nullptr && options_.method == Method::spectral) {
      throw NumericalError(fmt::format("no spectral decomposition for the segment [{}, {}]",
                                       segment.begin, segment.end));
    }
    if (spectral == nullptr && (segment.end - segment.begin) / options_.step.dt_max > kMaxSteps) {
      throw NumericalError(fmt::format(
          "RK4 over [{}, {}] would take more than {:.0e} steps of {}", segment.begin,
          segment.end, kMaxSteps, options_.step.dt_max));
    }

    if (spectral != nullptr) {
      const Eigen::VectorXcd modal = spectral->to_modal(current.amplitudes);
      for (const double t : inside) out.push_back({t, spectral->evolve_modal(modal, t - segment.begin)});
      current = {segment.end, spectral->evolve_modal(modal, segment.end - segment.begin)};
    } else {
      inside.push_back(segment.end);
      auto snapshots = stepper_.march(current, inside);
      current = std::move(snapshots.back());
      snapshots.pop_back();
      std::move(snapshots.begin(), snapshots.end(), std::back_inserter(out));
    }
  }
  return out;
}

std::vector<WavepacketState> record_trajectory(const Propagator& propagator,
                                               const WavepacketState& initial,
                                               std::span<const double> sample_times) {
  return propagator.sample(initial, sample_times);
}

}  // namespace subrad
