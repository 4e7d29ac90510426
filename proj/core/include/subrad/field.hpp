#pragma once

#include <span>
#include <vector>

#include "subrad/model.hpp"

namespace subrad {

/// One knot of the zero-point trajectory n0(t).
struct Breakpoint {
  double t = 0.0;           ///< time, 1/gamma0
  double zero_point = 0.0;  ///< n0 in lattice sites

  bool operator==(const Breakpoint&) const = default;
};

/// Time interval on which the field is either frozen or ramping.
struct FieldSegment {
  double begin = 0.0;
  double end = 0.0;
  bool constant = true;
};

/// Linear Zeeman profile b_n(t) = (n - n0(t)) * b0 whose zero point follows a
/// piecewise-linear trajectory, clamped to the end values outside the knots.
class FieldSchedule {
 public:
  /// Throws ConfigError if the knot list is empty or times are not strictly
  /// increasing.
  FieldSchedule(double slope, std::vector<Breakpoint> zero_point);

  /// Static field with a fixed zero point.
  static FieldSchedule fixed(double slope, double zero_point = 0.0);

  [[nodiscard]] double slope() const { return slope_; }
  [[nodiscard]] const std::vector<Breakpoint>& breakpoints() const { return knots_; }

  [[nodiscard]] double zero_point(double t) const;

  /// True when n0 does not change anywhere in [t0, t1].
  [[nodiscard]] bool constant_on(double t0, double t1) const;

  /// Splits [t0, t1] at the knots; adjacent segments alternate between
  /// frozen and ramping pieces. Zero-length pieces are dropped.
  [[nodiscard]] std::vector<FieldSegment> segments(double t0, double t1) const;

  bool operator==(const FieldSchedule&) const = default;

 private:
  double slope_;
  std::vector<Breakpoint> knots_;
};

/// Per-site Zeeman shifts b_n(t) for the sites of `params`.
std::vector<double> field_at(const FieldSchedule& schedule, const ModelParams& params, double t);

/// Uniform shift, the same value on every site.
std::vector<double> uniform_field(const ModelParams& params, double value);

}  // namespace subrad
