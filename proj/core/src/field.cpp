#include "subrad/field.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "subrad/errors.hpp"

namespace subrad {

FieldSchedule::FieldSchedule(double slope, std::vector<Breakpoint> zero_point)
    : slope_(slope), knots_(std::move(zero_point)) {
  if (knots_.empty()) {
    throw ConfigError("field.zero_point needs at least one breakpoint");
  }
  if (!std::isfinite(slope_)) {
    throw ConfigError("field slope must be finite");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].t) || !std::isfinite(knots_[i].zero_point)) {
      throw ConfigError(fmt::format("field.zero_point[{}] is not finite", i));
    }
    if (i > 0 && !(knots_[i].t > knots_[i - 1].t)) {
      throw ConfigError(fmt::format(
          "field.zero_point times must be strictly increasing (entry {} at t={} follows t={})", i,
          knots_[i].t, knots_[i - 1].t));
    }
  }
}

FieldSchedule FieldSchedule::fixed(double slope, double zero_point) {
  return FieldSchedule(slope, {Breakpoint{0.0, zero_point}});
}

double FieldSchedule::zero_point(double t) const {
  if (t <= knots_.front().t) return knots_.front().zero_point;
  if (t >= knots_.back().t) return knots_.back().zero_point;
  const auto upper = std::upper_bound(knots_.begin(), knots_.end(), t,
                                      [](double v, const Breakpoint& b) { return v < b.t; });
  const auto lower = upper - 1;
  const double w = (t - lower->t) / (upper->t - lower->t);
  return lower->zero_point + w * (upper->zero_point - lower->zero_point);
}

bool FieldSchedule::constant_on(double t0, double t1) const {
  const double reference = zero_point(t0);
  if (zero_point(t1) != reference) return false;
  for (const auto& knot : knots_) {
    if (knot.t > t0 && knot.t < t1 && knot.zero_point != reference) return false;
  }
  return true;
}

std::vector<FieldSegment> FieldSchedule::segments(double t0, double t1) const {
  std::vector<double> cuts{t0};
  for (const auto& knot : knots_) {
    if (knot.t > t0 && knot.t < t1) cuts.push_back(knot.t);
  }
  cuts.push_back(t1);

  std::vector<FieldSegment> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    const bool frozen = constant_on(cuts[i], cuts[i + 1]);
    if (!out.empty() && out.back().constant && frozen &&
        zero_point(out.back().begin) == zero_point(cuts[i])) {
      out.back().end = cuts[i + 1];
      continue;
    }
    out.push_back({cuts[i], cuts[i + 1], frozen});
  }
  return out;
}

std::vector<double> field_at(const FieldSchedule& schedule, const ModelParams& params, double t) {
  const double n0 = schedule.zero_point(t);
  std::vector<double> field(static_cast<std::size_t>(params.atom_count));
  for (int i = 0; i < params.atom_count; ++i) {
    field[static_cast<std::size_t>(i)] = (params.site(i) - n0) * schedule.slope();
  }
  return field;
}

std::vector<double> uniform_field(const ModelParams& params, double value) {
  return std::vector<double>(static_cast<std::size_t>(params.atom_count), value);
}

}  // namespace subrad
