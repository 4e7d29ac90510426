#include "subrad/model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "subrad/errors.hpp"

namespace subrad {

void ModelParams::validate() const {
  if (!(spacing_over_lambda > 0.0) || !std::isfinite(spacing_over_lambda)) {
    throw ConfigError(
        fmt::format("model.spacing_over_lambda must be positive, got {}", spacing_over_lambda));
  }
  if (atom_count < 1) {
    throw ConfigError(fmt::format("model.atom_count must be >= 1, got {}", atom_count));
  }
  if (sum_cutoff < 1) {
    throw ConfigError(fmt::format("model.sum_cutoff must be >= 1, got {}", sum_cutoff));
  }
  if (!std::isfinite(zeeman_slope) || !std::isfinite(constant_field)) {
    throw ConfigError("model field strengths must be finite");
  }
}

}  // namespace subrad
