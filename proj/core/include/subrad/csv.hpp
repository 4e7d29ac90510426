#pragma once

#include <iosfwd>
#include <span>

#include "subrad/analysis.hpp"
#include "subrad/state.hpp"

namespace subrad {

// Writers for the CSV products. Numbers are printed in shortest round-trip
// form, so identical inputs always give identical bytes.

/// t, P_plus, P_minus, P_t, n_bar, force, lc_fraction
void write_observables_csv(std::ostream& out, std::span<const Observables> rows);

/// Header for the spectral heatmap: t, k_over_k0, pI, pII, residual.
void write_spectrum_header(std::ostream& out);
void write_spectrum_rows(std::ostream& out, double t, std::span<const double> k_over_k0,
                         const BandProjection& projection);

/// t, then re/im of C_{+,n} and C_{-,n} interleaved in basis order.
void write_amplitudes_csv(std::ostream& out, std::span<const WavepacketState> states,
                          const ModelParams& params);

}  // namespace subrad
