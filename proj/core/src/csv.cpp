#include "subrad/csv.hpp"

#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "subrad/hamiltonian.hpp"

namespace subrad {

void write_observables_csv(std::ostream& out, std::span<const Observables> rows) {
  out << "t,P_plus,P_minus,P_t,n_bar,force,lc_fraction\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{},{},{}\n", r.t, r.p_plus, r.p_minus, r.p_total, r.n_bar, r.force,
               r.lightcone);
  }
}

void write_spectrum_header(std::ostream& out) { out << "t,k_over_k0,pI,pII,residual\n"; }

void write_spectrum_rows(std::ostream& out, double t, std::span<const double> k_over_k0,
                         const BandProjection& projection) {
  for (std::size_t j = 0; j < k_over_k0.size(); ++j) {
    fmt::print(out, "{},{},{},{},{}\n", t, k_over_k0[j], projection.p_one[j], projection.p_two[j],
               projection.residual[j]);
  }
}

void write_amplitudes_csv(std::ostream& out, std::span<const WavepacketState> states,
                          const ModelParams& params) {
  out << "t";
  for (int i = 0; i < params.atom_count; ++i) {
    const int n = params.site(i);
    fmt::print(out, ",re_plus_{0},im_plus_{0},re_minus_{0},im_minus_{0}", n);
  }
  out << '\n';
  for (const auto& s : states) {
    fmt::print(out, "{}", s.t);
    for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) {
      fmt::print(out, ",{},{}", s.amplitudes(i).real(), s.amplitudes(i).imag());
    }
    out << '\n';
  }
}

}  // namespace subrad
