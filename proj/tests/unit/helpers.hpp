#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "subrad/model.hpp"

namespace testing {

/// Small chain that keeps the dense linear algebra cheap.
inline subrad::ModelParams small_chain(int atoms = 21, long cutoff = 2000) {
  subrad::ModelParams p;
  p.atom_count = atoms;
  p.sum_cutoff = cutoff;
  return p;
}

inline double rel_diff(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("subrad_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace testing
