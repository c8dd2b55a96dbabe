#pragma once

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace nilsym {

/// Tolerance policy shared by every numerical decision in the library.
/// The rank threshold is relative to the largest singular value so that
/// rank decisions are scale-free.
struct TolerancePolicy {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  double rank_tol_factor = 1e-12;

  /// Threshold below which a singular value counts as zero.
  double rank_threshold(int rows, int cols, double sigma_max) const {
    return rank_tol_factor * static_cast<double>(std::max(rows, cols)) * sigma_max;
  }

  void validate() const {
    if (abs_tol <= 0.0 || rel_tol <= 0.0 || rank_tol_factor <= 0.0)
      throw std::invalid_argument("TolerancePolicy fields must be strictly positive");
  }

  /// Default policy, honoring the NILSYM_TOL environment override for abs_tol.
  static TolerancePolicy from_env() {
    TolerancePolicy tol;
    if (const char* s = std::getenv("NILSYM_TOL")) {
      char* end = nullptr;
      const double v = std::strtod(s, &end);
      if (end != s && v > 0.0) tol.abs_tol = v;
    }
    return tol;
  }
};

}  // namespace nilsym
