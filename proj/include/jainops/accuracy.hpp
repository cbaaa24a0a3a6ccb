#pragma once

#include <cstddef>

namespace jainops {

/// Numerical tolerances shared by the series and quadrature paths.
struct Accuracy {
  double series_eps = 1e-13;    // tail mass left over by the truncated Jain series
  double quad_rel_eps = 1e-11;  // relative tolerance of each weighted integral
  std::size_t v_cap = 1'000'000;
  std::size_t panel_cap = 4000;

  /// Splits a total tolerance evenly between series and quadrature.
  static Accuracy with_budget(double tolerance);

  /// Throws DomainError when a field is out of range.
  void validate() const;
};

}  // namespace jainops
