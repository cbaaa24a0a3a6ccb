#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>

#include "jainops/accuracy.hpp"

namespace jainops {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;     // estimated absolute error
  double abs_value = 0.0; // estimate of ∫|g|
  std::size_t panels = 0;
};

/// Adaptive Gauss–Kronrod (7/15) integration of g over [a, b] ⊂ [0, ∞].
///
/// The interval is mapped to u = t/(1+t) so b = +∞ is allowed. Panels are
/// bisected worst-first until the summed error estimate is below
/// acc.quad_rel_eps · ∫|g|. `split_points` (in t) seed the initial panels;
/// pass kinks of g and the location of any sharp peak. Throws
/// QuadratureNoConvergence when acc.panel_cap panels are not enough.
QuadratureResult integrate(const std::function<double(double)>& g, double a, double b,
                           const Accuracy& acc, std::span<const double> split_points = {});

/// ∫₀^∞ g(t) dt. g must decay at least like t^{-2}.
double semiinf_quadrature(const std::function<double(double)>& g, const Accuracy& acc,
                          std::span<const double> split_points = {});

}  // namespace jainops
