#pragma once

#include <cstddef>
#include <cstdint>

#include "jainops/accuracy.hpp"

namespace jainops {

/// Arguments of the Jain (generalized Poisson) weight ω_μ(v, a) with a = n·x.
struct JainWeightArgs {
  double a = 1.0;
  double mu = 0.0;
  std::uint64_t v = 0;
};

/// Arguments of the Baskakov weight p_{shape,v}(t, c).
///
/// `shape` is the n-slot of the basis: the integer n - r for the classical
/// kernel and n - r·c for the c-generalized one. The weight is
///   Γ(shape/c + v) / (Γ(shape/c) v!) · (ct)^v / (1 + ct)^{shape/c + v},
/// which is the negative binomial pmf of v with size shape/c and success
/// probability 1/(1 + ct).
struct BaskakovArgs {
  double shape = 1.0;
  std::uint64_t v = 0;
  double t = 0.0;
  double c = 1.0;
};

/// log ω_μ(v, a) = log a + (v-1) log(a + vμ) - (a + vμ) - log v!.
/// Returns exactly -a for v = 0. Throws DomainError for a ≤ 0 or μ ∉ [0, 1).
double jain_log_weight(const JainWeightArgs& args);

/// exp(jain_log_weight(args)); underflows to 0.
double jain_weight(const JainWeightArgs& args);

/// Smallest V ≤ v_cap with Σ_{v≤V} ω ≥ 1 - eps and ω(V) < eps · Σ_{v≤V} ω.
/// Throws TruncationCapExceeded when no such V exists below the cap.
std::size_t jain_truncation_index(double a, double mu, double eps, std::size_t v_cap);

double baskakov_log_weight(const BaskakovArgs& args);
double baskakov_weight(const BaskakovArgs& args);

/// Precomputed evaluator of t ↦ p_{shape,v}(t, c) for quadrature loops.
class BaskakovKernel {
 public:
  BaskakovKernel(double shape, std::uint64_t v, double c);

  double log_value(double t) const;
  double operator()(double t) const;

  /// Mode of the kernel in t.
  double mode() const;
  /// Relative spread of the kernel around its mode (≈ coefficient of variation).
  double relative_width() const;

 private:
  double size_;  // shape / c
  double w_;     // v as real
  double c_;
  double log_const_;
};

/// ∫₀^∞ p_{n - r·c, v + r}(t, c) t^m dt in closed form.
///
/// With s = n/c - r and w = v + r the integral equals
///   Π_{j=1}^{m} (w + j) / (c^{m+1} Π_{j=1}^{m+1} (s - j)).
/// Throws DivergentIntegral unless n/c > r + m + 1.
double baskakov_monomial_integral(std::uint64_t n, std::uint64_t r, std::uint64_t v, unsigned m, double c);

}  // namespace jainops
