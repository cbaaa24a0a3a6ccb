#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jainops/accuracy.hpp"
#include "jainops/operators.hpp"

namespace jainops {

/// Closed-form vs numeric value of one moment.
struct MomentReport {
  unsigned m = 0;
  bool central = false;
  double x = 0.0;
  OperatorSpec spec;
  double closed = 0.0;
  double numeric = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;  // |closed - numeric| / max(|closed|, floor), see kCentralScaleFloor
};

/// For central moments the relative error denominator is at least this
/// fraction of Σ_j C(m,j) |K_j| x^{m-j}, the magnitude the cancelling sum
/// is computed from. Only bites when the closed value is essentially 0.
inline constexpr double kCentralScaleFloor = 1e-6;

/// G_n^μ(t^m, x) for m ≤ 2.
double closed_jain_moment(unsigned m, double x, std::uint64_t n, double mu);

/// Normalized moment of t^m, m ≤ 2, for any family. The integral families
/// need n > (r + m + 1)·c; Stancu moments follow from linearity.
double closed_K_moment(unsigned m, double x, const OperatorSpec& spec);

/// Normalized central moment of (t - x)^m, m ≤ 2.
double closed_central_moment(unsigned m, double x, const OperatorSpec& spec);

/// Series oracle: the operator applied to t^m (or (t - x)^m when central)
/// through the closed Beta integrals. Any order m is supported.
double numeric_moment(unsigned m, double x, const OperatorSpec& spec, const Accuracy& acc, bool central);

MomentReport compare_moment(unsigned m, double x, const OperatorSpec& spec, const Accuracy& acc,
                            bool central);

/// Normalized first absolute central moment Σ ω ∫ p |t - x| dt, by quadrature.
double first_abs_central_moment(double x, const OperatorSpec& spec, const Accuracy& acc);

struct SandwichEstimate {
  std::uint64_t r = 0;
  double mu_max = 0.0;
  double c = 1.0;
  double C = 1.0;
  std::vector<std::uint64_t> n_grid;
  std::vector<double> x_grid;
  std::vector<double> mu_grid;
  double worst_lower = 0.0;  // min over the grid of n T₂ / x²
  double worst_upper = 0.0;  // max over the grid of n T₂ / x²
};

/// Margin applied to the sampled supremum.
inline constexpr double kSandwichInflation = 1.05;
/// Largest μ for which sandwich claims are made.
inline constexpr double kSandwichMuMax = 0.2;

/// Smallest C (times kSandwichInflation) with x²/(nC) ≤ T₂ ≤ C x²/n over the
/// grid n × x × μ, μ running over `mu_steps` equispaced values in [0, mu_max].
/// The c = 1 grid uses the jain-baskakov kernel, other c the c-kernel.
SandwichEstimate estimate_sandwich_C(std::uint64_t r, double mu_max, std::span<const std::uint64_t> n_grid,
                                     std::span<const double> x_grid, double c, std::size_t mu_steps = 5);

enum class TailSide { Below, Above };

/// Below: normalized Σ ω ∫₀^endpoint p dt (used with endpoint < x).
/// Above: normalized Σ ω ∫_endpoint^∞ p dt (used with endpoint > x).
/// Any finite endpoint >= 0 is accepted; the result is clamped to [0, 1].
double delta_tail(double x, double endpoint, TailSide side, const OperatorSpec& spec, const Accuracy& acc);

/// Spec with the kernel matching c: jain-baskakov for c = 1, else jain-baskakov-c.
OperatorSpec integral_spec(std::uint64_t n, std::uint64_t r, double mu, double c);

}  // namespace jainops
