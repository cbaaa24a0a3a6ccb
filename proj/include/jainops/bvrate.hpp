#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jainops/accuracy.hpp"
#include "jainops/moments.hpp"
#include "jainops/operators.hpp"
#include "jainops/polynomial.hpp"

namespace jainops {

/// Tail envelope |f(t)| ≤ M t^{2q} for t ≥ t0, as used for the [2x, ∞) part
/// of the bound.
struct GrowthEnvelope {
  unsigned q = 1;
  double M = 1.0;
  double t0 = 1.0;
};

struct BreakpointSlopes {
  double at = 0.0;
  double left = 0.0;   // f'(at⁻)
  double right = 0.0;  // f'(at⁺)
};

/// Absolutely continuous piecewise polynomial with a derivative of bounded
/// variation.
class TestFunction {
 public:
  /// Throws DomainError when f is discontinuous or the envelope fails on samples of [t0, 10³].
  TestFunction(std::string name, PiecewisePolynomial f, GrowthEnvelope envelope);

  /// Integrates a piecewise derivative starting from f(0) = value_at_zero.
  static TestFunction from_derivative(std::string name, const PiecewisePolynomial& derivative,
                                      double value_at_zero, GrowthEnvelope envelope);

  double operator()(double t) const { return f_(t); }
  double derivative_left(double x) const { return df_.left_limit(x); }
  double derivative_right(double x) const { return df_.right_limit(x); }

  const std::string& name() const { return name_; }
  const PiecewisePolynomial& function() const { return f_; }
  const PiecewisePolynomial& derivative() const { return df_; }
  const GrowthEnvelope& envelope() const { return envelope_; }
  const std::vector<BreakpointSlopes>& slopes() const { return slopes_; }

  Integrand to_integrand() const { return Integrand::piecewise(f_); }

 private:
  std::string name_;
  PiecewisePolynomial f_;
  PiecewisePolynomial df_;
  GrowthEnvelope envelope_;
  std::vector<BreakpointSlopes> slopes_;
};

/// The built-in corpus: quadratic, kink, humps, exp-spline, two-kinks.
std::vector<TestFunction> default_corpus();
/// Looks up a corpus member by name; throws DomainError if unknown.
TestFunction corpus_function(const std::string& name);

/// g_x: g(t) - g(x⁻) for t < x, 0 at x, g(t) - g(x⁺) for t > x.
/// Returned as a piecewise polynomial with x inserted as a breakpoint.
PiecewisePolynomial fx_transform(const PiecewisePolynomial& g, double x);

/// Exact total variation over [a, b] of the right-continuous g: variation
/// along the monotone segments of each piece plus jumps at breakpoints in
/// (a, b]. A jump at a does not show up in the values on [a, b].
double total_variation(const PiecewisePolynomial& g, double a, double b);

struct BoundRow {
  std::uint64_t n = 0;
  double x = 0.0;
  double measured_error = 0.0;
  double bound_total = 0.0;
  double term_tv = 0.0;
  double term_jump = 0.0;
  double term_mean = 0.0;
  /// (C/n)(|f(2x) - f(x) - x f'(x⁺)| + |f(x)|) + |f'(x⁺)| C x / n.
  double term_f2x = 0.0;
  double term_tail = 0.0;  // M 2^{2q} T_{n,r,2q}(x)
  double C = 0.0;
};

/// Right-hand side of the bounded-variation rate bound for the jain-baskakov
/// operator. measured_error is left NaN.
BoundRow bv_rate_bound(const TestFunction& f, double x, std::uint64_t n, const OperatorSpec& spec, double C,
                        const Accuracy& acc = {});

/// Same bound for the c-parameter operator, with the c-aware first central moment.
BoundRow bv_rate_bound_c(const TestFunction& f, double x, std::uint64_t n, const OperatorSpec& spec, double C1,
                        const Accuracy& acc = {});

/// Measured normalized error against the assembled bound on n_grid × x_grid,
/// rows sorted by (n, x). When C is not given it is estimated with
/// estimate_sandwich_C over the same grids and μ ∈ [0, spec.mu].
std::vector<BoundRow> error_vs_bound(const TestFunction& f, std::span<const double> x_grid,
                                     std::span<const std::uint64_t> n_grid, const OperatorSpec& spec,
                                     const Accuracy& acc = {}, std::optional<double> C = std::nullopt,
                                     unsigned jobs = 1);

struct MuRule {
  enum class Kind { InvSqrt, Constant };
  Kind kind = Kind::InvSqrt;
  double value = 0.0;
  double operator()(std::uint64_t n) const;
  /// "inv-sqrt" or "const:<v>".
  static MuRule parse(const std::string& text);
};

struct KorovkinRow {
  std::uint64_t n = 0;
  double mu = 0.0;
  double sup_error[3] = {0.0, 0.0, 0.0};  // m = 0, 1, 2
};

/// sup over a mesh of E = [lo, hi] of |K(t^m, x) - x^m|, m = 0, 1, 2.
std::vector<KorovkinRow> korovkin_check(Family family, std::uint64_t r, double c, const MuRule& rule, double lo,
                                        double hi, std::span<const std::uint64_t> n_grid, const Accuracy& acc = {},
                                        std::size_t mesh = 101, unsigned jobs = 1);

/// Below this level a sup-error is indistinguishable from rounding.
inline constexpr double kKorovkinNoiseFloor = 1e-10;

struct KorovkinSummary {
  bool decreasing[3] = {false, false, false};
  double final_m1 = 0.0;
  /// m = 1 sup-error at the largest n is still ≥ 75% of the one at the smallest n.
  bool plateau = false;
};

/// Order m is "decreasing" when each successive sup-error is strictly smaller,
/// or both neighbours sit below kKorovkinNoiseFloor.
KorovkinSummary summarize_korovkin(std::span<const KorovkinRow> rows);

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Exceptions are rethrown.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace jainops
