#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jainops/accuracy.hpp"
#include "jainops/polynomial.hpp"

namespace jainops {

/// Largest admissible Jain parameter; the generalized-Poisson tail becomes
/// too heavy to truncate meaningfully beyond it.
inline constexpr double kMuMax = 0.99;

enum class Family { Jain, JainBaskakov, JainBaskakovC, Stancu };

std::string_view family_name(Family family);
/// Accepts "jain", "jain-baskakov", "jain-baskakov-c", "stancu".
Family parse_family(std::string_view name);

struct OperatorSpec {
  Family family = Family::JainBaskakov;
  std::uint64_t n = 10;
  double mu = 0.0;
  std::uint64_t r = 0;
  double c = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  bool normalized = true;

  /// Checks the family-independent invariants and n > (r+1)c for the
  /// integral families. Throws DomainError naming the violated condition.
  void validate() const;

  /// Kernel c: 1 for every family except JainBaskakovC.
  double kernel_c() const;
  /// n - r·c, the shape slot of the Baskakov kernel.
  double kernel_shape() const;
  /// (n - r·c - c): the factor that makes the integral operators reproduce constants.
  double normalizer() const;
  /// Raw prefactor divided by the normalizer, e.g. n^r (n-r-2)!/(n-2)! for c = 1.
  double raw_to_normalized_ratio() const;
};

/// Function the operators act on, with a growth envelope |f(t)| ≤ M(1 + t^{2q}).
class Integrand {
 public:
  enum class Kind { Polynomial, Callback, Piecewise };

  static Integrand polynomial(Polynomial p);
  /// Samples the envelope on [0, 10³]; throws DomainError when it fails.
  static Integrand callback(std::function<double(double)> f, unsigned growth_degree,
                            double growth_constant, std::vector<double> kinks = {});
  static Integrand piecewise(PiecewisePolynomial f);

  Kind kind() const { return kind_; }
  double operator()(double t) const;
  unsigned growth_degree() const { return q_; }
  double growth_constant() const { return m_; }
  /// Points where f is not smooth; used to seed quadrature panels.
  std::span<const double> kinks() const { return kinks_; }
  /// Non-null only for Kind::Polynomial.
  const Polynomial* as_polynomial() const;

  /// t ↦ f(scale·t + shift) with scale > 0, shift ≥ 0.
  Integrand compose_affine(double scale, double shift) const;

 private:
  Integrand() = default;
  Kind kind_ = Kind::Polynomial;
  Polynomial poly_;
  std::shared_ptr<const PiecewisePolynomial> piecewise_;
  std::function<double(double)> fn_;
  std::vector<double> kinks_;
  unsigned q_ = 0;
  double m_ = 1.0;
};

/// Σ_v ω_μ(v, a) · term(v), truncated once the weight mass passes 1 - series_eps.
/// When `growing` is set the index is raised further until the last quarter
/// of the summed terms contributes less than series_eps relative.
double jain_weighted_sum(double a, double mu, const std::function<double(std::uint64_t)>& term,
                         bool growing, const Accuracy& acc);

/// Quadrature split points around the peak of p_{shape,v}(·, c).
std::vector<double> kernel_split_points(double shape, std::uint64_t v, double c);

/// G_n^μ(f, x) = Σ_k ω_μ(k, nx) f(k/n). Returns f(0) at x = 0.
double eval_jain(const Integrand& f, double x, std::uint64_t n, double mu, const Accuracy& acc);

/// Jain–Baskakov integral operator (c = 1).
double eval_K(const Integrand& f, double x, const OperatorSpec& spec, const Accuracy& acc);

/// c-parameter operator with kernel p_{n-rc, v+r}(t, c).
double eval_K_c(const Integrand& f, double x, const OperatorSpec& spec, const Accuracy& acc);

/// Stancu form: eval_K applied to t ↦ f((n t + α)/(n + β)).
double eval_stancu(const Integrand& f, double x, const OperatorSpec& spec, const Accuracy& acc);

/// Dispatches on spec.family.
double evaluate(const Integrand& f, double x, const OperatorSpec& spec, const Accuracy& acc);

}  // namespace jainops
