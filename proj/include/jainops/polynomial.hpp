#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace jainops {

/// Dense real polynomial, coefficients in ascending order of degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);

  static Polynomial monomial(unsigned degree, double scale = 1.0);
  /// (t - center)^degree expanded in powers of t.
  static Polynomial centered_power(unsigned degree, double center);

  double operator()(double t) const;
  std::size_t degree() const;
  bool is_zero() const;
  std::span<const double> coefficients() const { return coeffs_; }

  Polynomial derivative() const;
  Polynomial antiderivative(double constant = 0.0) const;
  /// t ↦ p(scale·t + shift).
  Polynomial compose_affine(double scale, double shift) const;

  /// Real roots inside [a, b], sorted, found by isolating monotone segments
  /// through the roots of the derivative.
  std::vector<double> real_roots(double a, double b) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator*(double s) const;

 private:
  void trim();
  std::vector<double> coeffs_;
};

/// Piecewise polynomial on [0, ∞): piece i covers [breakpoint_i, breakpoint_{i+1})
/// and the last piece extends to infinity. The first breakpoint is 0.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;
  PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Polynomial> pieces);

  /// Right-continuous value.
  double operator()(double t) const;
  double left_limit(double t) const;
  double right_limit(double t) const;

  std::size_t piece_count() const { return pieces_.size(); }
  std::size_t piece_index(double t) const;
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<Polynomial>& pieces() const { return pieces_; }

  /// Piecewise derivative; may jump at breakpoints.
  PiecewisePolynomial derivative() const;
  /// Continuous antiderivative F with F(0) = value_at_zero.
  PiecewisePolynomial antiderivative(double value_at_zero) const;
  /// Largest |jump| of the function value across breakpoints.
  double max_discontinuity() const;
  std::size_t max_degree() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<Polynomial> pieces_;
};

}  // namespace jainops
