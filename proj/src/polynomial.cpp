#include "jainops/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "jainops/errors.hpp"

namespace jainops {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  trim();
}

Polynomial Polynomial::monomial(unsigned degree, double scale) {
  std::vector<double> c(degree + 1, 0.0);
  c[degree] = scale;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::centered_power(unsigned degree, double center) {
  // Binomial expansion of (t - center)^degree.
  std::vector<double> c(degree + 1, 0.0);
  double binom = 1.0;
  for (unsigned j = 0; j <= degree; ++j) {
    c[j] = binom * std::pow(-center, static_cast<double>(degree - j));
    binom = binom * (degree - j) / (j + 1);
  }
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::size_t Polynomial::degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

bool Polynomial::is_zero() const { return coeffs_.empty(); }

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative(double constant) const {
  std::vector<double> a(coeffs_.size() + 1, 0.0);
  a[0] = constant;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) a[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
  return Polynomial(std::move(a));
}

Polynomial Polynomial::compose_affine(double scale, double shift) const {
  // Horner in polynomial arithmetic: acc = acc·(scale t + shift) + c_k.
  std::vector<double> acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    std::vector<double> next(acc.size() + 1, 0.0);
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k] += acc[k] * shift;
      next[k + 1] += acc[k] * scale;
    }
    next[0] += *it;
    acc = std::move(next);
  }
  return Polynomial(std::move(acc));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  std::vector<double> s(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) s[k] += coeffs_[k];
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) s[k] += other.coeffs_[k];
  return Polynomial(std::move(s));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> c = coeffs_;
  for (double& x : c) x *= s;
  return Polynomial(std::move(c));
}

namespace {

double bisect_root(const Polynomial& p, double lo, double hi) {
  double flo = p(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> Polynomial::real_roots(double a, double b) const {
  std::vector<double> roots;
  if (coeffs_.size() <= 1 || !(a <= b)) return roots;
  if (coeffs_.size() == 2) {
    const double r = -coeffs_[0] / coeffs_[1];
    if (r >= a && r <= b) roots.push_back(r);
    return roots;
  }
  std::vector<double> knots{a};
  for (double r : derivative().real_roots(a, b))
    if (r > knots.back()) knots.push_back(r);
  if (b > knots.back()) knots.push_back(b);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i];
    const double hi = knots[i + 1];
    const double flo = (*this)(lo);
    const double fhi = (*this)(hi);
    if (flo == 0.0) roots.push_back(lo);
    else if (fhi != 0.0 && (flo < 0.0) != (fhi < 0.0)) roots.push_back(bisect_root(*this, lo, hi));
  }
  if ((*this)(knots.back()) == 0.0) roots.push_back(knots.back());
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Polynomial> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (breakpoints_.empty() || breakpoints_.size() != pieces_.size())
    throw DomainError("piecewise polynomial: need one breakpoint per piece");
  if (breakpoints_.front() != 0.0)
    throw DomainError("piecewise polynomial: first breakpoint must be 0");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] > breakpoints_[i - 1]) || !std::isfinite(breakpoints_[i]))
      throw DomainError("piecewise polynomial: breakpoints must be finite and strictly increasing");
}

std::size_t PiecewisePolynomial::piece_index(double t) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  if (it == breakpoints_.begin()) return 0;
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

double PiecewisePolynomial::operator()(double t) const { return pieces_[piece_index(t)](t); }

double PiecewisePolynomial::right_limit(double t) const { return (*this)(t); }

double PiecewisePolynomial::left_limit(double t) const {
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
  std::size_t idx;
  if (it == breakpoints_.begin()) idx = 0;
  else idx = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return pieces_[idx](t);
}

PiecewisePolynomial PiecewisePolynomial::derivative() const {
  std::vector<Polynomial> d;
  d.reserve(pieces_.size());
  for (const auto& p : pieces_) d.push_back(p.derivative());
  return {breakpoints_, std::move(d)};
}

PiecewisePolynomial PiecewisePolynomial::antiderivative(double value_at_zero) const {
  std::vector<Polynomial> a;
  a.reserve(pieces_.size());
  double running = value_at_zero;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    Polynomial prim = pieces_[i].antiderivative();
    // Shift so the piece starts at the running value.
    prim = prim + Polynomial({running - prim(breakpoints_[i])});
    if (i + 1 < pieces_.size()) running = prim(breakpoints_[i + 1]);
    a.push_back(std::move(prim));
  }
  return {breakpoints_, std::move(a)};
}

double PiecewisePolynomial::max_discontinuity() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    const double b = breakpoints_[i];
    worst = std::max(worst, std::fabs(pieces_[i](b) - pieces_[i - 1](b)));
  }
  return worst;
}

std::size_t PiecewisePolynomial::max_degree() const {
  std::size_t d = 0;
  for (const auto& p : pieces_) d = std::max(d, p.degree());
  return d;
}

}  // namespace jainops
