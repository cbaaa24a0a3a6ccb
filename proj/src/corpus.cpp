#include <cmath>
#include <string>
#include <vector>

#include "jainops/bvrate.hpp"
#include "jainops/errors.hpp"

namespace jainops {

namespace {

// 4(t-a)(b-t)/(b-a)²: zero at both ends, peak 1 at the midpoint.
Polynomial hump(double a, double b) {
  const double k = 4.0 / ((b - a) * (b - a));
  return Polynomial({-k * a * b, k * (a + b), -k});
}

TestFunction quadratic() {
  return TestFunction("quadratic", PiecewisePolynomial({0.0}, {Polynomial({0.0, 0.0, 1.0})}), {1, 1.0, 0.0});
}

// |t - 1| + t.
TestFunction kink() {
  return TestFunction("kink", PiecewisePolynomial({0.0, 1.0}, {Polynomial({1.0}), Polynomial({-1.0, 2.0})}),
                      {1, 2.0, 1.0});
}

// Slope 1/2 with two quadratic bumps in f' on [0.5, 1] and [1.5, 2.5].
TestFunction humps() {
  const Polynomial base({0.5});
  const PiecewisePolynomial derivative({0.0, 0.5, 1.0, 1.5, 2.5},
                                       {base, base + hump(0.5, 1.0), base, base + hump(1.5, 2.5), base});
  return TestFunction::from_derivative("humps", derivative, 0.25, {1, 2.0, 1.0});
}

// Cubic Hermite interpolant of e^{-t} on [0, 8], constant beyond.
TestFunction exp_spline() {
  constexpr double h = 0.25;
  constexpr int knots = 32;
  std::vector<double> bps;
  std::vector<Polynomial> pieces;
  for (int i = 0; i < knots; ++i) {
    const double t0 = i * h;
    const double y0 = std::exp(-t0);
    const double y1 = std::exp(-(t0 + h));
    const double d0 = -y0 * h;
    const double d1 = -y1 * h;
    // Hermite form in s ∈ [0, 1].
    const Polynomial in_s({y0, d0, -3.0 * y0 - 2.0 * d0 + 3.0 * y1 - d1, 2.0 * y0 + d0 - 2.0 * y1 + d1});
    bps.push_back(t0);
    pieces.push_back(in_s.compose_affine(1.0 / h, -t0 / h));
  }
  bps.push_back(knots * h);
  pieces.push_back(Polynomial({std::exp(-knots * h)}));
  return TestFunction("exp-spline", PiecewisePolynomial(std::move(bps), std::move(pieces)), {1, 1.0, 1.0});
}

// 1 + |t - 0.5|/2 + 3|t - 2|/4 + t²/4: derivative jumps at 0.5 and 2.
TestFunction two_kinks() {
  const PiecewisePolynomial derivative({0.0, 0.5, 2.0}, {Polynomial({-1.25, 0.5}), Polynomial({-0.25, 0.5}),
                                                         Polynomial({1.25, 0.5})});
  return TestFunction::from_derivative("two-kinks", derivative, 2.75, {1, 3.0, 1.0});
}

}  // namespace

std::vector<TestFunction> default_corpus() { return {quadratic(), kink(), humps(), exp_spline(), two_kinks()}; }

TestFunction corpus_function(const std::string& name) {
  for (auto& f : default_corpus())
    if (f.name() == name) return f;
  throw DomainError("unknown corpus function '" + name +
                    "' (known: quadratic, kink, humps, exp-spline, two-kinks)");
}

}  // namespace jainops
