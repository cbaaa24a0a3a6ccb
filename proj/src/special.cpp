#include "jainops/special.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cfloat>
#include <cmath>
#include <numbers>

namespace jainops::special {

namespace {

constexpr long double kLogSqrt2PiL = 0.918938533204672741780329736405617639861L;

}  // namespace

double lgamma(double z) { return boost::math::lgamma(z); }

double stirlerr(double z) {
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (z <= 15.0) {
    const long double zl = z;
    const long double value =
        boost::math::lgamma(zl + 1.0L) - (zl + 0.5L) * std::log(zl) + zl - kLogSqrt2PiL;
    return static_cast<double>(value);
  }
  const double nn = z * z;
  if (z > 500.0) return (s0 - s1 / nn) / z;
  if (z > 80.0) return (s0 - (s1 - s2 / nn) / nn) / z;
  if (z > 35.0) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / z;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / z;
}

double bd0(double x, double np) {
  if (x == 0.0) return np;
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    if (std::fabs(s) < DBL_MIN) return s;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

double log_poisson_pmf(double v, double lambda) {
  if (v == 0.0) return -lambda;
  return -stirlerr(v) - bd0(v, lambda) - 0.5 * std::log(2.0 * std::numbers::pi * v);
}

}  // namespace jainops::special
