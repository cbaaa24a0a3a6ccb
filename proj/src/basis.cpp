#include "jainops/basis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "jainops/compensated_sum.hpp"
#include "jainops/errors.hpp"
#include "jainops/special.hpp"

namespace jainops {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_jain_args(double a, double mu) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw DomainError("jain weight: a = n*x must be positive and finite, got " + std::to_string(a));
  if (!(mu >= 0.0 && mu < 1.0))
    throw DomainError("jain weight: mu must lie in [0, 1), got " + std::to_string(mu));
}

}  // namespace

double jain_log_weight(const JainWeightArgs& args) {
  check_jain_args(args.a, args.mu);
  if (args.v == 0) return -args.a;
  const double v = static_cast<double>(args.v);
  const double lambda = args.a + v * args.mu;
  // ω = (a/λ) · Poisson(v; λ) with λ = a + vμ.
  return -std::log1p(v * args.mu / args.a) + special::log_poisson_pmf(v, lambda);
}

double jain_weight(const JainWeightArgs& args) { return std::exp(jain_log_weight(args)); }

std::size_t jain_truncation_index(double a, double mu, double eps, std::size_t v_cap) {
  check_jain_args(a, mu);
  if (!(eps > 0.0 && eps < 1.0))
    throw DomainError("jain truncation: eps must lie in (0, 1), got " + std::to_string(eps));
  CompensatedSum mass;
  for (std::size_t v = 0; v <= v_cap; ++v) {
    const double w = jain_weight({a, mu, v});
    mass += w;
    const double m = mass.value();
    if (m >= 1.0 - eps && w < eps * m) return v;
  }
  throw TruncationCapExceeded("jain truncation: mass 1 - " + std::to_string(eps) +
                              " not reached by v_cap = " + std::to_string(v_cap) +
                              " (a = " + std::to_string(a) + ", mu = " + std::to_string(mu) + ")");
}

namespace {

void check_baskakov_args(const BaskakovArgs& args) {
  if (!(args.shape > 0.0) || !std::isfinite(args.shape))
    throw DomainError("baskakov weight: shape must be positive, got " + std::to_string(args.shape));
  if (!(args.c > 0.0) || !std::isfinite(args.c))
    throw DomainError("baskakov weight: c must be positive, got " + std::to_string(args.c));
  if (!(args.t >= 0.0))
    throw DomainError("baskakov weight: t must be nonnegative, got " + std::to_string(args.t));
}

}  // namespace

BaskakovKernel::BaskakovKernel(double shape, std::uint64_t v, double c)
    : size_(shape / c), w_(static_cast<double>(v)), c_(c), log_const_(0.0) {
  check_baskakov_args({shape, v, 0.0, c});
  if (v > 0) {
    const double total = size_ + w_;
    log_const_ = std::log(size_ / total) + special::stirlerr(total) - special::stirlerr(size_) -
                 special::stirlerr(w_) -
                 0.5 * (std::log(2.0 * std::numbers::pi) + std::log(size_ * w_ / total));
  }
}

double BaskakovKernel::log_value(double t) const {
  const double y = c_ * t;
  if (w_ == 0.0) return -size_ * std::log1p(y);
  if (y == 0.0) return kNegInf;
  if (std::isinf(y)) return kNegInf;
  const double total = size_ + w_;
  const double success = 1.0 / (1.0 + y);
  const double failure = y / (1.0 + y);
  return log_const_ - special::bd0(size_, total * success) - special::bd0(w_, total * failure);
}

double BaskakovKernel::operator()(double t) const { return std::exp(log_value(t)); }

double BaskakovKernel::mode() const { return w_ / (c_ * size_); }

double BaskakovKernel::relative_width() const {
  return std::sqrt(1.0 / (w_ + 1.0) + 1.0 / std::max(size_ - 1.0, 0.5));
}

double baskakov_log_weight(const BaskakovArgs& args) {
  check_baskakov_args(args);
  return BaskakovKernel(args.shape, args.v, args.c).log_value(args.t);
}

double baskakov_weight(const BaskakovArgs& args) { return std::exp(baskakov_log_weight(args)); }

double baskakov_monomial_integral(std::uint64_t n, std::uint64_t r, std::uint64_t v, unsigned m,
                                  double c) {
  if (!(c > 0.0)) throw DomainError("baskakov integral: c must be positive");
  const double s = static_cast<double>(n) / c - static_cast<double>(r);
  if (!(s > static_cast<double>(m) + 1.0))
    throw DivergentIntegral("baskakov integral: needs n/c > r + m + 1 (n = " + std::to_string(n) +
                            ", r = " + std::to_string(r) + ", m = " + std::to_string(m) +
                            ", c = " + std::to_string(c) + ")");
  const double w = static_cast<double>(v + r);
  double value = 1.0 / (c * (s - 1.0));
  for (unsigned j = 1; j <= m; ++j) value *= (w + j) / (c * (s - 1.0 - j));
  return value;
}

}  // namespace jainops
