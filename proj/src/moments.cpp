#include "jainops/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jainops/basis.hpp"
#include "jainops/errors.hpp"
#include "jainops/quadrature.hpp"

namespace jainops {

namespace {

void check_order(unsigned m) {
  if (m > 2) throw UnsupportedOrder("closed-form moments exist only for m <= 2, got m = " + std::to_string(m));
}

// n > (r + m + 1) c, as required by the closed forms of order m.
void check_n(unsigned m, const OperatorSpec& spec) {
  const double c = spec.kernel_c();
  const double need = (static_cast<double>(spec.r) + m + 1.0) * c;
  if (!(static_cast<double>(spec.n) > need))
    throw InsufficientN("moment of order " + std::to_string(m) + " needs n > (r + " + std::to_string(m + 1) +
                        ") c = " + std::to_string(need) + ", got n = " + std::to_string(spec.n));
}

// K_{n,r,m} for the jain-baskakov(-c) kernels.
double integral_family_moment(unsigned m, double x, const OperatorSpec& spec) {
  check_n(m, spec);
  const double n = static_cast<double>(spec.n);
  const double r = static_cast<double>(spec.r);
  const double c = spec.kernel_c();
  const double om = 1.0 - spec.mu;
  const double d2 = n - c * r - 2.0 * c;
  const double d3 = n - c * r - 3.0 * c;
  switch (m) {
    case 0: return 1.0;
    case 1: return (n * x + (r + 1.0) * om) / (d2 * om);
    default:
      return (n * n * x * x / (om * om) + (n / (om * om * om) + n * (2.0 * r + 3.0) / om) * x +
              (r + 1.0) * (r + 2.0)) /
             (d2 * d3);
  }
}

OperatorSpec as_base(const OperatorSpec& spec) {
  OperatorSpec base = spec;
  base.family = Family::JainBaskakov;
  base.alpha = base.beta = 0.0;
  return base;
}

}  // namespace

OperatorSpec integral_spec(std::uint64_t n, std::uint64_t r, double mu, double c) {
  OperatorSpec spec;
  spec.family = c == 1.0 ? Family::JainBaskakov : Family::JainBaskakovC;
  spec.n = n;
  spec.r = r;
  spec.mu = mu;
  spec.c = c;
  return spec;
}

double closed_jain_moment(unsigned m, double x, std::uint64_t n, double mu) {
  check_order(m);
  const double om = 1.0 - mu;
  switch (m) {
    case 0: return 1.0;
    case 1: return x / om;
    default: return x * x / (om * om) + x / (static_cast<double>(n) * om * om * om);
  }
}

double closed_K_moment(unsigned m, double x, const OperatorSpec& spec) {
  check_order(m);
  switch (spec.family) {
    case Family::Jain: return closed_jain_moment(m, x, spec.n, spec.mu);
    case Family::JainBaskakov:
    case Family::JainBaskakovC: return integral_family_moment(m, x, spec);
    case Family::Stancu: {
      // (n t + α)/(n + β) = a t + b.
      const double n = static_cast<double>(spec.n);
      const double a = n / (n + spec.beta);
      const double b = spec.alpha / (n + spec.beta);
      const OperatorSpec base = as_base(spec);
      if (m == 0) return integral_family_moment(0, x, base);
      if (m == 1) return a * integral_family_moment(1, x, base) + b;
      return a * a * integral_family_moment(2, x, base) + 2.0 * a * b * integral_family_moment(1, x, base) +
             b * b;
    }
  }
  throw DomainError("unknown family");
}

double closed_central_moment(unsigned m, double x, const OperatorSpec& spec) {
  check_order(m);
  if (m == 0) {
    if (spec.family != Family::Jain) check_n(0, spec);
    return 1.0;
  }
  const double om = 1.0 - spec.mu;
  switch (spec.family) {
    case Family::Jain: {
      const double n = static_cast<double>(spec.n);
      if (m == 1) return x * spec.mu / om;
      return x * x * spec.mu * spec.mu / (om * om) + x / (n * om * om * om);
    }
    case Family::JainBaskakov:
    case Family::JainBaskakovC: {
      check_n(m, spec);
      const double n = static_cast<double>(spec.n);
      const double r = static_cast<double>(spec.r);
      const double c = spec.kernel_c();
      const double d2 = n - 2.0 * c - r * c;
      const double d3 = n - 3.0 * c - r * c;
      if (m == 1) return ((1.0 + r) * om + x * (c * (2.0 + r) * om + n * spec.mu)) / (d2 * om);
      return x * x * (1.0 + n * n / (d2 * d3 * om * om) - 2.0 * n / (d2 * om)) +
             x * (n * (1.0 + (3.0 + 2.0 * r) * om * om) / (d2 * d3 * om * om * om) - 2.0 * (1.0 + r) / d2) +
             (1.0 + r) * (2.0 + r) / (d2 * d3);
    }
    case Family::Stancu: {
      const double k1 = closed_K_moment(1, x, spec);
      if (m == 1) return k1 - x;
      return closed_K_moment(2, x, spec) - 2.0 * x * k1 + x * x;
    }
  }
  throw DomainError("unknown family");
}

double numeric_moment(unsigned m, double x, const OperatorSpec& spec, const Accuracy& acc, bool central) {
  OperatorSpec normalized = spec;
  normalized.normalized = true;
  const Integrand f = Integrand::polynomial(central ? Polynomial::centered_power(m, x) : Polynomial::monomial(m));
  return evaluate(f, x, normalized, acc);
}

MomentReport compare_moment(unsigned m, double x, const OperatorSpec& spec, const Accuracy& acc, bool central) {
  MomentReport rep;
  rep.m = m;
  rep.central = central;
  rep.x = x;
  rep.spec = spec;
  rep.closed = central ? closed_central_moment(m, x, spec) : closed_K_moment(m, x, spec);
  rep.numeric = numeric_moment(m, x, spec, acc, central);
  rep.abs_err = std::fabs(rep.closed - rep.numeric);
  double scale = std::fabs(rep.closed);
  if (central) {
    // A central moment is a cancelling sum; when it is (nearly) zero, measure
    // the discrepancy against the size of the uncentred terms instead.
    double terms = 0.0;
    double binom = 1.0;
    for (unsigned j = 0; j <= m; ++j) {
      terms += binom * std::fabs(closed_K_moment(j, x, spec)) * std::pow(x, static_cast<double>(m - j));
      binom = binom * static_cast<double>(m - j) / static_cast<double>(j + 1);
    }
    scale = std::max(scale, kCentralScaleFloor * terms);
  }
  rep.rel_err = rep.abs_err / std::max(scale, 1e-300);
  return rep;
}

double first_abs_central_moment(double x, const OperatorSpec& spec, const Accuracy& acc) {
  OperatorSpec normalized = spec;
  normalized.normalized = true;
  const Integrand f = Integrand::callback([x](double t) { return std::fabs(t - x); }, 1, 1.0 + x, {x});
  return evaluate(f, x, normalized, acc);
}

SandwichEstimate estimate_sandwich_C(std::uint64_t r, double mu_max, std::span<const std::uint64_t> n_grid,
                                     std::span<const double> x_grid, double c, std::size_t mu_steps) {
  if (n_grid.empty() || x_grid.empty()) throw DomainError("sandwich: grids must be nonempty");
  if (!(mu_max >= 0.0 && mu_max <= kSandwichMuMax))
    throw DomainError("sandwich: mu_max in [0, 0.2] violated: mu_max = " + std::to_string(mu_max));
  if (!(c > 0.0)) throw DomainError("sandwich: c > 0 violated");
  for (std::uint64_t n : n_grid)
    if (!(static_cast<double>(n) > (static_cast<double>(r) + 3.0) * c))
      throw DomainError("sandwich: n > (r + 3) c violated: n = " + std::to_string(n));
  for (double x : x_grid)
    if (!(x > 0.0)) throw DomainError("sandwich: x > 0 violated: x = " + std::to_string(x));

  SandwichEstimate est;
  est.r = r;
  est.mu_max = mu_max;
  est.c = c;
  est.n_grid.assign(n_grid.begin(), n_grid.end());
  est.x_grid.assign(x_grid.begin(), x_grid.end());
  if (mu_max == 0.0 || mu_steps < 2) {
    est.mu_grid = {mu_max};
    if (mu_max != 0.0) est.mu_grid.insert(est.mu_grid.begin(), 0.0);
  } else {
    for (std::size_t i = 0; i < mu_steps; ++i)
      est.mu_grid.push_back(mu_max * static_cast<double>(i) / static_cast<double>(mu_steps - 1));
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double mu : est.mu_grid)
    for (std::uint64_t n : est.n_grid)
      for (double x : est.x_grid) {
        const double t2 = closed_central_moment(2, x, integral_spec(n, r, mu, c));
        if (!(t2 > 0.0))
          throw SandwichViolated("sandwich: T2 <= 0 at n = " + std::to_string(n) + ", x = " + std::to_string(x) +
                                 ", mu = " + std::to_string(mu));
        const double ratio = static_cast<double>(n) * t2 / (x * x);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
  est.worst_lower = lo;
  est.worst_upper = hi;
  est.C = kSandwichInflation * std::max(hi, 1.0 / lo);
  return est;
}

double delta_tail(double x, double endpoint, TailSide side, const OperatorSpec& spec, const Accuracy& acc) {
  if (spec.family != Family::JainBaskakov && spec.family != Family::JainBaskakovC)
    throw DomainError("delta_tail: needs an integral family");
  spec.validate();
  acc.validate();
  if (!(x > 0.0)) throw DomainError("delta_tail: x > 0 violated");
  // The bounds use y < x (Below) and z > x (Above), but the mass of [0, y]
  // or [z, ∞) is defined for any endpoint, so only 0 <= endpoint < ∞ is enforced.
  if (!(endpoint >= 0.0 && std::isfinite(endpoint)))
    throw DomainError("delta_tail: endpoint must satisfy 0 <= endpoint < inf, got " + std::to_string(endpoint));
  if (side == TailSide::Below && endpoint == 0.0) return 0.0;
  if (side == TailSide::Above && endpoint == 0.0) return 1.0;

  const double c = spec.kernel_c();
  const double shape = spec.kernel_shape();
  const std::uint64_t r = spec.r;
  const double lo = side == TailSide::Below ? 0.0 : endpoint;
  const double hi = side == TailSide::Below ? endpoint : std::numeric_limits<double>::infinity();
  const auto term = [&](std::uint64_t v) {
    const BaskakovKernel kernel(shape, v + r, c);
    const std::vector<double> splits = kernel_split_points(shape, v + r, c);
    return integrate([&kernel](double t) { return kernel(t); }, lo, hi, acc, splits).value;
  };
  const double sum = jain_weighted_sum(static_cast<double>(spec.n) * x, spec.mu, term, false, acc);
  return std::clamp(spec.normalizer() * sum, 0.0, 1.0);
}

}  // namespace jainops
