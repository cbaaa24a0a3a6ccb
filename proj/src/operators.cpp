#include "jainops/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "jainops/basis.hpp"
#include "jainops/compensated_sum.hpp"
#include "jainops/errors.hpp"
#include "jainops/quadrature.hpp"
#include "jainops/special.hpp"

namespace jainops {

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Jain: return "jain";
    case Family::JainBaskakov: return "jain-baskakov";
    case Family::JainBaskakovC: return "jain-baskakov-c";
    case Family::Stancu: return "stancu";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "jain") return Family::Jain;
  if (name == "jain-baskakov") return Family::JainBaskakov;
  if (name == "jain-baskakov-c") return Family::JainBaskakovC;
  if (name == "stancu") return Family::Stancu;
  throw DomainError("family must be one of jain | jain-baskakov | jain-baskakov-c | stancu, got '" +
                    std::string(name) + "'");
}

void OperatorSpec::validate() const {
  if (n < 1) throw DomainError("n >= 1 violated: n = " + std::to_string(n));
  if (!(mu >= 0.0 && mu <= kMuMax))
    throw DomainError("mu in [0, 0.99] violated: mu = " + std::to_string(mu));
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("c > 0 violated: c = " + std::to_string(c));
  if (!(alpha >= 0.0 && alpha <= beta) || !std::isfinite(beta))
    throw DomainError("0 <= alpha <= beta violated: alpha = " + std::to_string(alpha) +
                      ", beta = " + std::to_string(beta));
  switch (family) {
    case Family::Jain: break;
    case Family::JainBaskakov:
    case Family::Stancu:
      if (c != 1.0)
        throw DomainError("c = 1 required for family " + std::string(family_name(family)) +
                          " (use jain-baskakov-c), got c = " + std::to_string(c));
      if (!(n > r + 1))
        throw DomainError("n > r + 1 violated: n = " + std::to_string(n) + ", r = " + std::to_string(r));
      break;
    case Family::JainBaskakovC:
      if (!(static_cast<double>(n) > (static_cast<double>(r) + 1.0) * c))
        throw DomainError("n > (r + 1) c violated: n = " + std::to_string(n) +
                          ", r = " + std::to_string(r) + ", c = " + std::to_string(c));
      break;
  }
}

double OperatorSpec::kernel_c() const { return family == Family::JainBaskakovC ? c : 1.0; }

double OperatorSpec::kernel_shape() const {
  return static_cast<double>(n) - static_cast<double>(r) * kernel_c();
}

double OperatorSpec::normalizer() const { return kernel_shape() - kernel_c(); }

double OperatorSpec::raw_to_normalized_ratio() const {
  // raw prefactor n^r Γ(n/c - r) / Γ(n/c - 1), divided by (n - rc - c).
  const double kc = kernel_c();
  const double nc = static_cast<double>(n) / kc;
  const double log_ratio = static_cast<double>(r) * std::log(static_cast<double>(n)) +
                           special::lgamma(nc - static_cast<double>(r)) - special::lgamma(nc - 1.0) -
                           std::log(normalizer());
  return std::exp(log_ratio);
}

// ---------------------------------------------------------------------------

Integrand Integrand::polynomial(Polynomial p) {
  Integrand f;
  f.kind_ = Kind::Polynomial;
  f.q_ = static_cast<unsigned>((p.degree() + 1) / 2);
  double m = 0.0;
  for (double a : p.coefficients()) m += std::fabs(a);
  f.m_ = std::max(m, std::numeric_limits<double>::min());
  f.poly_ = std::move(p);
  return f;
}

Integrand Integrand::callback(std::function<double(double)> fn, unsigned growth_degree,
                              double growth_constant, std::vector<double> kinks) {
  if (!fn) throw DomainError("integrand: empty callback");
  if (!(growth_constant > 0.0)) throw DomainError("integrand: growth constant M must be positive");
  const auto envelope = [&](double t) {
    return growth_constant * (1.0 + std::pow(t, 2.0 * growth_degree));
  };
  constexpr int kLinear = 1000;
  constexpr int kLog = 1000;
  for (int i = 0; i <= kLinear + kLog; ++i) {
    const double t = i <= kLinear ? 10.0 * i / kLinear : 10.0 * std::pow(100.0, double(i - kLinear) / kLog);
    const double v = fn(t);
    if (!std::isfinite(v) || std::fabs(v) > envelope(t) * (1.0 + 1e-12))
      throw DomainError("integrand: growth envelope |f(t)| <= M (1 + t^{2q}) fails at t = " +
                        std::to_string(t));
  }
  Integrand f;
  f.kind_ = Kind::Callback;
  f.fn_ = std::move(fn);
  f.q_ = growth_degree;
  f.m_ = growth_constant;
  std::sort(kinks.begin(), kinks.end());
  f.kinks_ = std::move(kinks);
  return f;
}

Integrand Integrand::piecewise(PiecewisePolynomial pw) {
  Integrand f;
  f.kind_ = Kind::Piecewise;
  f.q_ = static_cast<unsigned>((pw.max_degree() + 1) / 2);
  double m = 0.0;
  for (const auto& p : pw.pieces()) {
    double s = 0.0;
    for (double a : p.coefficients()) s += std::fabs(a);
    m = std::max(m, s);
  }
  f.m_ = std::max(m, std::numeric_limits<double>::min());
  f.kinks_.assign(pw.breakpoints().begin() + 1, pw.breakpoints().end());
  f.piecewise_ = std::make_shared<const PiecewisePolynomial>(std::move(pw));
  return f;
}

double Integrand::operator()(double t) const {
  switch (kind_) {
    case Kind::Polynomial: return poly_(t);
    case Kind::Piecewise: return (*piecewise_)(t);
    case Kind::Callback: return fn_(t);
  }
  return 0.0;
}

const Polynomial* Integrand::as_polynomial() const {
  return kind_ == Kind::Polynomial ? &poly_ : nullptr;
}

Integrand Integrand::compose_affine(double scale, double shift) const {
  if (!(scale > 0.0) || !(shift >= 0.0))
    throw DomainError("integrand: affine substitution needs scale > 0 and shift >= 0");
  if (kind_ == Kind::Polynomial) return polynomial(poly_.compose_affine(scale, shift));
  Integrand f;
  f.kind_ = Kind::Callback;
  const Integrand inner = *this;
  f.fn_ = [inner, scale, shift](double t) { return inner(scale * t + shift); };
  for (double k : kinks_) {
    const double t = (k - shift) / scale;
    if (t > 0.0) f.kinks_.push_back(t);
  }
  f.q_ = q_;
  // |f(s t + h)| ≤ M(1 + (s t + h)^{2q}) ≤ M (1 + 2^{2q}(max(s, h, 1))^{2q}) (1 + t^{2q}).
  const double big = std::max({scale, shift, 1.0});
  f.m_ = m_ * (1.0 + std::pow(2.0 * big, 2.0 * q_));
  return f;
}

// ---------------------------------------------------------------------------

double jain_weighted_sum(double a, double mu, const std::function<double(std::uint64_t)>& term,
                         bool growing, const Accuracy& acc) {
  acc.validate();
  const double eps = acc.series_eps;
  // Weights this small ahead of the mode are skipped without evaluating
  // their term; their total contribution stays far below any eps in use.
  constexpr double kNegligibleWeight = 1e-25;
  const double mean = a / (1.0 - mu);
  CompensatedSum mass, sum;
  std::vector<double> abs_prefix{0.0};
  for (std::uint64_t v = 0; v <= acc.v_cap; ++v) {
    const double w = jain_weight({a, mu, v});
    mass += w;
    double contribution = 0.0;
    if (w > 0.0 && (w >= kNegligibleWeight || static_cast<double>(v) > mean))
      contribution = w * term(v);
    sum += contribution;
    abs_prefix.push_back(abs_prefix.back() + std::fabs(contribution));
    const double m = mass.value();
    if (m >= 1.0 - eps && w < eps * m) {
      if (!growing) return sum.value();
      const std::size_t upper = abs_prefix.size() - 1;
      const std::size_t lower = (3 * v) / 4;
      const double window = abs_prefix[upper] - abs_prefix[lower];
      if (window <= eps * abs_prefix[upper]) return sum.value();
    }
  }
  throw TruncationCapExceeded("jain series: no certified truncation below v_cap = " +
                              std::to_string(acc.v_cap) + " (a = " + std::to_string(a) +
                              ", mu = " + std::to_string(mu) + ")");
}

std::vector<double> kernel_split_points(double shape, std::uint64_t v, double c) {
  const BaskakovKernel kernel(shape, v, c);
  const double center = std::max(kernel.mode(), 1.0 / shape);
  const double width = kernel.relative_width();
  std::vector<double> points{center};
  for (double k : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    points.push_back(center * std::exp(-k * width));
    points.push_back(center * std::exp(k * width));
  }
  std::sort(points.begin(), points.end());
  return points;
}

namespace {

void check_x(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("x >= 0 violated: x = " + std::to_string(x));
}

// Σ_v ω ∫ p_{shape, v+r}(t, c) f(t) dt, times the normalizer (and raw ratio).
double integral_operator(const Integrand& f, double x, const OperatorSpec& spec, const Accuracy& acc) {
  spec.validate();
  acc.validate();
  check_x(x);
  const double c = spec.kernel_c();
  const double shape = spec.kernel_shape();
  const double s = shape / c;
  const std::uint64_t r = spec.r;

  std::function<double(std::uint64_t)> term;
  bool growing = false;
  if (const Polynomial* p = f.as_polynomial()) {
    const std::size_t degree = p->degree();
    if (!(s > static_cast<double>(degree) + 1.0))
      throw DivergentIntegral("operator: polynomial of degree " + std::to_string(degree) +
                              " needs n/c > r + degree + 1");
    const auto coeffs = p->coefficients();
    growing = degree > 0;
    term = [&spec, coeffs, c, r](std::uint64_t v) {
      CompensatedSum acc_sum;
      for (std::size_t k = 0; k < coeffs.size(); ++k)
        if (coeffs[k] != 0.0)
          acc_sum += coeffs[k] * baskakov_monomial_integral(spec.n, r, v, static_cast<unsigned>(k), c);
      return acc_sum.value();
    };
  } else {
    const unsigned q = f.growth_degree();
    if (!(s > 2.0 * q + 1.0))
      throw DivergentIntegral("operator: growth degree q = " + std::to_string(q) +
                              " needs n/c > r + 2q + 1");
    growing = q > 0;
    term = [&f, &acc, shape, c, r](std::uint64_t v) {
      const BaskakovKernel kernel(shape, v + r, c);
      std::vector<double> splits = kernel_split_points(shape, v + r, c);
      splits.insert(splits.end(), f.kinks().begin(), f.kinks().end());
      const auto integrand = [&kernel, &f](double t) {
        const double pv = kernel(t);
        return pv == 0.0 ? 0.0 : pv * f(t);
      };
      return integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), acc, splits).value;
    };
  }

  double value;
  if (x == 0.0) value = term(0);
  else value = jain_weighted_sum(static_cast<double>(spec.n) * x, spec.mu, term, growing, acc);
  value *= spec.normalizer();
  if (!spec.normalized) value *= spec.raw_to_normalized_ratio();
  return value;
}

}  // namespace

double eval_jain(const Integrand& f, double x, std::uint64_t n, double mu, const Accuracy& acc) {
  OperatorSpec spec;
  spec.family = Family::Jain;
  spec.n = n;
  spec.mu = mu;
  spec.validate();
  check_x(x);
  if (x == 0.0) return f(0.0);
  const double nd = static_cast<double>(n);
  return jain_weighted_sum(
      nd * x, mu, [&f, nd](std::uint64_t k) { return f(static_cast<double>(k) / nd); },
      f.growth_degree() > 0, acc);
}

double eval_K(const Integrand& f, double x, const OperatorSpec& spec, const Accuracy& acc) {
  if (spec.family != Family::JainBaskakov)
    throw DomainError("eval_K requires family jain-baskakov");
  return integral_operator(f, x, spec, acc);
}

double eval_K_c(const Integrand& f, double x, const OperatorSpec& spec, const Accuracy& acc) {
  if (spec.family != Family::JainBaskakovC)
    throw DomainError("eval_K_c requires family jain-baskakov-c");
  return integral_operator(f, x, spec, acc);
}

double eval_stancu(const Integrand& f, double x, const OperatorSpec& spec, const Accuracy& acc) {
  if (spec.family != Family::Stancu) throw DomainError("eval_stancu requires family stancu");
  spec.validate();
  if (spec.alpha == 0.0 && spec.beta == 0.0) return integral_operator(f, x, spec, acc);
  const double nd = static_cast<double>(spec.n);
  const Integrand shifted = f.compose_affine(nd / (nd + spec.beta), spec.alpha / (nd + spec.beta));
  return integral_operator(shifted, x, spec, acc);
}

double evaluate(const Integrand& f, double x, const OperatorSpec& spec, const Accuracy& acc) {
  switch (spec.family) {
    case Family::Jain: return eval_jain(f, x, spec.n, spec.mu, acc);
    case Family::JainBaskakov: return eval_K(f, x, spec, acc);
    case Family::JainBaskakovC: return eval_K_c(f, x, spec, acc);
    case Family::Stancu: return eval_stancu(f, x, spec, acc);
  }
  throw DomainError("unknown family");
}

}  // namespace jainops
