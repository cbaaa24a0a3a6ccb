#include "jainops/bvrate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <utility>

#include "jainops/errors.hpp"

namespace jainops {

TestFunction::TestFunction(std::string name, PiecewisePolynomial f, GrowthEnvelope envelope)
    : name_(std::move(name)), f_(std::move(f)), df_(f_.derivative()), envelope_(envelope) {
  double scale = 1.0;
  for (double b : f_.breakpoints()) scale = std::max(scale, std::fabs(f_(b)));
  if (f_.max_discontinuity() > 1e-9 * scale)
    throw DomainError("test function '" + name_ + "': pieces must agree at breakpoints (f continuous)");
  if (!(envelope_.M > 0.0) || !(envelope_.t0 >= 0.0) || envelope_.q < 1)
    throw DomainError("test function '" + name_ + "': envelope needs q >= 1, M > 0, t0 >= 0");
  constexpr int kSamples = 4000;
  const double lo = std::max(envelope_.t0, 1e-9);
  for (int i = 0; i <= kSamples; ++i) {
    const double t = lo * std::pow(1e3 / lo, static_cast<double>(i) / kSamples);
    if (t < envelope_.t0) continue;
    if (std::fabs(f_(t)) > envelope_.M * std::pow(t, 2.0 * envelope_.q) * (1.0 + 1e-12))
      throw DomainError("test function '" + name_ + "': envelope |f(t)| <= M t^{2q} fails at t = " +
                        std::to_string(t));
  }
  for (std::size_t i = 1; i < f_.breakpoints().size(); ++i) {
    const double b = f_.breakpoints()[i];
    slopes_.push_back({b, df_.left_limit(b), df_.right_limit(b)});
  }
}

TestFunction TestFunction::from_derivative(std::string name, const PiecewisePolynomial& derivative,
                                           double value_at_zero, GrowthEnvelope envelope) {
  return TestFunction(std::move(name), derivative.antiderivative(value_at_zero), envelope);
}

PiecewisePolynomial fx_transform(const PiecewisePolynomial& g, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("fx_transform: x > 0 violated");
  const double left = g.left_limit(x);
  const double right = g.right_limit(x);
  std::vector<double> bps;
  std::vector<Polynomial> pieces;
  const auto& src_bps = g.breakpoints();
  for (std::size_t i = 0; i < src_bps.size(); ++i) {
    const double start = src_bps[i];
    const double end = i + 1 < src_bps.size() ? src_bps[i + 1] : std::numeric_limits<double>::infinity();
    const Polynomial& p = g.pieces()[i];
    if (start < x && x < end) {
      bps.push_back(start);
      pieces.push_back(p + Polynomial({-left}));
      bps.push_back(x);
      pieces.push_back(p + Polynomial({-right}));
    } else {
      bps.push_back(start);
      pieces.push_back(p + Polynomial({start < x ? -left : -right}));
    }
  }
  return {std::move(bps), std::move(pieces)};
}

double total_variation(const PiecewisePolynomial& g, double a, double b) {
  if (!(a <= b)) throw DomainError("total_variation: a <= b violated");
  if (a == b) return 0.0;
  const auto& bps = g.breakpoints();
  double tv = 0.0;
  for (std::size_t i = 0; i < bps.size(); ++i) {
    const double start = bps[i];
    const double end = i + 1 < bps.size() ? bps[i + 1] : std::numeric_limits<double>::infinity();
    const Polynomial& p = g.pieces()[i];
    if (i > 0 && start == b) {
      tv += std::fabs(p(start) - g.pieces()[i - 1](start));
      continue;
    }
    const double lo = std::max(a, start);
    const double hi = std::min(b, end);
    if (!(lo < hi)) continue;
    std::vector<double> knots{lo};
    for (double r : p.derivative().real_roots(lo, hi))
      if (r > knots.back() && r < hi) knots.push_back(r);
    knots.push_back(hi);
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) tv += std::fabs(p(knots[k + 1]) - p(knots[k]));
    // Jump into this piece from the previous one. g is right-continuous, so a
    // jump at a is invisible on [a, b] while a jump at b is part of it.
    if (i > 0 && start > a && start < b) tv += std::fabs(p(start) - g.pieces()[i - 1](start));
  }
  return tv;
}

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto k = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (k * k > n) --k;
  while ((k + 1) * (k + 1) <= n) ++k;
  return k;
}

BoundRow assemble_bound(const TestFunction& f, double x, std::uint64_t n, OperatorSpec spec, double C,
                        const Accuracy& acc) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("bound: x > 0 violated");
  if (!(C >= 1.0)) throw DomainError("bound: C >= 1 violated: C = " + std::to_string(C));
  spec.n = n;
  spec.normalized = true;
  spec.validate();
  const double c = spec.kernel_c();
  const double nd = static_cast<double>(n);
  const double r = static_cast<double>(spec.r);
  if (!(nd > (r + 3.0) * c))
    throw InsufficientN("bound: needs n > (r + 3) c, got n = " + std::to_string(n));
  const GrowthEnvelope& env = f.envelope();
  if (!(nd / c - r > 2.0 * env.q + 1.0))
    throw InsufficientN("bound: tail moment of order 2q needs n/c > r + 2q + 1");
  if (env.t0 > 2.0 * x)
    throw DomainError("bound: growth envelope of '" + f.name() + "' starts at t0 = " + std::to_string(env.t0) +
                      " > 2x = " + std::to_string(2.0 * x));

  const PiecewisePolynomial g = fx_transform(f.derivative(), x);
  const std::uint64_t kmax = isqrt(n);
  double tv_sum = 0.0;
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    const double h = x / static_cast<double>(k);
    tv_sum += total_variation(g, x - h, x + h);
  }
  const double root_n = std::sqrt(nd);
  const double h = x / root_n;
  const double tv_small = total_variation(g, x - h, x + h);

  const double dr = f.derivative_right(x);
  const double dl = f.derivative_left(x);
  const double fx = f(x);

  BoundRow row;
  row.n = n;
  row.x = x;
  row.C = C;
  row.measured_error = std::numeric_limits<double>::quiet_NaN();
  row.term_tv = C * x / nd * (tv_sum + x / root_n * tv_small);
  row.term_f2x = C / nd * (std::fabs(f(2.0 * x) - fx - x * dr) + std::fabs(fx)) + std::fabs(dr) * C * x / nd;
  row.term_jump = 0.5 * std::sqrt(C * x * x / nd) * std::fabs(dr - dl);
  row.term_mean = 0.5 * std::fabs(dr + dl) * std::fabs(closed_central_moment(1, x, spec));
  row.term_tail = env.M * std::pow(2.0, 2.0 * env.q) * numeric_moment(2 * env.q, x, spec, acc, true);
  row.bound_total = row.term_tv + row.term_jump + row.term_mean + row.term_f2x + row.term_tail;
  return row;
}

}  // namespace

BoundRow bv_rate_bound(const TestFunction& f, double x, std::uint64_t n, const OperatorSpec& spec, double C,
                        const Accuracy& acc) {
  OperatorSpec s = spec;
  s.family = Family::JainBaskakov;
  s.c = 1.0;
  return assemble_bound(f, x, n, s, C, acc);
}

BoundRow bv_rate_bound_c(const TestFunction& f, double x, std::uint64_t n, const OperatorSpec& spec, double C1,
                        const Accuracy& acc) {
  OperatorSpec s = spec;
  s.family = Family::JainBaskakovC;
  return assemble_bound(f, x, n, s, C1, acc);
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  for (unsigned t = 0; t < threads; ++t)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<BoundRow> error_vs_bound(const TestFunction& f, std::span<const double> x_grid,
                                     std::span<const std::uint64_t> n_grid, const OperatorSpec& spec,
                                     const Accuracy& acc, std::optional<double> C, unsigned jobs) {
  if (x_grid.empty() || n_grid.empty()) throw DomainError("error_vs_bound: grids must be nonempty");
  std::vector<std::uint64_t> ns(n_grid.begin(), n_grid.end());
  std::vector<double> xs(x_grid.begin(), x_grid.end());
  std::sort(ns.begin(), ns.end());
  std::sort(xs.begin(), xs.end());
  const bool c_family = spec.family == Family::JainBaskakovC;
  const double c = c_family ? spec.c : 1.0;
  const double constant = C ? *C : estimate_sandwich_C(spec.r, spec.mu, ns, xs, c).C;

  const Integrand integrand = f.to_integrand();
  std::vector<BoundRow> rows(ns.size() * xs.size());
  parallel_for(rows.size(), jobs, [&](std::size_t idx) {
    const std::uint64_t n = ns[idx / xs.size()];
    const double x = xs[idx % xs.size()];
    BoundRow row = c_family ? bv_rate_bound_c(f, x, n, spec, constant, acc)
                            : bv_rate_bound(f, x, n, spec, constant, acc);
    OperatorSpec s = spec;
    s.n = n;
    s.normalized = true;
    if (!c_family) {
      s.family = Family::JainBaskakov;
      s.c = 1.0;
    }
    row.measured_error = std::fabs(evaluate(integrand, x, s, acc) - f(x));
    rows[idx] = row;
  });
  return rows;
}

double MuRule::operator()(std::uint64_t n) const {
  if (kind == Kind::Constant) return value;
  return 1.0 / std::sqrt(static_cast<double>(n));
}

MuRule MuRule::parse(const std::string& text) {
  if (text == "inv-sqrt") return {Kind::InvSqrt, 0.0};
  const std::string prefix = "const:";
  if (text.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size() - prefix.size())
      throw DomainError("mu-rule must be inv-sqrt or const:<v>, got '" + text + "'");
    if (!(v >= 0.0 && v <= kMuMax))
      throw DomainError("mu-rule: mu in [0, 0.99] violated: const:" + std::to_string(v));
    return {Kind::Constant, v};
  }
  throw DomainError("mu-rule must be inv-sqrt or const:<v>, got '" + text + "'");
}

std::vector<KorovkinRow> korovkin_check(Family family, std::uint64_t r, double c, const MuRule& rule, double lo,
                                        double hi, std::span<const std::uint64_t> n_grid, const Accuracy& acc,
                                        std::size_t mesh, unsigned jobs) {
  if (family != Family::JainBaskakov && family != Family::JainBaskakovC)
    throw DomainError("korovkin: family must be jain-baskakov or jain-baskakov-c");
  if (!(lo >= 0.0 && lo < hi)) throw DomainError("korovkin: compact interval needs 0 <= lo < hi");
  if (mesh < 2) throw DomainError("korovkin: mesh needs at least 2 points");
  if (n_grid.empty()) throw DomainError("korovkin: n grid must be nonempty");
  std::vector<std::uint64_t> ns(n_grid.begin(), n_grid.end());
  std::sort(ns.begin(), ns.end());
  std::vector<KorovkinRow> rows(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    OperatorSpec spec;
    spec.family = family;
    spec.n = ns[i];
    spec.r = r;
    spec.c = family == Family::JainBaskakovC ? c : 1.0;
    spec.mu = rule(ns[i]);
    spec.validate();
    rows[i].n = ns[i];
    rows[i].mu = spec.mu;
  }
  // One task per (n, mesh point); reduction below runs in a fixed order.
  std::vector<double> errors(ns.size() * mesh * 3);
  parallel_for(ns.size() * mesh, jobs, [&](std::size_t idx) {
    const std::size_t i = idx / mesh;
    const std::size_t j = idx % mesh;
    const double x = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(mesh - 1);
    OperatorSpec spec;
    spec.family = family;
    spec.n = rows[i].n;
    spec.r = r;
    spec.c = family == Family::JainBaskakovC ? c : 1.0;
    spec.mu = rows[i].mu;
    for (unsigned m = 0; m <= 2; ++m)
      errors[idx * 3 + m] = std::fabs(numeric_moment(m, x, spec, acc, false) - std::pow(x, m));
  });
  for (std::size_t i = 0; i < ns.size(); ++i)
    for (std::size_t j = 0; j < mesh; ++j)
      for (unsigned m = 0; m <= 2; ++m)
        rows[i].sup_error[m] = std::max(rows[i].sup_error[m], errors[(i * mesh + j) * 3 + m]);
  return rows;
}

KorovkinSummary summarize_korovkin(std::span<const KorovkinRow> rows) {
  KorovkinSummary s;
  if (rows.empty()) return s;
  for (unsigned m = 0; m <= 2; ++m) {
    bool ok = rows.size() >= 2;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double prev = rows[i - 1].sup_error[m];
      const double cur = rows[i].sup_error[m];
      const bool noise = prev < kKorovkinNoiseFloor && cur < kKorovkinNoiseFloor;
      if (!(cur < prev) && !noise) ok = false;
    }
    s.decreasing[m] = ok;
  }
  s.final_m1 = rows.back().sup_error[1];
  s.plateau = rows.size() >= 2 && s.final_m1 > kKorovkinNoiseFloor &&
              s.final_m1 >= 0.75 * rows.front().sup_error[1];
  return s;
}

}  // namespace jainops
