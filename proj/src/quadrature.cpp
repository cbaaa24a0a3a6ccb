#include "jainops/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "jainops/compensated_sum.hpp"
#include "jainops/errors.hpp"

namespace jainops {

namespace {

// Kronrod abscissae on [-1, 1]; odd indices are the embedded Gauss points.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  double abs_value;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// Integrand in u-space including the Jacobian of t = u/(1-u).
double mapped(const std::function<double(double)>& g, double u) {
  const double one_minus = 1.0 - u;
  if (one_minus <= 0.0) return 0.0;
  const double t = u / one_minus;
  const double val = g(t);
  if (val == 0.0) return 0.0;
  return val / (one_minus * one_minus);
}

Panel gk15(const std::function<double(double)>& g, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double fv[15];
  fv[7] = mapped(g, center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = mapped(g, center - dx);
    fv[14 - j] = mapped(g, center + dx);
  }
  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  double resabs = kWgk[7] * std::fabs(fv[7]);
  for (int j = 0; j < 7; ++j) {
    const double pair = fv[j] + fv[14 - j];
    resk += kWgk[j] * pair;
    resabs += kWgk[j] * (std::fabs(fv[j]) + std::fabs(fv[14 - j]));
    if (j % 2 == 1) resg += kWg[j / 2] * pair;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fv[7] - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::fabs(fv[j] - mean) + std::fabs(fv[14 - j] - mean));
  resk *= half;
  resg *= half;
  resabs *= std::fabs(half);
  resasc *= std::fabs(half);
  double err = std::fabs(resk - resg);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  return {lo, hi, resk, err, resabs};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& g, double a, double b,
                           const Accuracy& acc, std::span<const double> split_points) {
  if (!(a >= 0.0) || !(b >= a))
    throw DomainError("quadrature: need 0 <= a <= b, got [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
  if (a == b) return {};
  const auto to_u = [](double t) { return std::isinf(t) ? 1.0 : t / (1.0 + t); };
  const double ua = to_u(a);
  const double ub = to_u(b);

  std::vector<double> knots{ua};
  for (double s : split_points) {
    if (!(s > a && s < b)) continue;
    knots.push_back(to_u(s));
  }
  knots.push_back(ub);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  std::priority_queue<Panel> heap;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) heap.push(gk15(g, knots[i], knots[i + 1]));

  const auto totals = [&heap]() {
    // Sum over a copy of the heap in a fixed (heap) order.
    auto copy = heap;
    CompensatedSum value, error, abs_value;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      abs_value += copy.top().abs_value;
      copy.pop();
    }
    return QuadratureResult{value.value(), error.value(), abs_value.value(), 0};
  };

  double value = 0.0, error = 0.0, abs_value = 0.0;
  {
    auto t = totals();
    value = t.value;
    error = t.error;
    abs_value = t.abs_value;
  }
  while (error > acc.quad_rel_eps * abs_value && error > 0.0) {
    if (heap.size() >= acc.panel_cap)
      throw QuadratureNoConvergence("quadrature: panel_cap = " + std::to_string(acc.panel_cap) +
                                    " exceeded (error estimate " + std::to_string(error) +
                                    ", |integral| " + std::to_string(abs_value) + ")");
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // Panel at floating-point resolution: accept it as is.
      heap.pop();
      error -= worst.error;
      worst.error = 0.0;
      heap.push(worst);
    } else {
      heap.pop();
      const Panel left = gk15(g, worst.lo, mid);
      const Panel right = gk15(g, mid, worst.hi);
      heap.push(left);
      heap.push(right);
      value += left.value + right.value - worst.value;
      error += left.error + right.error - worst.error;
      abs_value += left.abs_value + right.abs_value - worst.abs_value;
      if (error <= acc.quad_rel_eps * abs_value) {
        // Re-sum exactly to shed drift from the incremental updates.
        auto t = totals();
        value = t.value;
        error = t.error;
        abs_value = t.abs_value;
      }
    }
  }
  auto t = totals();
  t.panels = heap.size();
  return t;
}

double semiinf_quadrature(const std::function<double(double)>& g, const Accuracy& acc,
                          std::span<const double> split_points) {
  return integrate(g, 0.0, std::numeric_limits<double>::infinity(), acc, split_points).value;
}

}  // namespace jainops
