#include <doctest.h>

#include <cmath>
#include <random>

#include "jainops/errors.hpp"
#include "jainops/moments.hpp"
#include "jainops/operators.hpp"

using namespace jainops;

namespace {

// Brute-force oracle (500-term series, per-term adaptive quadrature at
// 50 digits) from tests/oracles/compute_oracles.py.
constexpr double kK_expm_12_0_0p2_1 = 0.26209968869745480631;

OperatorSpec make(Family fam, std::uint64_t n, std::uint64_t r, double mu, double c = 1.0) {
  OperatorSpec s;
  s.family = fam;
  s.n = n;
  s.r = r;
  s.mu = mu;
  s.c = c;
  return s;
}

Integrand poly(std::vector<double> c) { return Integrand::polynomial(Polynomial(std::move(c))); }

// Same polynomial, forced down the per-term quadrature path.
Integrand poly_as_callback(const Polynomial& p) {
  double m = 0.0;
  for (double a : p.coefficients()) m += std::fabs(a);
  return Integrand::callback([p](double t) { return p(t); }, static_cast<unsigned>((p.degree() + 1) / 2),
                             std::max(m, 1e-300));
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

}  // namespace

TEST_SUITE("operators") {
  const Accuracy acc{};

  TEST_CASE("spec validation names the violated precondition") {
    auto s = make(Family::JainBaskakov, 10, 0, 1.5);
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("mu in [0, 0.99]"), DomainError);
    s = make(Family::JainBaskakov, 3, 2, 0.1);
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("n > r + 1"), DomainError);
    s = make(Family::JainBaskakovC, 6, 2, 0.1, 2.0);
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("n > (r + 1) c"), DomainError);
    s = make(Family::Stancu, 10, 0, 0.1);
    s.alpha = 2.0;
    s.beta = 1.0;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("0 <= alpha <= beta"), DomainError);
    CHECK_THROWS_AS(parse_family("szasz"), DomainError);
    CHECK(parse_family("jain-baskakov-c") == Family::JainBaskakovC);
  }

  TEST_CASE("jain operator moments") {
    for (double x : {0.3, 1.0, 4.0})
      for (double mu : {0.0, 0.5, 0.9})
        CHECK(eval_jain(poly({1.0}), x, 10, mu, acc) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(eval_jain(poly({0.0, 1.0}), 1.0, 10, 0.5, acc) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(eval_jain(poly({0.0, 0.0, 1.0}), 1.0, 10, 0.5, acc) == doctest::Approx(4.8).epsilon(1e-8));
    CHECK(eval_jain(poly({3.0, 0.0, 1.0}), 0.0, 10, 0.5, acc) == 3.0);
  }

  TEST_CASE("K examples") {
    CHECK(eval_K(poly({1.0}), 1.5, make(Family::JainBaskakov, 10, 2, 0.3), acc) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rel(eval_K(poly({0.0, 1.0}), 2.0, make(Family::JainBaskakov, 10, 1, 0.0), acc), 22.0 / 7.0) < 1e-9);
    const auto expm = Integrand::callback([](double t) { return std::exp(-t); }, 0, 1.0);
    CHECK(rel(eval_K(expm, 1.0, make(Family::JainBaskakov, 12, 0, 0.2), acc), kK_expm_12_0_0p2_1) < 1e-9);
    CHECK_THROWS_AS(eval_K(poly({0, 0, 0, 0, 1}), 1.0, make(Family::JainBaskakov, 5, 0, 0.0), acc), DivergentIntegral);
  }

  TEST_CASE("K with c") {
    CHECK(rel(eval_K_c(poly({0.0, 1.0}), 1.0, make(Family::JainBaskakovC, 20, 1, 0.1, 2.0), acc), 21.8 / 12.6) <
          1e-9);
    for (double c : {0.5, 2.0, 3.0})
      CHECK(eval_K_c(poly({1.0}), 0.7, make(Family::JainBaskakovC, 30, 1, 0.2, c), acc) ==
            doctest::Approx(1.0).epsilon(1e-10));
    for (double x : {0.5, 1.0, 3.0}) {
      const double a = eval_K_c(poly({0, 0, 1}), x, make(Family::JainBaskakovC, 15, 1, 0.2, 1.0), acc);
      const double b = eval_K(poly({0, 0, 1}), x, make(Family::JainBaskakov, 15, 1, 0.2), acc);
      CHECK(rel(a, b) < 1e-10);
    }
  }

  TEST_CASE("stancu") {
    auto st = make(Family::Stancu, 12, 1, 0.2);
    auto base = make(Family::JainBaskakov, 12, 1, 0.2);
    for (double x : {0.5, 1.0, 2.0})
      CHECK(rel(eval_stancu(poly({0, 0, 0, 1}), x, st, acc), eval_K(poly({0, 0, 0, 1}), x, base, acc)) < 1e-11);
    st.alpha = 1.0;
    st.beta = 2.0;
    CHECK(eval_stancu(poly({1.0}), 1.3, st, acc) == doctest::Approx(1.0).epsilon(1e-10));
    auto st0 = make(Family::Stancu, 10, 0, 0.0);
    st0.alpha = 1.0;
    st0.beta = 2.0;
    const OperatorSpec k0 = make(Family::JainBaskakov, 10, 0, 0.0);
    for (double x : {0.5, 2.0}) {
      const double expected = (10.0 / 12.0) * closed_K_moment(1, x, k0) + (1.0 / 12.0) * closed_K_moment(0, x, k0);
      CHECK(rel(eval_stancu(poly({0, 1}), x, st0, acc), expected) < 1e-10);
    }
  }

  TEST_CASE("raw prefactor") {
    auto s = make(Family::JainBaskakov, 10, 2, 0.1);
    s.normalized = false;
    const double raw = eval_K(poly({1.0}), 1.0, s, acc);
    // n^r (n-r-1)!/(n-2)! Σω∫p with Σω∫p = 1/(n-r-1) for f = 1.
    const double expected = 100.0 * 720.0 / 40320.0;
    CHECK(rel(raw, expected) < 1e-10);
    CHECK(rel(s.raw_to_normalized_ratio(), expected) < 1e-13);
  }

  TEST_CASE("x = 0 is the continuous extension") {
    const auto s = make(Family::JainBaskakov, 10, 1, 0.3);
    CHECK(rel(eval_K(poly({0, 1}), 0.0, s, acc), closed_K_moment(1, 0.0, s)) < 1e-12);
    CHECK(rel(eval_K(poly({0, 1}), 0.0, s, acc), eval_K(poly({0, 1}), 1e-9, s, acc)) < 1e-7);
    CHECK_THROWS_AS(eval_K(poly({1}), -1.0, s, acc), DomainError);
  }

  TEST_CASE("polynomial fast path equals quadrature path") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (unsigned deg = 0; deg <= 4; ++deg)
      for (const auto& s : {make(Family::JainBaskakov, 20, 1, 0.1), make(Family::JainBaskakovC, 30, 0, 0.3, 2.0),
                            make(Family::Jain, 15, 0, 0.2)}) {
        std::vector<double> c(deg + 1);
        for (auto& a : c) a = coef(rng);
        c.back() = 1.0 + std::fabs(c.back());
        const Polynomial p(c);
        for (double x : {0.5, 1.0, 3.0}) {
          const double fast = evaluate(Integrand::polynomial(p), x, s, acc);
          const double slow = evaluate(poly_as_callback(p), x, s, acc);
          double scale = 0.0;
          for (double a : c) scale += std::fabs(a) * std::pow(std::max(x, 1.0), 1.0 * deg);
          INFO("family=" << family_name(s.family) << " deg=" << deg << " x=" << x);
          CHECK(std::fabs(fast - slow) <= 1e-8 * std::max(std::fabs(fast), 1e-3 * scale));
        }
      }
  }

  TEST_CASE("linearity, positivity and monotonicity") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const auto s = make(Family::JainBaskakov, 25, 1, 0.2);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> a(4), b(4);
      for (auto& v : a) v = coef(rng);
      for (auto& v : b) v = coef(rng);
      const double ka = coef(rng), kb = coef(rng);
      const Polynomial pa(a), pb(b);
      const double x = 0.25 + 3.0 * std::fabs(coef(rng));
      const double lhs = evaluate(Integrand::polynomial(pa * ka + pb * kb), x, s, acc);
      const double rhs = ka * evaluate(Integrand::polynomial(pa), x, s, acc) +
                         kb * evaluate(Integrand::polynomial(pb), x, s, acc);
      CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::max(1.0, std::fabs(lhs)));
    }
    // Nonnegative integrands: squares, a bump and |t - 1|.
    const auto sq = Integrand::polynomial(Polynomial({1.0, -2.0, 1.0}));
    const auto bump = Integrand::callback([](double t) { return std::exp(-50.0 * (t - 3.0) * (t - 3.0)); }, 0, 1.0);
    const auto absdev = Integrand::callback([](double t) { return std::fabs(t - 1.0); }, 1, 1.0, {1.0});
    for (double x : {0.1, 1.0, 5.0}) {
      CHECK(evaluate(sq, x, s, acc) >= 0.0);
      CHECK(evaluate(bump, x, s, acc) >= 0.0);
      CHECK(evaluate(absdev, x, s, acc) >= 0.0);
    }
    // f = t² <= g = t² + t on [0, ∞).
    for (double x : {0.2, 1.0, 4.0})
      CHECK(evaluate(poly({0, 0, 1}), x, s, acc) <= evaluate(poly({0, 1, 1}), x, s, acc) + 1e-9);
  }

  TEST_CASE("piecewise integrand") {
    // |t - 1| + t as a piecewise polynomial versus the callback form.
    const PiecewisePolynomial pw({0.0, 1.0}, {Polynomial({1.0}), Polynomial({-1.0, 2.0})});
    const auto cb = Integrand::callback([](double t) { return std::fabs(t - 1.0) + t; }, 1, 2.0, {1.0});
    const auto s = make(Family::JainBaskakov, 30, 0, 0.05);
    for (double x : {0.5, 1.0, 2.0})
      CHECK(rel(evaluate(Integrand::piecewise(pw), x, s, acc), evaluate(cb, x, s, acc)) < 1e-10);
  }

  TEST_CASE("envelope violations are rejected") {
    CHECK_THROWS_AS(Integrand::callback([](double t) { return std::exp(t); }, 2, 1.0), DomainError);
  }
}
