#include <doctest.h>

#include <cmath>
#include <vector>

#include "jainops/bvrate.hpp"
#include "jainops/errors.hpp"
#include "jainops/moments.hpp"

using namespace jainops;

namespace {

// Variation of the right-continuous g sampled on a uniform mesh of [a, b].
double mesh_tv(const PiecewisePolynomial& g, double a, double b, int points = 100000) {
  double tv = 0.0;
  double prev = g(a);
  for (int i = 1; i <= points; ++i) {
    const double t = i == points ? b : a + (b - a) * i / points;
    const double v = g(t);
    tv += std::fabs(v - prev);
    prev = v;
  }
  return tv;
}

TestFunction identity_function() {
  return TestFunction("identity", PiecewisePolynomial({0.0}, {Polynomial({0.0, 1.0})}), GrowthEnvelope{1, 1.0, 1.0});
}

OperatorSpec jb(double mu = 0.0, std::uint64_t r = 0) {
  OperatorSpec s;
  s.family = Family::JainBaskakov;
  s.mu = mu;
  s.r = r;
  return s;
}

}  // namespace

TEST_SUITE("bvrate") {
  const Accuracy acc{};

  TEST_CASE("corpus is well formed") {
    const auto corpus = default_corpus();
    REQUIRE(corpus.size() >= 5);
    bool has_jump_at_probe = false;
    for (const auto& f : corpus) {
      CHECK(f.function().max_discontinuity() < 1e-9);
      for (const auto& s : f.slopes()) {
        CHECK(s.left == doctest::Approx(f.derivative().left_limit(s.at)));
        CHECK(s.right == doctest::Approx(f.derivative().right_limit(s.at)));
        if (s.left != s.right && (s.at == 0.5 || s.at == 1.0 || s.at == 2.0)) has_jump_at_probe = true;
      }
    }
    CHECK(has_jump_at_probe);
    CHECK(corpus_function("kink")(0.5) == doctest::Approx(1.0));
    CHECK(corpus_function("kink")(3.0) == doctest::Approx(5.0));
    CHECK(std::fabs(corpus_function("exp-spline")(1.3) - std::exp(-1.3)) < 1e-4);
    CHECK_THROWS_AS(corpus_function("nope"), DomainError);
  }

  TEST_CASE("continuity and envelope are validated") {
    CHECK_THROWS_AS(TestFunction("jump", PiecewisePolynomial({0.0, 1.0}, {Polynomial({0.0}), Polynomial({1.0})}),
                                 GrowthEnvelope{1, 10.0, 0.5}),
                    DomainError);
    CHECK_THROWS_AS(TestFunction("cubic", PiecewisePolynomial({0.0}, {Polynomial({0, 0, 0, 1})}),
                                 GrowthEnvelope{1, 1.0, 1.0}),
                    DomainError);
  }

  TEST_CASE("fx transform") {
    const PiecewisePolynomial square_d({0.0}, {Polynomial({0.0, 2.0})});
    const auto g = fx_transform(square_d, 2.0);
    for (double t : {0.0, 1.0, 2.0, 3.5}) CHECK(g(t) == doctest::Approx(2.0 * t - 4.0));
    const PiecewisePolynomial abs_d({0.0, 1.0}, {Polynomial({-1.0}), Polynomial({1.0})});
    const auto h = fx_transform(abs_d, 1.0);
    for (double t : {0.0, 0.5, 0.999, 1.0, 1.5, 9.0}) CHECK(h(t) == 0.0);
    for (const auto& f : default_corpus())
      for (double x : {0.5, 1.0, 2.0}) {
        const auto gx = fx_transform(f.derivative(), x);
        CHECK(gx(x) == doctest::Approx(0.0).scale(1.0));
        CHECK(gx.left_limit(x) == doctest::Approx(0.0).scale(1.0));
        CHECK(gx.right_limit(x) == doctest::Approx(0.0).scale(1.0));
      }
  }

  TEST_CASE("total variation") {
    const PiecewisePolynomial lin({0.0}, {Polynomial({-4.0, 2.0})});
    CHECK(total_variation(lin, 1.0, 3.0) == doctest::Approx(4.0));
    const PiecewisePolynomial cube({0.0}, {Polynomial({0, 0, 0, 1})});
    CHECK(total_variation(cube, 0.5, 2.0) == doctest::Approx(8.0 - 0.125));
    const PiecewisePolynomial wave({0.0}, {Polynomial({0.0, -3.0, 0.0, 1.0})});  // t³ - 3t, min at 1
    CHECK(total_variation(wave, 0.0, 2.0) == doctest::Approx(2.0 + 4.0));
    const PiecewisePolynomial step({0.0, 1.0}, {Polynomial({0.0}), Polynomial({3.0})});
    CHECK(total_variation(step, 0.0, 2.0) == doctest::Approx(3.0));
    CHECK(total_variation(step, 0.0, 1.0) == doctest::Approx(3.0));
    CHECK(total_variation(step, 1.0, 2.0) == 0.0);
    CHECK_THROWS_AS(total_variation(step, 2.0, 1.0), DomainError);
  }

  TEST_CASE("total variation matches a dense mesh") {
    for (const auto& f : default_corpus())
      for (double x : {0.5, 1.0, 2.0}) {
        const auto g = fx_transform(f.derivative(), x);
        for (double k : {1.0, 2.0, 3.0, 7.0}) {
          const double a = x - x / k, b = x + x / k;
          INFO(f.name() << " x=" << x << " k=" << k);
          CHECK(std::fabs(total_variation(g, a, b) - mesh_tv(g, a, b)) < 1e-6);
        }
      }
  }

  TEST_CASE("smooth identity bound") {
    const auto f = identity_function();
    const double C = 3.0;
    for (double x : {0.5, 1.0, 2.0}) {
      const auto row = bv_rate_bound(f, x, 100, jb(), C, acc);
      const double t1 = closed_central_moment(1, x, integral_spec(100, 0, 0.0, 1.0));
      CHECK(row.term_tv == 0.0);
      CHECK(row.term_jump == 0.0);
      CHECK(row.term_mean == doctest::Approx(t1));
      CHECK(row.term_f2x == doctest::Approx(C * x / 100.0 + C * x / 100.0));
      CHECK(row.bound_total == row.term_tv + row.term_jump + row.term_mean + row.term_f2x + row.term_tail);
    }
  }

  TEST_CASE("kink jump term") {
    const std::vector<std::uint64_t> ng{100};
    const std::vector<double> xg{1.0};
    const double C = estimate_sandwich_C(0, 0.0, ng, xg, 1.0).C;
    const auto row = bv_rate_bound(corpus_function("kink"), 1.0, 100, jb(), C, acc);
    CHECK(row.term_jump == doctest::Approx(std::sqrt(C / 100.0)).epsilon(1e-14));
    CHECK(row.term_tv == 0.0);
  }

  TEST_CASE("c = 1 coherence and c = 2 domination") {
    OperatorSpec c1 = jb(0.05, 1);
    c1.family = Family::JainBaskakovC;
    for (const auto& f : default_corpus())
      for (double x : {0.5, 1.0, 2.0}) {
        const auto a = bv_rate_bound(f, x, 100, jb(0.05, 1), 4.0, acc);
        const auto b = bv_rate_bound_c(f, x, 100, c1, 4.0, acc);
        CHECK(std::fabs(a.bound_total - b.bound_total) <= 1e-12 * a.bound_total);
      }
    OperatorSpec c2 = c1;
    c2.c = 2.0;
    const std::vector<double> xs{0.5, 1.0, 2.0};
    const std::vector<std::uint64_t> ns{50, 100, 200};
    for (const auto& f : default_corpus())
      for (const auto& row : error_vs_bound(f, xs, ns, c2, acc, std::nullopt, 4))
        CHECK(row.measured_error <= row.bound_total);
  }

  TEST_CASE("error vs bound") {
    const std::vector<double> xs{0.5, 1.0, 2.0};
    const std::vector<std::uint64_t> ns{50, 100, 200, 400};
    for (const auto& f : default_corpus()) {
      const auto rows = error_vs_bound(f, xs, ns, jb(0.05, 1), acc, std::nullopt, 4);
      REQUIRE(rows.size() == 12);
      for (const auto& row : rows) {
        INFO(f.name() << " n=" << row.n << " x=" << row.x);
        CHECK(row.measured_error <= row.bound_total);
        CHECK(row.bound_total == row.term_tv + row.term_jump + row.term_mean + row.term_f2x + row.term_tail);
      }
      const auto again = error_vs_bound(f, xs, ns, jb(0.05, 1), acc, std::nullopt, 1);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].measured_error == again[i].measured_error);
        CHECK(rows[i].bound_total == again[i].bound_total);
      }
    }
  }

  TEST_CASE("first-order decay for t squared") {
    const std::vector<double> xs{1.0};
    const std::vector<std::uint64_t> ns{50, 100, 200, 400};
    const auto rows = error_vs_bound(corpus_function("quadratic"), xs, ns, jb(), acc);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      const double ratio = rows[i].measured_error / rows[i + 1].measured_error;
      CHECK(ratio >= 1.7);
      CHECK(ratio <= 2.3);
    }
  }

  TEST_CASE("bound preconditions") {
    CHECK_THROWS_AS(bv_rate_bound(identity_function(), 1.0, 3, jb(), 2.0, acc), InsufficientN);
    CHECK_THROWS_AS(bv_rate_bound(identity_function(), 0.25, 100, jb(), 2.0, acc), DomainError);
    CHECK_THROWS_AS(bv_rate_bound(identity_function(), 1.0, 100, jb(), 0.5, acc), DomainError);
  }

  TEST_CASE("korovkin") {
    const std::vector<std::uint64_t> ns{100, 200, 400, 800};
    const auto rows = korovkin_check(Family::JainBaskakov, 0, 1.0, MuRule::parse("inv-sqrt"), 0.5, 2.0, ns, acc);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) CHECK(row.sup_error[0] <= 1e-10);
    CHECK(rows[2].sup_error[1] < rows[0].sup_error[1]);
    CHECK(rows[2].sup_error[2] < rows[0].sup_error[2]);
    const auto s = summarize_korovkin(rows);
    CHECK((s.decreasing[0] && s.decreasing[1] && s.decreasing[2]));
    CHECK_FALSE(s.plateau);

    const auto fixed = korovkin_check(Family::JainBaskakov, 0, 1.0, MuRule::parse("const:0.3"), 0.5, 2.0, ns, acc);
    CHECK(fixed.back().sup_error[1] > 0.5);
    CHECK(summarize_korovkin(fixed).plateau);
    CHECK_THROWS_AS(MuRule::parse("sqrt"), DomainError);
    CHECK_THROWS_AS(MuRule::parse("const:1.5"), DomainError);
  }
}
