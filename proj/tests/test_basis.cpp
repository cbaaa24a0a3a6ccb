#include <doctest.h>

#include <boost/math/distributions/negative_binomial.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "jainops/basis.hpp"
#include "jainops/compensated_sum.hpp"
#include "jainops/errors.hpp"
#include "jainops/quadrature.hpp"
#include "jainops/special.hpp"

using namespace jainops;

namespace {

// Values from tests/oracles/compute_oracles.py (mpmath, 50 digits).
constexpr double kJainLog_3_2p5_0p4 = -1.9588030980535424149;
constexpr double kJainW_2_0p5_0p9 = 0.057648835140612146895;
constexpr double kBaskLog_4_2_0p5 = -1.5164999167748312267;
constexpr double kBmi_10_0_2_2_c2 = 0.0625;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// Textbook log-weight in long double; fine for the moderate v used here.
long double naive_jain_log(long double a, long double mu, unsigned v) {
  if (v == 0) return -a;
  const long double lam = a + v * mu;
  return std::log(a) + (v - 1.0L) * std::log(lam) - lam - std::lgamma(v + 1.0L);
}

}  // namespace

TEST_SUITE("basis") {
  TEST_CASE("jain log weight examples") {
    CHECK(jain_log_weight({1.0, 0.2, 0}) == -1.0);
    CHECK(jain_log_weight({1.0, 0.0, 1}) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(rel(jain_log_weight({2.5, 0.4, 3}), kJainLog_3_2p5_0p4) < 1e-14);
    CHECK(jain_weight({3.0, 0.5, 0}) == doctest::Approx(std::exp(-3.0)).epsilon(1e-15));
    CHECK(rel(jain_weight({0.5, 0.9, 2}), kJainW_2_0p5_0p9) < 1e-14);
  }

  TEST_CASE("jain weight rejects bad arguments") {
    CHECK_THROWS_AS(jain_log_weight({0.0, 0.2, 1}), DomainError);
    CHECK_THROWS_AS(jain_log_weight({1.0, 1.0, 1}), DomainError);
    CHECK_THROWS_AS(jain_log_weight({1.0, -0.1, 1}), DomainError);
  }

  TEST_CASE("jain weight matches the direct formula") {
    for (double a : {0.1, 1.0, 7.5, 40.0})
      for (double mu : {0.0, 0.3, 0.8})
        for (unsigned v : {0u, 1u, 2u, 5u, 20u, 60u}) {
          const long double ref = naive_jain_log(a, mu, v);
          CHECK(std::fabs(jain_log_weight({a, mu, v}) - static_cast<double>(ref)) <=
                1e-12 * std::max(1.0L, std::fabs(ref)));
        }
  }

  TEST_CASE("truncation index follows the tail rule") {
    const auto V = jain_truncation_index(1.0, 0.0, 1e-12, 1000);
    boost::math::poisson_distribution<double> pois(1.0);
    // Smallest V with mass >= 1-eps and last weight < eps*mass.
    CHECK(V == 15);
    CHECK(boost::math::cdf(boost::math::complement(pois, static_cast<double>(V))) < 1e-12);
    CHECK(boost::math::pdf(pois, static_cast<double>(V)) < 1e-12);
    CHECK(boost::math::pdf(pois, static_cast<double>(V - 1)) >= 1e-12);

    CHECK(jain_truncation_index(0.001, 0.0, 1e-6, 1000) <= 2);
    CHECK_THROWS_AS(jain_truncation_index(10.0, 0.99, 1e-10, 1000), TruncationCapExceeded);
  }

  TEST_CASE("weights are normalized and nonnegative") {
    for (double a : {0.1, 1.0, 5.0, 20.0, 50.0})
      for (double mu : {0.0, 0.1, 0.5, 0.9}) {
        const auto V = jain_truncation_index(a, mu, 1e-13, 1'000'000);
        CompensatedSum s;
        for (std::uint64_t v = 0; v <= V; ++v) {
          const double w = jain_weight({a, mu, v});
          REQUIRE(w >= 0.0);
          REQUIRE(w <= 1.0);
          s += w;
        }
        INFO("a=" << a << " mu=" << mu);
        CHECK(s.value() >= 1.0 - 1e-10);
        CHECK(s.value() <= 1.0);
      }
  }

  TEST_CASE("mu = 0 weights are Poisson") {
    for (double a : {0.1, 1.0, 5.0, 20.0, 50.0, 500.0}) {
      boost::math::poisson_distribution<double> pois(a);
      const auto V = jain_truncation_index(a, 0.0, 1e-13, 1'000'000);
      for (std::uint64_t v = 0; v <= V + 200; ++v) {
        const double ref = boost::math::pdf(pois, static_cast<double>(v));
        if (ref < 1e-300) continue;
        INFO("a=" << a << " v=" << v);
        CHECK(rel(jain_weight({a, 0.0, v}), ref) < 1e-12);
      }
    }
  }

  TEST_CASE("baskakov log weight examples") {
    CHECK(baskakov_log_weight({5.0, 0, 1.0, 1.0}) == doctest::Approx(-5.0 * std::log(2.0)).epsilon(1e-15));
    CHECK(rel(baskakov_log_weight({4.0, 2, 0.5, 1.0}), kBaskLog_4_2_0p5) < 1e-14);
    CHECK_THROWS_AS(baskakov_log_weight({4.0, 2, -0.5, 1.0}), DomainError);
    CHECK_THROWS_AS(baskakov_log_weight({0.0, 2, 0.5, 1.0}), DomainError);
  }

  TEST_CASE("c = 1 basis equals the classical binomial form") {
    for (double n : {2.0, 5.0, 17.0, 80.0})
      for (unsigned v : {0u, 1u, 4u, 30u, 200u})
        for (double t : {0.0, 0.01, 0.3, 1.0, 4.0, 50.0}) {
          const long double lg = std::lgamma(n + v + 0.0L) - std::lgamma(n + 0.0L) - std::lgamma(v + 1.0L);
          const long double log_ref =
              lg + (v ? v * std::log(static_cast<long double>(t)) : 0.0L) - (n + v) * std::log1p(static_cast<long double>(t));
          const double ref = static_cast<double>(std::exp(log_ref));
          const double got = baskakov_weight({n, v, t, 1.0});
          if (t == 0.0 && v > 0) {
            CHECK(got == 0.0);
            continue;
          }
          if (ref < 1e-300) continue;
          INFO("n=" << n << " v=" << v << " t=" << t);
          CHECK(rel(got, ref) < 1e-12);
        }
  }

  TEST_CASE("c basis is a negative binomial pmf") {
    for (double n : {3.0, 10.0, 41.0})
      for (double c : {0.5, 2.0, 3.0})
        for (double t : {0.05, 1.0, 7.0}) {
          boost::math::negative_binomial_distribution<double> nb(n / c, 1.0 / (1.0 + c * t));
          for (unsigned v : {0u, 2u, 9u, 40u}) {
            const double ref = boost::math::pdf(nb, static_cast<double>(v));
            if (ref < 1e-300) continue;
            CHECK(rel(baskakov_weight({n, v, t, c}), ref) < 1e-11);
          }
        }
  }

  TEST_CASE("monomial integral examples") {
    CHECK(baskakov_monomial_integral(5, 0, 3, 0, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(baskakov_monomial_integral(10, 1, 0, 1, 1.0) == doctest::Approx(1.0 / 28.0).epsilon(1e-15));
    CHECK(rel(baskakov_monomial_integral(10, 0, 2, 2, 2.0), kBmi_10_0_2_2_c2) < 1e-14);
    CHECK_THROWS_AS(baskakov_monomial_integral(4, 1, 0, 2, 1.0), DivergentIntegral);
  }

  TEST_CASE("monomial integral agrees with quadrature") {
    const Accuracy acc{};
    for (double c : {1.0, 2.0})
      for (std::uint64_t n : {12u, 20u, 40u})
        for (std::uint64_t r : {0u, 1u, 2u})
          for (std::uint64_t v : {0u, 3u, 10u})
            for (unsigned m : {0u, 1u, 2u}) {
              const double shape = static_cast<double>(n) - static_cast<double>(r) * c;
              const BaskakovKernel k(shape, v + r, c);
              const auto q = integrate([&](double t) { return k(t) * std::pow(t, m); }, 0.0, INFINITY, acc,
                                       std::vector<double>{k.mode()});
              const double ref = baskakov_monomial_integral(n, r, v, m, c);
              INFO("c=" << c << " n=" << n << " r=" << r << " v=" << v << " m=" << m);
              CHECK(rel(q.value, ref) < 1e-9);
            }
  }

  TEST_CASE("kernel integrates to 1/(n - c)") {
    const Accuracy acc{};
    for (double c : {0.5, 1.0, 2.5})
      for (double n : {6.0, 15.0})
        for (std::uint64_t v : {0u, 5u}) {
          const BaskakovKernel k(n, v, c);
          const double q = semiinf_quadrature([&](double t) { return k(t); }, acc, std::vector<double>{k.mode()});
          CHECK(rel(q, 1.0 / (n - c)) < 1e-10);
        }
  }

  TEST_CASE("special functions") {
    for (double z : {0.5, 1.0, 3.0, 14.9, 15.1, 40.0}) {
      const long double ref = std::lgamma(z + 1.0L) - (z + 0.5L) * std::log(static_cast<long double>(z)) + z -
                              0.5L * std::log(2.0L * std::numbers::pi_v<long double>);
      CHECK(std::fabs(special::stirlerr(z) - static_cast<double>(ref)) < 1e-15 + 1e-13 * std::fabs(static_cast<double>(ref)));
    }
    for (double z : {100.0, 1e3, 1e5}) {
      const double series = 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z * z) + 1.0 / (1260.0 * std::pow(z, 5));
      CHECK(special::stirlerr(z) == doctest::Approx(series).epsilon(1e-14));
    }
    CHECK(special::bd0(3.0, 3.0) == 0.0);
    CHECK(special::bd0(2.0, 5.0) == doctest::Approx(2.0 * std::log(2.0 / 5.0) + 5.0 - 2.0).epsilon(1e-14));
    CHECK(special::lgamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-15));
  }
}
