#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sfde/errors.hpp"
#include "sfde/mlf.hpp"

using namespace sfde;

TEST_CASE("special values") {
  CHECK(mittag_leffler(1.0, 1.0, -1.0) == doctest::Approx(0.36787944117).epsilon(1e-11));
  CHECK(mittag_leffler(0.5, 1.0, -1.0) == doctest::Approx(0.42758357615).epsilon(1e-10));
  CHECK(std::abs(mittag_leffler(0.5, 1.0, -1.0) - test::erfcx(1.0)) <= 1e-12);
  CHECK(mittag_leffler(0.7, 0.9, 0.0) == doctest::Approx(1.0 / std::tgamma(0.9)).epsilon(1e-14));
  CHECK(mittag_leffler(0.7, 0.9, 0.0) == doctest::Approx(0.9357787209128731).epsilon(1e-12));
}

TEST_CASE("domain") {
  CHECK_THROWS_AS(mittag_leffler(0.5, 1.0, 0.1), DomainError);
  CHECK_THROWS_AS(mittag_leffler(0.0, 1.0, -1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(1.2, 1.0, -1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(0.5, 0.0, -1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(0.5, 4.5, -1.0), DomainError);
  CHECK_THROWS_AS((MlfParams{0.5, -1.0}.validate()), DomainError);
}

TEST_CASE("exponential case") {
  for (int i = 0; i <= 500; ++i) {
    const double x = 0.1 * i;
    CHECK(std::abs(mittag_leffler(1.0, 1.0, -x) - std::exp(-x)) <= 1e-10);
  }
  // E_{1,2}(x) = (e^x - 1) / x
  for (double x : {-1e-8, -0.3, -5.0, -80.0})
    CHECK(mittag_leffler(1.0, 2.0, x) == doctest::Approx(std::expm1(x) / x).epsilon(1e-12));
}

TEST_CASE("half order against erfcx") {
  for (double s : {0.01, 0.5, 1.0, 3.0, 10.0, 100.0, 1000.0})
    CHECK(std::abs(mittag_leffler(0.5, 1.0, -s) - test::erfcx(s)) <= 1e-12);
}

TEST_CASE("monotone decay on the negative axis") {
  for (double a : {0.2, 0.5, 0.8, 0.99}) {
    double prev = mittag_leffler(a, 1.0, 0.0);
    CHECK(prev == doctest::Approx(1.0));
    for (int i = 1; i <= 500; ++i) {
      const double v = mittag_leffler(a, 1.0, -0.1 * i);
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("recurrence on random triples") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> ua(0.1, 1.0), ub(0.1, 2.0), ux(0.0, 100.0);
  for (int i = 0; i < 100; ++i) {
    const double a = ua(gen), b = ub(gen), x = -ux(gen);
    const double rhs = 1.0 / std::tgamma(b) + x * mittag_leffler(a, a + b, x);
    CHECK(std::abs(mittag_leffler(a, b, x) - rhs) <= 1e-9);
  }
}

TEST_CASE("high precision oracle, moderate arguments") {
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    for (double b : {0.2, 0.6, 1.0, 1.1, 1.5, 1.9}) {
      for (double x : {-0.01, -0.5, -1.0, -2.0, -3.5, -5.0}) {
        if (std::pow(std::abs(x), 1.0 / a) > 60.0) continue;
        const double ref = test::mittag_leffler_hp(a, b, x);
        INFO("a=" << a << " b=" << b << " x=" << x);
        CHECK(std::abs(mittag_leffler(a, b, x) - ref) <= 1e-10);
      }
    }
  }
}

TEST_CASE("high precision oracle, large arguments") {
  for (double a : {0.2, 0.4, 0.6, 0.8, 0.95}) {
    for (double b : {0.3, 0.8, 1.0, 1.3, 1.7}) {
      for (double x : {-5.0, -20.0, -100.0, -1e3, -1e4, -1e6}) {
        const double ref = test::mittag_leffler_hp(a, b, x);
        INFO("a=" << a << " b=" << b << " x=" << x);
        CHECK(std::abs(mittag_leffler(a, b, x) - ref) <= 1e-10);
      }
    }
  }
}

TEST_CASE("regimes agree where both are accurate") {
  for (double a : {0.3, 0.6, 0.9}) {
    for (double x : {-0.5, -1.0}) {
      CHECK(std::abs(detail::mittag_leffler_taylor(a, 1.0, x) - detail::mittag_leffler_integral(a, 1.0, x)) <= 1e-12);
    }
  }
}
