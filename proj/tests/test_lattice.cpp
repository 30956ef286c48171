#include <cmath>
#include <random>

#include "doctest.h"
#include "tsorder/lattice.hpp"

using namespace tsorder;

TEST_SUITE("lattice") {

TEST_CASE("rising factorial basics") {
  CHECK(rising_factorial(1.0, 5.0) == doctest::Approx(120.0).epsilon(1e-14));
  CHECK(rising_factorial(3.7, 0.0) == 1.0);
  CHECK(rising_factorial(2.5, 2.0) == doctest::Approx(8.75).epsilon(1e-14));
  // non-integer order goes through log-gamma
  CHECK(rising_factorial(2.0, 1.5) ==
        doctest::Approx(std::exp(std::lgamma(3.5) - std::lgamma(2.0)))
            .epsilon(1e-13));
  CHECK_THROWS_AS(rising_factorial(-1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(rising_factorial(1.0, -2.0), std::domain_error);
}

TEST_CASE("rising factorial recurrence") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ux(0.01, 10.0), uk(0.0, 10.0);
  for (int rep = 0; rep < 500; ++rep) {
    const double x = ux(gen);
    const double k = uk(gen);
    const double lhs = rising_factorial(x, k + 1.0);
    const double rhs = rising_factorial(x, k) * (x + k);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("falling factorial basics") {
  CHECK(falling_factorial(5.0, 5.0) == 120.0);
  CHECK(falling_factorial(9.2, 0.0) == 1.0);
  CHECK(falling_factorial(3.0, 5.0) == 0.0);  // factor (3-3) annihilates
  CHECK(falling_factorial(4.0, 2.0) == 12.0);
  // non-integer pole configuration rejected
  CHECK_THROWS_AS(falling_factorial(1.0, 3.5), std::domain_error);
  CHECK_THROWS_AS(falling_factorial(-2.0, 1.0), std::domain_error);
}

TEST_CASE("falling factorial recurrence") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ux(0.5, 10.0), uk(0.0, 10.0);
  for (int rep = 0; rep < 500; ++rep) {
    const double x = ux(gen);
    double k = uk(gen);
    if (x - k <= 0.1) k = x - 0.5;  // keep x - k positive for the step
    if (k < 0.0) continue;
    const double lhs = falling_factorial(x, k + 1.0);
    const double rhs = falling_factorial(x, k) * (x - k);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("taylor monomials") {
  CHECK(taylor_monomial(Convention::delta, 0.0, 3.3) == 1.0);
  CHECK(taylor_monomial(Convention::nabla, 1.0, 4.2) ==
        doctest::Approx(4.2).epsilon(1e-14));
  CHECK(taylor_monomial(Convention::delta, 2.0, 4.0) ==
        doctest::Approx(6.0).epsilon(1e-14));
  // nonnegative on the admissible wedge
  for (double x : {0.5, 1.0, 2.5, 7.0}) {
    for (double k : {0.0, 0.5, 1.0, 2.0}) {
      if (x < k) continue;
      CHECK(taylor_monomial(Convention::delta, k, x) >= 0.0);
      CHECK(taylor_monomial(Convention::nabla, k, x) >= 0.0);
    }
  }
}

TEST_CASE("generalized binomial") {
  CHECK(generalized_binomial(5.0, 2) == doctest::Approx(10.0));
  CHECK(generalized_binomial(0.5, 2) == doctest::Approx(-0.125));
  CHECK(generalized_binomial(3.7, 0) == 1.0);
  CHECK(generalized_binomial(3.0, 5) == 0.0);
  CHECK_THROWS_AS(generalized_binomial(1.0, -1), std::domain_error);
}

TEST_CASE("generalized binomial pascal recurrence") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> ua(-5.0, 8.0);
  for (int rep = 0; rep < 400; ++rep) {
    const double a = ua(gen);
    for (int j = 1; j <= 20; ++j) {
      const double lhs = generalized_binomial(a, j);
      const double rhs =
          generalized_binomial(a - 1.0, j - 1) + generalized_binomial(a - 1.0, j);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("lattice exponentials") {
  CHECK(delta_exponential(0.0, 5.0) == 1.0);
  CHECK(delta_exponential(1.0, 2.0) == doctest::Approx(8.0));
  CHECK(nabla_exponential(0.5, 1.0) == 1.0);
  CHECK(nabla_exponential(0.5, 3.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(delta_exponential(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(nabla_exponential(1.5, 1.0), std::domain_error);
}

TEST_CASE("lattice point membership") {
  CHECK(LatticePoint::on_lattice(3.5, 0.5));
  CHECK(LatticePoint::on_lattice(1.0, 1.0));
  CHECK_FALSE(LatticePoint::on_lattice(3.4, 0.5));
  CHECK_FALSE(LatticePoint::on_lattice(0.5, 1.5));
}

}  // TEST_SUITE
