#include "ceq/cqe.hpp"
#include "ceq/synth.hpp"

#include <doctest.h>

using namespace ceq;
using doctest::Approx;

TEST_SUITE("cqe")
{
  TEST_CASE("polynomial_count is the binomial coefficient")
  {
    CHECK(polynomial_count(5, 0) == 1);
    CHECK(polynomial_count(3, 1) == 3);
    CHECK(polynomial_count(4, 2) == 6);
    CHECK(polynomial_count(40, 20) == 137846528820ULL);
    for (int n = 0; n <= 30; ++n) {
      std::uint64_t row_sum = 0;
      for (int i = 0; i <= n; ++i) {
        CHECK(polynomial_count(n, i) == polynomial_count(n, n - i));
        if (i > 0 && n > 0) {
          // Pascal's rule
          CHECK(polynomial_count(n, i) == polynomial_count(n - 1, i - 1) + (i <= n - 1 ? polynomial_count(n - 1, i) : 0));
        }
        row_sum += polynomial_count(n, i);
      }
      CHECK(row_sum == (std::uint64_t{1} << n));
    }
    CHECK_THROWS_AS(polynomial_count(3, 4), std::invalid_argument);
    CHECK_THROWS_AS(polynomial_count(3, -1), std::invalid_argument);
  }

  TEST_CASE("row_polynomial_set")
  {
    auto const one = row_polynomial_set(1);
    REQUIRE(one.terms.size() == 2);
    CHECK(one.terms[0].multiplicity == 1);
    CHECK(one.terms[1].multiplicity == 1);
    auto const two = row_polynomial_set(2);
    REQUIRE(two.terms.size() == 3);
    CHECK(two.terms[0].exponent == 0);
    CHECK(two.terms[1].multiplicity == 2);
    CHECK(two.terms[2].exponent == 2);
    CHECK(row_polynomial_set(4).terms[2].multiplicity == 6);
    CHECK_THROWS_AS(row_polynomial_set(0), std::invalid_argument);
  }

  TEST_CASE("row polynomials carry unit mass")
  {
    for (int n = 1; n <= 12; ++n) {
      auto const spec = row_polynomial_set(n);
      for (int k = 0; k <= 50; ++k) {
        double const x = 0.5 + 0.01 * k;
        CHECK(row_polynomial_mass(spec, x) == Approx(1.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("synthetic rows hold exactly the predicted polynomial multiset")
  {
    for (int n = 1; n <= 6; ++n) {
      double const x = 0.7;
      auto const t = generate<double>(n, x, {1, 1}).front();
      auto const spec = row_polynomial_set(n);
      for (Index r = 0; r < t.states(); r += 3) {
        std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
        for (Index c = 0; c < t.states(); ++c) {
          for (int i = 0; i <= n; ++i) {
            if (std::abs(t(r, c) - std::pow(x, i) * std::pow(1 - x, n - i)) < 1e-14) { ++counts[static_cast<std::size_t>(i)]; }
          }
        }
        for (auto const &term : spec.terms) { CHECK(counts[static_cast<std::size_t>(term.exponent)] == term.multiplicity); }
      }
    }
  }

  TEST_CASE("closed_determinism values")
  {
    CHECK(closed_determinism(1.0) == 1.0);
    CHECK(closed_determinism(0.5) == Approx(0.0).epsilon(1e-15));
    CHECK(closed_determinism(0.8) == Approx(0.278072).epsilon(1e-6));
    CHECK_THROWS_AS(closed_determinism(0.49), std::invalid_argument);
    CHECK_THROWS_AS(closed_determinism(1.01), std::invalid_argument);
  }

  TEST_CASE("closed_determinism is strictly increasing")
  {
    double prev = -1;
    for (int k = 0; k <= 1000; ++k) {
      double const v = closed_determinism(0.5 + 0.0005 * k);
      CHECK(v > prev);
      prev = v;
    }
  }

  TEST_CASE("row_kl matches the direct divergence of a synthetic row")
  {
    CHECK(row_kl(3, 1.0) == Approx(3.0));
    CHECK(row_kl(3, 0.5) == Approx(0.0));
    CHECK(row_kl(2, 0.8) == Approx(0.556144).epsilon(1e-6));
    for (int n = 1; n <= 8; ++n) {
      for (int k = 0; k <= 10; ++k) {
        double const x = 0.5 + 0.05 * k;
        auto const t = generate<double>(n, x, {1, 1}).front();
        Vector<double> const row = t.rows().row(t.states() / 3).transpose();
        CHECK(kl_from_uniform(row) == Approx(row_kl(n, x)).epsilon(1e-9));
        CHECK(row_kl(n, x) == Approx(n * closed_determinism(x)).epsilon(1e-15));
      }
    }
  }

  TEST_CASE("uncertainty")
  {
    CHECK(uncertainty(1.0) == 0.0);
    CHECK(uncertainty(0.5) == Approx(1.0));
    CHECK(uncertainty(std::exp2(-0.25)) == Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(uncertainty(0.0), std::invalid_argument);
    CHECK_THROWS_AS(uncertainty(-0.1), std::invalid_argument);
    double prev = 1e9;
    for (int k = 1; k <= 100; ++k) {
      double const u = uncertainty(0.01 * k);
      CHECK(u < prev);
      prev = u;
    }
  }

  TEST_CASE("cqe_residual")
  {
    for (int n = 1; n <= 6; ++n) {
      CHECK(cqe_residual(1.0, 0.0, static_cast<double>(n), n) == Approx(0.0));
      CHECK(cqe_residual(0.5, 0.0, 0.0, n) == Approx(0.0));
    }
    double const x = solve_x_for_determinism(2.0 / 3.0);
    CHECK(cqe_residual(x, 0.0, 2.0, 3) == Approx(0.0).epsilon(1e-12));
    CHECK(x == Approx(0.9387).epsilon(1e-4));
  }

  TEST_CASE("solve_x_for_determinism")
  {
    CHECK(solve_x_for_determinism(1.0) == 1.0);
    CHECK(solve_x_for_determinism(0.0) == 0.5);
    double const x = solve_x_for_determinism(2.0 / 3.0);
    CHECK(std::abs(closed_determinism(x) - 2.0 / 3.0) < 1e-12);
    CHECK(-std::log2(x) == Approx(0.0915).epsilon(5e-4 / 0.0915));
    for (int k = 1; k < 100; ++k) {
      double const target = 0.01 * k;
      CHECK(std::abs(closed_determinism(solve_x_for_determinism(target)) - target) < 1e-12);
    }
    CHECK_THROWS_AS(solve_x_for_determinism(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(solve_x_for_determinism(1.1), std::invalid_argument);
  }
}
