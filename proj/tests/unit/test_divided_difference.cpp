#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "jlolab/divided_difference.hpp"

using namespace jlolab;

namespace {

double dd(std::vector<double> mu) { return divided_diff_exp(mu); }

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_SUITE("divided_difference") {
  TEST_CASE("single node") {
    CHECK(dd({0.0}) == doctest::Approx(1.0));
    CHECK(dd({2.5}) == doctest::Approx(std::exp(-2.5)).epsilon(1e-14));
  }

  TEST_CASE("repeated nodes give exp(-lambda)/n!") {
    CHECK(dd({0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
    for (double lambda : {0.0, 0.3, 1.0, 7.5, 40.0})
      for (int n = 0; n <= 12; ++n) {
        const double expected = std::exp(-lambda) / factorial(n);
        CHECK(std::abs(dd(std::vector<double>(n + 1, lambda)) - expected) <= 1e-13 * expected);
      }
  }

  TEST_CASE("two distinct nodes") {
    // Integral over [0, 1] of exp(-t a - (1 - t) b) = (e^{-b} - e^{-a}) / (a - b).
    for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{2.0, 0.5}, std::pair{10.0, 3.0}}) {
      const double expected = (std::exp(-b) - std::exp(-a)) / (a - b);
      CHECK(dd({a, b}) == doctest::Approx(expected).epsilon(1e-13));
    }
  }

  TEST_CASE("three nodes 0, 1, 2 against the closed form and Monte Carlo") {
    const double closed = 0.5 - std::exp(-1.0) + 0.5 * std::exp(-2.0);
    const double value = dd({0.0, 1.0, 2.0});
    CHECK(value == doctest::Approx(closed).epsilon(1e-13));

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t samples = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
      double t1 = unif(rng), t2 = unif(rng);
      if (t1 > t2) std::swap(t1, t2);
      const double f = std::exp(-t1 * 0.0 - (t2 - t1) * 1.0 - (1.0 - t2) * 2.0) / 2.0;
      sum += f;
      sum2 += f * f;
    }
    const double mean = sum / samples;
    const double se = std::sqrt((sum2 / samples - mean * mean) / (samples - 1));
    CHECK(std::abs(mean - value) <= 4.0 * se);
  }

  TEST_CASE("node order does not matter") {
    const double a = dd({0.1, 3.0, 0.7, 5.0});
    CHECK(dd({5.0, 0.7, 3.0, 0.1}) == doctest::Approx(a).epsilon(1e-13));
    CHECK(dd({0.7, 0.1, 5.0, 3.0}) == doctest::Approx(a).epsilon(1e-13));
  }

  TEST_CASE("nearly coincident nodes stay stable") {
    const double near = dd({5.0, 5.0 + 1e-9});
    CHECK(near == doctest::Approx(std::exp(-5.0 - 0.5e-9)).epsilon(1e-12));
    const double cluster = dd({1.0, 1.0 + 1e-12, 1.0 - 1e-12, 1.0});
    CHECK(cluster == doctest::Approx(std::exp(-1.0) / 6.0).epsilon(1e-10));
  }

  TEST_CASE("full table matches individual evaluations") {
    const std::vector<double> mu{0.0, 0.4, 2.0, 2.0, 9.0};
    const Eigen::MatrixXd table = opitz_exp_table(mu);
    for (std::size_t j = 0; j < mu.size(); ++j)
      for (std::size_t i = j; i < mu.size(); ++i) {
        const std::vector<double> sub(mu.begin() + j, mu.begin() + i + 1);
        CHECK(table(i, j) == doctest::Approx(dd(sub)).epsilon(1e-13));
      }
  }

  TEST_CASE("negative nodes are rejected") { CHECK_THROWS(dd({-1.0, 0.0})); }
}
