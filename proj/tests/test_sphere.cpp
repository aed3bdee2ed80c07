#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "starlens/errors.hpp"
#include "starlens/sphere.hpp"

using namespace starlens;

namespace {

SphericalFunction fn(int n, SphericalFunction::Evaluator f, bool even = false) { return SphericalFunction(n, f, even); }

// Integral of prod u_i^{a_i} over the sphere, normalized: zero unless every
// exponent is even, otherwise a ratio of Gamma values (polar coordinates).
double monomial_moment(const std::vector<int>& a) {
  const int n = static_cast<int>(a.size());
  double log_value = std::lgamma(0.5 * n) - 0.5 * n * std::log(std::numbers::pi);
  int total = 0;
  for (int ai : a) {
    if (ai % 2) return 0.0;
    log_value += std::lgamma(0.5 * (ai + 1));
    total += ai;
  }
  return std::exp(log_value - std::lgamma(0.5 * (total + n)));
}

}  // namespace

TEST_CASE("basic integrals") {
  for (int n : {3, 4, 5}) {
    const QuadratureRule rule = product_rule(n, 8);
    CHECK(integrate(fn(n, [](auto) { return 1.0; }), rule) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(integrate(fn(n, [](auto u) { return u[0] * u[0]; }), rule) == doctest::Approx(1.0 / n).epsilon(1e-13));
    CHECK(integrate(fn(n, [](auto u) { return std::pow(u[0], 4); }), rule) ==
          doctest::Approx(3.0 / (n * (n + 2.0))).epsilon(1e-13));
  }
  const QuadratureRule rule = product_rule(3, 12);
  CHECK(integrate(fn(3, [](auto) { return 2.5; }), rule) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(std::abs(integrate(fn(3, [](auto u) { return u[0] * u[1] * u[1] + std::pow(u[2], 5); }), rule)) < 1e-13);
  CHECK(std::abs(integrate(fn(3, [](auto u) { return (3 * u[2] * u[2] - 1) / 2; }), rule)) < 1e-14);
}

TEST_CASE("product rule is exact for monomials through its level") {
  std::mt19937 rng(4);
  for (int n : {3, 4, 5}) {
    const int level = 10;
    const QuadratureRule rule = product_rule(n, level);
    CHECK(rule.level() == level);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<int> a(n, 0);
      std::uniform_int_distribution<int> pick(0, n - 1);
      const int degree = std::uniform_int_distribution<int>(0, level)(rng);
      for (int d = 0; d < degree; ++d) ++a[pick(rng)];
      const double value = integrate(fn(n,
                                        [a](auto u) {
                                          double v = 1.0;
                                          for (std::size_t i = 0; i < a.size(); ++i) v *= std::pow(u[i], a[i]);
                                          return v;
                                        }),
                                     rule);
      CHECK(value == doctest::Approx(monomial_moment(a)).epsilon(1e-12).scale(1e-3));
    }
  }
}

TEST_CASE("product rule structure") {
  const QuadratureRule rule = product_rule(4, 12);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    auto u = rule.node(i);
    double norm = 0.0;
    for (double x : u) norm += x * x;
    CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-14);
    CHECK(rule.weight(i) > 0.0);
    total += rule.weight(i);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  // Central symmetry: an odd function integrates to zero.
  CHECK(std::abs(integrate(fn(4, [](auto u) { return std::exp(u[0]) - std::exp(-u[0]); }), rule)) < 1e-13);
  CHECK(default_level(3) == 48);
  CHECK(default_level(4) == 32);
  CHECK(default_level(6) == 24);
}

TEST_CASE("product rule errors") {
  CHECK_THROWS_AS(product_rule(2, 8), DimensionError);
  CHECK_THROWS_AS(product_rule(3, 2), DomainError);
  CHECK_THROWS_AS(product_rule(5, 200, 10000), ResourceError);
  const QuadratureRule rule = product_rule(3, 8);
  CHECK_THROWS_AS(integrate(fn(4, [](auto) { return 1.0; }), rule), DimensionMismatch);
}

TEST_CASE("QuadratureRule validates its input") {
  CHECK_THROWS_AS(QuadratureRule(3, 1, {1.0, 0.0, 0.1}, {1.0}), DomainError);
  CHECK_THROWS_AS(QuadratureRule(3, 1, {1.0, 0.0, 0.0}, {-1.0}), DomainError);
  const QuadratureRule r(3, 1, {1.0, 0.0, 0.0, -1.0, 0.0, 0.0}, {2.0, 2.0});
  CHECK(r.weight(0) == doctest::Approx(0.5));
}

TEST_CASE("gauss_jacobi") {
  // Total mass 2^{a+b+1} B(a+1, b+1).
  for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{0.5, 0.5}, std::pair{-0.5, 1.5}, std::pair{2.0, -0.7}}) {
    const GaussRule g = gauss_jacobi(12, a, b);
    double mass = 0.0;
    double first = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      mass += g.weights[i];
      first += g.weights[i] * g.nodes[i];
    }
    const double beta = std::exp(std::lgamma(a + 1) + std::lgamma(b + 1) - std::lgamma(a + b + 2));
    CHECK(mass == doctest::Approx(std::pow(2.0, a + b + 1) * beta).epsilon(1e-13));
    // First moment over mass equals (b - a)/(a + b + 2).
    CHECK(first / mass == doctest::Approx((b - a) / (a + b + 2)).epsilon(1e-12).scale(1.0));
  }
  CHECK_THROWS_AS(gauss_jacobi(4, -1.0, 0.0), DomainError);
}

TEST_CASE("lq_norm") {
  const QuadratureRule rule = product_rule(3, 12);
  for (double q : {1.0, 2.0, 3.5}) CHECK(lq_norm(fn(3, [](auto) { return 1.0; }), q, rule) == doctest::Approx(1.0));
  CHECK(lq_norm(fn(3, [](auto u) { return u[0]; }), 2.0, rule) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-13));
  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  for (int t = 0; t < 10; ++t) {
    const double a = g(rng), b = g(rng), c = g(rng);
    const SphericalFunction f = fn(3, [a, b, c](auto u) { return a + b * u[0] * u[1] + c * u[2] * u[2]; });
    CHECK(lq_norm(f, 1.0, rule) <= lq_norm(f, 2.0, rule) + 1e-15);
  }
  CHECK_THROWS_AS(lq_norm(fn(3, [](auto) { return 1.0; }), 0.5, rule), DomainError);
}

TEST_CASE("subsphere rule") {
  std::mt19937 rng(8);
  std::normal_distribution<double> g;
  for (int n : {3, 4, 6}) {
    std::vector<double> xi(n);
    double norm = 0.0;
    for (double& x : xi) {
      x = g(rng);
      norm += x * x;
    }
    for (double& x : xi) x /= std::sqrt(norm);
    const QuadratureRule sub = subsphere_rule(xi, 10);
    CHECK(sub.dim() == n);
    for (std::size_t i = 0; i < sub.size(); ++i) {
      auto u = sub.node(i);
      double dot = 0.0, len = 0.0;
      for (int k = 0; k < n; ++k) {
        dot += u[k] * xi[k];
        len += u[k] * u[k];
      }
      CHECK(std::abs(dot) < 1e-13);
      CHECK(std::abs(std::sqrt(len) - 1.0) < 1e-13);
    }
    CHECK(integrate(fn(n, [](auto) { return 1.0; }), sub) == doctest::Approx(1.0));
  }
  const std::vector<double> e3{0.0, 0.0, 1.0};
  const QuadratureRule circle = subsphere_rule(e3, 8);
  CHECK(integrate(fn(3, [](auto u) { return u[0] * u[0]; }), circle) == doctest::Approx(0.5).epsilon(1e-13));
  const std::vector<double> e2{0.0, 1.0};
  CHECK_THROWS_AS(subsphere_rule(e2, 8), DimensionError);
}

TEST_CASE("power-weighted rule") {
  for (int n : {3, 4, 5}) {
    std::vector<double> axis(n, 0.0);
    axis[0] = 0.6;
    axis[n - 1] = 0.8;
    for (double a : {-0.5, 0.0, 0.3, 2.0}) {
      const PowerWeightedRule w = power_weighted_rule(axis, a, 12);
      CHECK(w.mass == doctest::Approx(abs_moment(n, a)).epsilon(1e-12));
      // Weight times t^2 is the moment of order a + 2.
      const SphericalFunction t2 = fn(n, [axis](auto u) {
        double d = 0.0;
        for (std::size_t i = 0; i < axis.size(); ++i) d += u[i] * axis[i];
        return d * d;
      });
      CHECK(w.mass * integrate(t2, w.rule) == doctest::Approx(abs_moment(n, a + 2)).epsilon(1e-12));
      // Odd parts vanish.
      CHECK(std::abs(integrate(fn(n, [](auto u) { return u[0] * u[1] * u[1]; }), w.rule)) < 1e-13);
    }
  }
  // Closed forms: E t^2 = 1/n, E t^4 = 3/(n(n+2)).
  CHECK(abs_moment(3, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(abs_moment(5, 4.0) == doctest::Approx(3.0 / 35.0).epsilon(1e-14));
  CHECK(abs_moment(4, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(abs_moment(3, -1.0), DomainError);
}

TEST_CASE("is_even") {
  const QuadratureRule rule = product_rule(3, 8);
  CHECK(is_even(fn(3, [](auto u) { return u[0] * u[1]; }), rule));
  CHECK_FALSE(is_even(fn(3, [](auto u) { return u[0] + u[1] * u[1]; }), rule));
}
