#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "starlens/cli/random.hpp"
#include "starlens/errors.hpp"
#include "starlens/harmonics.hpp"
#include "starlens/ip_operator.hpp"
#include "starlens/specfun.hpp"

using namespace starlens;
using std::numbers::pi;

TEST_CASE("multiplier closed forms") {
  CHECK(multiplier(3, 1.0, 0) == 1.0);
  CHECK(multiplier(3, 1.0, 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(multiplier(3, 1.0, 4) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(eigenvalue(3, 1.0, 2) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(eigenvalue(3, 1.0, 4) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK_THROWS_AS(multiplier(3, 3.0, 2), DomainError);
  CHECK_THROWS_AS(multiplier(3, 0.0, 2), DomainError);
  CHECK_THROWS_AS(multiplier(3, 1.0, 3), DomainError);
}

TEST_CASE("multiplier self-duality") {
  for (int n : {3, 4, 5, 7})
    for (double p : {0.2, 0.9, 1.3, 2.1})
      for (int m = 0; m <= 40; m += 2) {
        if (p >= n) continue;
        CHECK(multiplier(n, p, m) * multiplier(n, n - p, m) == doctest::Approx(1.0).epsilon(1e-12));
      }
}

TEST_CASE("complex multiplier") {
  for (int m = 0; m <= 16; m += 2) {
    const Complex z = multiplier_complex(4, 0.0, m);
    CHECK(std::abs(z - Complex(1.0, 0.0)) < 1e-14);
    for (double s : {0.5, 3.0}) {
      CHECK(std::abs(multiplier_complex(4, -s, m) - std::conj(multiplier_complex(4, s, m))) < 1e-13);
      CHECK(std::abs(std::abs(multiplier_complex(5, s, m)) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("stein_A and operator_bound") {
  for (int n : {3, 4, 5, 6}) CHECK(stein_A(0.0, n) == doctest::Approx(1.0).epsilon(1e-14));
  // Odd n: finite product over the half-integer shifts.
  for (double s : {-2.0, 0.4, 3.1}) {
    for (int n : {3, 5, 7}) {
      double prod = 1.0;
      for (int k = 0; k <= (n - 3) / 2; ++k) prod *= std::sqrt(1.0 + s * s * n * n / (4.0 * (2 * k + 1) * (2 * k + 1)));
      CHECK(stein_A(s, n) == doctest::Approx(prod).epsilon(1e-10));
    }
    for (int n : {4, 6, 8}) CHECK(stein_A(s, n) <= std::sqrt(std::cosh(pi * s * n / 4.0)) * (1 + 1e-12));
  }
  CHECK(operator_bound(3, 1.0) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
  CHECK(operator_bound(4, 2.0) == doctest::Approx(1.0));
  // log of the bound is -(n/4) x log x with x = 2p/n: it rises from 1 to
  // exp(n/(4e)) at p = n/(2e) and falls back to 1 at p = n/2.
  for (int n : {3, 4, 6}) {
    const double peak = n / (2.0 * std::numbers::e);
    CHECK(operator_bound(n, peak) == doctest::Approx(std::exp(n / (4.0 * std::numbers::e))).epsilon(1e-14));
    CHECK(operator_bound(n, 1e-9) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(operator_bound(n, 0.5 * n) == doctest::Approx(1.0).epsilon(1e-15));
    double previous = 1.0;
    for (double frac = 0.02; frac < 1.0; frac += 0.02) {
      const double p = frac * 0.5 * n;
      const double b = operator_bound(n, p);
      if (p < peak) CHECK(b > previous);
      else if (p - 0.01 * n > peak) CHECK(b < previous);
      previous = b;
    }
  }
  CHECK_THROWS_AS(operator_bound(3, 2.0), DomainError);
}

TEST_CASE("apply_ip on eigenfunctions") {
  const QuadratureRule rule = product_rule(3, 24);
  const SphericalFunction one(3, [](auto) { return 1.0; }, true);
  const SphericalFunction i1 = apply_ip(one, 1.0, 8, rule);
  for (std::size_t i = 0; i < rule.size(); i += 13) CHECK(i1(rule.node(i)) == doctest::Approx(1.0).epsilon(1e-13));
  for (int m : {2, 4, 6}) {
    const SphericalFunction h(3, [m](auto u) { return gegenbauer(m, 0.5, 0.6 * u[0] + 0.8 * u[2]); }, true);
    for (double p : {0.4, 1.0, 2.2}) {
      const SphericalFunction out = apply_ip(h, p, 8, rule);
      for (std::size_t i = 0; i < rule.size(); i += 7)
        CHECK(std::abs(out(rule.node(i)) - eigenvalue(3, p, m) * h(rule.node(i))) < 1e-9);
    }
  }
  const SphericalFunction odd(3, [](auto u) { return u[0]; });
  CHECK_THROWS_AS(apply_ip(odd, 1.0, 8, rule), ParityError);
}

TEST_CASE("apply_ip is an L2 contraction for p < n/2") {
  cli::Rng rng(13);
  for (int n : {3, 4}) {
    const QuadratureRule rule = product_rule(n, 16);
    for (int t = 0; t < 5; ++t) {
      const SphericalFunction f = cli::random_band_limited(n, 8, rng);
      for (double p : {0.3, 1.0, 1.4}) {
        const IpSamples s = apply_ip_sampled(f, p, 8, rule);
        CHECK(lq_norm(s.values, 2.0, rule) <= lq_norm(s.input, 2.0, rule) * (1 + 1e-12));
        CHECK(s.truncation_residual < 1e-9);
      }
    }
  }
}

TEST_CASE("integral form") {
  const SphericalFunction one(3, [](auto) { return 1.0; }, true);
  const std::vector<double> theta{0.0, 0.6, 0.8};
  for (double p : {0.2, 0.5, 0.9}) CHECK(apply_ip_integral(one, p, 16)(theta) == doctest::Approx(1.0).epsilon(1e-4));
  // The sign of the degree-2 eigenvalue is carried by the kernel.
  const SphericalFunction h2(3, [](auto u) { return gegenbauer(2, 0.5, u[2]); }, true);
  const std::vector<double> pole{0.0, 0.0, 1.0};
  CHECK(apply_ip_integral(h2, 0.5, 16)(pole) == doctest::Approx(eigenvalue(3, 0.5, 2)).epsilon(1e-10));
  CHECK(eigenvalue(3, 0.5, 2) == doctest::Approx(-0.2));
  // Odd parts are annihilated.
  const SphericalFunction odd(3, [](auto u) { return u[0] * u[1] * u[1] + u[2]; });
  CHECK(std::abs(apply_ip_integral(odd, 0.5, 16)(theta)) < 1e-13);
  // Agreement with the spectral form.
  const QuadratureRule rule = product_rule(3, 24);
  cli::Rng rng(1);
  const SphericalFunction f = cli::random_band_limited(3, 8, rng);
  const SphericalFunction spectral = apply_ip(f, 0.5, 8, rule);
  const SphericalFunction integral = apply_ip_integral(f, 0.5, 24);
  double sup_f = 0.0, sup_diff = 0.0;
  for (std::size_t i = 0; i < rule.size(); i += 5) {
    sup_f = std::max(sup_f, std::abs(f(rule.node(i))));
    sup_diff = std::max(sup_diff, std::abs(spectral(rule.node(i)) - integral(rule.node(i))));
  }
  CHECK(sup_diff <= 1e-3 * sup_f);
  CHECK_THROWS_AS(apply_ip_integral(one, 1.0, 16), DomainError);
  CHECK_THROWS_AS(apply_ip_integral(one, 0.0, 16), DomainError);
}
