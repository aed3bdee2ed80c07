#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "starlens/bodies.hpp"
#include "starlens/cli/random.hpp"
#include "starlens/errors.hpp"
#include "starlens/harmonics.hpp"
#include "starlens/specfun.hpp"

using namespace starlens;
using std::numbers::pi;

namespace {
std::vector<double> unit(std::vector<double> v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  for (double& x : v) x /= std::sqrt(n);
  return v;
}
}  // namespace

TEST_CASE("ball") {
  const QuadratureRule rule = product_rule(3, 8);
  CHECK(volume(ball(3), rule) == doctest::Approx(4 * pi / 3).epsilon(1e-14));
  CHECK(volume(ball(4, 2.0), product_rule(4, 8)) == doctest::Approx(kappa(4) * 16).epsilon(1e-14));
  CHECK(ball(3, 1.5).radial(unit({1, 2, 3})) == 1.5);
  CHECK(ball(3).label() == "ball[n=3 r=1]");
  CHECK_THROWS_AS(ball(3, 0.0), DomainError);
}

TEST_CASE("ellipsoid") {
  const QuadratureRule rule = product_rule(3, 48);
  const StarBody e = ellipsoid({2, 1, 1});
  CHECK(volume(e, rule) == doctest::Approx(8 * pi / 3).epsilon(1e-8));
  CHECK(e.radial(std::vector<double>{1, 0, 0}) == doctest::Approx(2.0));
  CHECK(e.radial(std::vector<double>{0, 1, 0}) == doctest::Approx(1.0));
  const StarBody round = ellipsoid({1, 1, 1});
  CHECK(round.radial(unit({1, -2, 0.5})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(volume(ellipsoid({1.5, 1, 0.7, 1.2}), product_rule(4, 32)) == doctest::Approx(kappa(4) * 1.5 * 0.7 * 1.2).epsilon(1e-7));
  CHECK_THROWS_AS(ellipsoid({1.0, -1.0, 1.0}), DomainError);
}

TEST_CASE("lp_ball") {
  const StarBody two = lp_ball(3, 2.0);
  CHECK(two.radial(unit({1, 2, 2})) == doctest::Approx(1.0).epsilon(1e-15));
  const StarBody cross = lp_ball(3, 1.0);
  CHECK(cross.radial(std::vector<double>{1, 0, 0}) == doctest::Approx(1.0));
  CHECK(cross.radial(unit({1, 1, 1})) == doctest::Approx(1.0 / std::sqrt(3.0)));
  // Cross-polytope volume 2^n / n!; the kinks limit the quadrature accuracy.
  CHECK(volume(cross, product_rule(3, 96)) == doctest::Approx(4.0 / 3.0).epsilon(3e-3));
  CHECK_THROWS_AS(lp_ball(3, 0.5), DomainError);
}

TEST_CASE("perturbed_ball") {
  const QuadratureRule rule = product_rule(3, 24);
  const StarBody flat = perturbed_ball(3, 1.0, 0.0, 4);
  for (std::size_t i = 0; i < rule.size(); i += 17) CHECK(flat.radial(rule.node(i)) == doctest::Approx(1.0));
  const StarBody k = perturbed_ball(3, 1.0, 0.3, 4, unit({1, 1, 0}));
  REQUIRE(k.perturbation().has_value());
  CHECK(std::abs(integrate(*k.perturbation(), rule)) < 1e-12);
  // rho^{n-p} - 1 lives in degree 4 only.
  const SphericalFunction g(3, [k](auto u) { return std::pow(k.radial(u), 2.0) - 1.0; }, true);
  const HarmonicExpansion e = expand(g, 10, rule);
  for (const auto& [m, norm] : e.norms) {
    if (m == 4) CHECK(norm > 0.01);
    else CHECK(norm < 1e-12);
  }
  CHECK_THROWS_AS(perturbed_ball(3, 1.0, -1.5, 4), DomainError);
  CHECK_THROWS_AS(perturbed_ball(3, 1.0, 0.1, 3), DomainError);
  CHECK_THROWS_AS(perturbed_ball(3, 0.0, 0.1, 4), DomainError);

  // General shape: mean removed, sup-normalized on the nodes.
  const SphericalFunction shape(3, [](auto u) { return u[0] * u[0] * u[1] * u[1]; }, true);
  const StarBody gen = perturbed_ball(3, 1.0, 0.2, shape, rule);
  CHECK(std::abs(integrate(*gen.perturbation(), rule)) < 1e-13);
  double sup = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sup = std::max(sup, std::abs((*gen.perturbation())(rule.node(i))));
  CHECK(sup == doctest::Approx(0.2));
}

TEST_CASE("minkowski functional") {
  const std::vector<double> x{0.3, -1.2, 2.0};
  CHECK(minkowski_functional(ball(3), x) == doctest::Approx(std::sqrt(0.09 + 1.44 + 4.0)));
  const std::vector<double> tx{0.6, -2.4, 4.0};
  const StarBody k = perturbed_ball(3, 1.0, 0.2, 4);
  CHECK(minkowski_functional(k, tx) == doctest::Approx(2.0 * minkowski_functional(k, x)));
  CHECK(minkowski_functional(ellipsoid({2, 1, 1}), std::vector<double>{1, 0, 0}) == doctest::Approx(0.5));
  const auto u = unit({1, 2, -1});
  std::vector<double> boundary(3);
  for (int i = 0; i < 3; ++i) boundary[i] = k.radial(u) * u[i];
  CHECK(minkowski_functional(k, boundary) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(minkowski_functional(k, std::vector<double>{0, 0, 0}), ZeroVector);
}

TEST_CASE("linear maps and transforms") {
  CHECK_THROWS_AS(LinearMap(Eigen::MatrixXd::Zero(3, 3)), SingularMap);
  const QuadratureRule rule = product_rule(3, 32);
  const StarBody k = perturbed_ball(3, 1.0, 0.25, 4, unit({1, 0, 1}));
  const StarBody same = linear_transform(k, LinearMap::identity(3));
  for (std::size_t i = 0; i < rule.size(); i += 11) CHECK(same.radial(rule.node(i)) == doctest::Approx(k.radial(rule.node(i))));
  const StarBody diag = linear_transform(ball(3), LinearMap(Eigen::Vector3d(1.5, 1.0, 0.7).asDiagonal()));
  const StarBody e = ellipsoid({1.5, 1.0, 0.7});
  for (std::size_t i = 0; i < rule.size(); i += 7) CHECK(std::abs(diag.radial(rule.node(i)) - e.radial(rule.node(i))) < 1e-12);

  cli::Rng rng(5);
  const LinearMap rot(cli::random_rotation(3, rng));
  CHECK(volume(linear_transform(k, rot), rule) == doctest::Approx(volume(k, rule)).epsilon(1e-10));
  const LinearMap t = cli::random_map(3, 2.0, rng);
  CHECK(volume(linear_transform(ellipsoid({1.2, 1, 0.9}), t), product_rule(3, 64)) ==
        doctest::Approx(std::abs(t.determinant()) * kappa(3) * 1.2 * 0.9).epsilon(1e-8));
}

TEST_CASE("covariance") {
  const QuadratureRule rule = product_rule(3, 24);
  const Eigen::MatrixXd m = covariance(ball(3), rule);
  CHECK((m - (4 * pi / 15) * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-13);
  // Change of variables: M(AB) = |det A| A M(B) A^T.
  const Eigen::Vector3d axes(1.3, 1.0, 0.8);
  const Eigen::MatrixXd me = covariance(ellipsoid({1.3, 1.0, 0.8}), product_rule(3, 48));
  const Eigen::MatrixXd a = axes.asDiagonal();
  const Eigen::MatrixXd expected = axes.prod() * a * m * a.transpose();
  CHECK((me - expected).cwiseAbs().maxCoeff() < 1e-8);
  cli::Rng rng(9);
  const Eigen::MatrixXd r = cli::random_rotation(3, rng);
  const StarBody k = perturbed_ball(3, 1.0, 0.2, 2, unit({1, 2, 0}));
  const Eigen::MatrixXd mk = covariance(k, rule);
  const Eigen::MatrixXd mr = covariance(linear_transform(k, LinearMap(r)), rule);
  CHECK((mr - r * mk * r.transpose()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("isotropic position") {
  const QuadratureRule rule = product_rule(3, 48);
  const IsotropicPosition b = isotropic_position(ball(3), rule);
  CHECK((b.map.matrix() - b.map.matrix()(0, 0) * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  // Ellipsoid goes to a ball up to dilation.
  const IsotropicPosition e = isotropic_position(ellipsoid({1.6, 1.0, 0.7}), rule);
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    lo = std::min(lo, e.body.radial(rule.node(i)));
    hi = std::max(hi, e.body.radial(rule.node(i)));
  }
  CHECK(hi / lo <= 1.0 + 1e-8);
  // Degree-4 harmonics carry no quadratic moments: integral H_4 u_i u_j = 0.
  const QuadratureRule r24 = product_rule(3, 24);
  const std::vector<double> axis = unit({1, 1, 1});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const SphericalFunction h(3, [&, i, j](auto u) {
        return gegenbauer(4, 0.5, u[0] * axis[0] + u[1] * axis[1] + u[2] * axis[2]) * u[i] * u[j];
      });
      CHECK(std::abs(integrate(h, r24)) < 1e-14);
    }
  const StarBody k = perturbed_ball(3, 1.0, 0.05, 4, axis);
  const Eigen::MatrixXd m = covariance(k, rule);
  const double mean = m.trace() / 3.0;
  CHECK((m - mean * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-3 * mean);
  const Eigen::MatrixXd degenerate = Eigen::Vector3d(1.0, 1.0, 1e-7).asDiagonal();
  CHECK_THROWS_AS(isotropic_position(linear_transform(ball(3), LinearMap(degenerate)), rule), NumericalDegeneracy);
}

TEST_CASE("section volume") {
  const QuadratureRule rule = product_rule(3, 24);
  CHECK(section_volume(ball(3), unit({1, 2, 3}), rule) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(section_volume(ellipsoid({1.5, 1.0, 0.7}), std::vector<double>{0, 0, 1}, product_rule(3, 48)) ==
        doctest::Approx(pi * 1.5).epsilon(1e-10));
  cli::Rng rng(3);
  const Eigen::MatrixXd r = cli::random_rotation(3, rng);
  const StarBody k = perturbed_ball(3, 1.0, 0.2, 4, unit({0, 1, 1}));
  const StarBody rk = linear_transform(k, LinearMap(r));
  const std::vector<double> xi = unit({0.3, -0.5, 0.8});
  const Eigen::Vector3d rxi = r * Eigen::Vector3d(xi[0], xi[1], xi[2]);
  CHECK(section_volume(rk, std::vector<double>{rxi(0), rxi(1), rxi(2)}, rule) ==
        doctest::Approx(section_volume(k, xi, rule)).epsilon(1e-9));
}
