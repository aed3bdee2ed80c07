#include "starlens/cli/random.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "starlens/specfun.hpp"

namespace starlens::cli {

std::vector<double> random_unit(int n, Rng& rng) {
  std::normal_distribution<double> gauss;
  std::vector<double> v(n);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : v) {
      x = gauss(rng);
      norm += x * x;
    }
  } while (norm < 1e-6);
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

Eigen::MatrixXd random_rotation(int n, Rng& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

LinearMap random_map(int n, double max_cond, Rng& rng) {
  std::uniform_real_distribution<double> uni(1.0, max_cond);
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s(i) = uni(rng);
  return LinearMap(random_rotation(n, rng) * s.asDiagonal() * random_rotation(n, rng));
}

StarBody random_ellipsoid(int n, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> uni(lo, hi);
  std::vector<double> axes(n);
  for (double& a : axes) a = uni(rng);
  return linear_transform(ellipsoid(axes), LinearMap(random_rotation(n, rng)));
}

SphericalFunction random_band_limited(int n, int max_degree, Rng& rng) {
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> half(1, std::max(1, max_degree / 2));
  struct Term {
    std::vector<double> axis;
    int m;
    double c;
  };
  auto terms = std::make_shared<std::vector<Term>>();
  const double c0 = gauss(rng);
  for (int j = 0; j < 4; ++j) {
    auto axis = random_unit(n, rng);
    const int m = 2 * half(rng);
    terms->push_back({std::move(axis), m, gauss(rng)});
  }
  auto poly = std::make_shared<NormalizedGegenbauer>(std::max(2, max_degree), 0.5 * (n - 2));
  return SphericalFunction(
      n,
      [terms, poly, c0](std::span<const double> u) {
        std::vector<double> pm(poly->max_degree() + 1);
        double f = c0;
        for (const Term& t : *terms) {
          double dot = 0.0;
          for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * t.axis[i];
          poly->evaluate(std::clamp(dot, -1.0, 1.0), pm);
          f += t.c * pm[t.m];
        }
        return f;
      },
      true);
}

}  // namespace starlens::cli
