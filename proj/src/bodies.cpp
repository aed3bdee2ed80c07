#include "starlens/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "starlens/errors.hpp"
#include "starlens/parallel.hpp"
#include "starlens/specfun.hpp"

namespace starlens {
namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void check_dim(int n) {
  if (n < 3) throw DimensionError("bodies: dimension must be at least 3");
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

StarBody::StarBody(int n, SphericalFunction rho, std::string label, std::optional<SphericalFunction> perturbation)
    : n_(n), rho_(std::move(rho)), label_(std::move(label)), perturbation_(std::move(perturbation)) {
  check_dim(n);
  if (rho_.dim() != n) throw DimensionMismatch("StarBody: radial function dimension differs");
}

SphericalFunction StarBody::rho_power(double power) const {
  const SphericalFunction rho = rho_;
  return SphericalFunction(
      n_, [rho, power](std::span<const double> u) { return std::pow(rho(u), power); }, true);
}

LinearMap::LinearMap(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw DimensionMismatch("LinearMap: matrix must be square");
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(matrix_);
  determinant_ = lu.determinant();
  if (!(std::abs(determinant_) > 1e-12)) throw SingularMap("LinearMap: determinant below 1e-12");
  inverse_ = lu.inverse();
  const double residual =
      (matrix_ * inverse_ - Eigen::MatrixXd::Identity(matrix_.rows(), matrix_.cols())).lpNorm<Eigen::Infinity>();
  if (!(residual <= 1e-10)) throw SingularMap("LinearMap: inverse residual exceeds 1e-10");
}

StarBody ball(int n, double r) {
  check_dim(n);
  if (!(r > 0.0)) throw DomainError("ball: radius must be positive");
  return StarBody(n, SphericalFunction(n, [r](std::span<const double>) { return r; }, true),
                  "ball[n=" + std::to_string(n) + " r=" + fmt(r) + "]");
}

StarBody ellipsoid(std::vector<double> semi_axes) {
  const int n = static_cast<int>(semi_axes.size());
  check_dim(n);
  std::string label = "ellipsoid[";
  std::vector<double> inv2(n);
  for (int i = 0; i < n; ++i) {
    if (!(semi_axes[i] > 0.0)) throw DomainError("ellipsoid: semi-axes must be positive");
    inv2[i] = 1.0 / (semi_axes[i] * semi_axes[i]);
    label += (i ? " " : "") + fmt(semi_axes[i]);
  }
  label += "]";
  return StarBody(n,
                  SphericalFunction(
                      n,
                      [inv2](std::span<const double> u) {
                        double q = 0.0;
                        for (std::size_t i = 0; i < inv2.size(); ++i) q += u[i] * u[i] * inv2[i];
                        return 1.0 / std::sqrt(q);
                      },
                      true),
                  label);
}

StarBody lp_ball(int n, double q) {
  check_dim(n);
  if (!(q >= 1.0) || !std::isfinite(q)) throw DomainError("lp_ball: q must be a finite value >= 1");
  return StarBody(n,
                  SphericalFunction(
                      n,
                      [q](std::span<const double> u) {
                        double s = 0.0;
                        for (double x : u) s += std::pow(std::abs(x), q);
                        return std::pow(s, -1.0 / q);
                      },
                      true),
                  "lp[n=" + std::to_string(n) + " q=" + fmt(q) + "]");
}

StarBody perturbed_ball(int n, double p, double eps, int m, std::span<const double> axis) {
  check_dim(n);
  if (!(p > 0.0) || !(p < n)) throw DomainError("perturbed_ball: p must lie in (0, n)");
  if (m < 2 || m % 2 != 0) throw DomainError("perturbed_ball: degree must be even and >= 2");
  if (m > 128) throw DegreeTooLarge("perturbed_ball: degree too large");
  if (!std::isfinite(eps)) throw DomainError("perturbed_ball: eps must be finite");
  std::vector<double> e(n, 0.0);
  if (axis.empty()) {
    e[n - 1] = 1.0;
  } else {
    if (static_cast<int>(axis.size()) != n) throw DimensionMismatch("perturbed_ball: axis dimension");
    const double len = norm(axis);
    if (!(len > 0.0)) throw ZeroVector("perturbed_ball: zero axis");
    for (int i = 0; i < n; ++i) e[i] = axis[i] / len;
  }
  const NormalizedGegenbauer poly(m, 0.5 * (n - 2));
  // 1 + eps P_m(t) > 0 on [-1, 1]: check on a dense grid.
  std::vector<double> buf(m + 1);
  for (int k = 0; k <= 4000; ++k) {
    poly.evaluate(-1.0 + k / 2000.0, buf);
    if (!(1.0 + eps * buf[m] > 0.0)) throw DomainError("perturbed_ball: 1 + eps H_m is not positive");
  }
  auto zonal = [poly, e, m](std::span<const double> u) {
    double t = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) t += u[i] * e[i];
    t = std::clamp(t, -1.0, 1.0);
    std::vector<double> vals(m + 1);
    poly.evaluate(t, vals);
    return vals[m];
  };
  const double power = 1.0 / (n - p);
  SphericalFunction phi(n, [zonal, eps](std::span<const double> u) { return eps * zonal(u); }, true);
  SphericalFunction rho(
      n, [zonal, eps, power](std::span<const double> u) { return std::pow(1.0 + eps * zonal(u), power); }, true);
  return StarBody(n, std::move(rho),
                  "perturbed[n=" + std::to_string(n) + " p=" + fmt(p) + " eps=" + fmt(eps) + " m=" + std::to_string(m) + "]",
                  std::move(phi));
}

StarBody perturbed_ball(int n, double p, double eps, const SphericalFunction& shape, const QuadratureRule& rule,
                        std::string label) {
  check_dim(n);
  if (!(p > 0.0) || !(p < n)) throw DomainError("perturbed_ball: p must lie in (0, n)");
  if (shape.dim() != n || rule.dim() != n) throw DimensionMismatch("perturbed_ball: dimension mismatch");
  const std::vector<double> values = sample(shape, rule);
  const double mean = integrate(values, rule);
  double sup = 0.0;
  for (double v : values) sup = std::max(sup, std::abs(v - mean));
  if (!(sup > 0.0)) throw DomainError("perturbed_ball: shape is constant");
  for (double v : values) {
    if (!(1.0 + eps * (v - mean) / sup > 0.0)) throw DomainError("perturbed_ball: 1 + eps H is not positive");
  }
  const double power = 1.0 / (n - p);
  const double scale = eps / sup;
  SphericalFunction phi(
      n, [shape, mean, scale](std::span<const double> u) { return scale * (shape(u) - mean); }, shape.even());
  SphericalFunction rho(
      n,
      [shape, mean, scale, power](std::span<const double> u) {
        return std::pow(1.0 + scale * (shape(u) - mean), power);
      },
      shape.even());
  return StarBody(n, std::move(rho), std::move(label), std::move(phi));
}

StarBody dilate(const StarBody& body, double factor) {
  if (!(factor > 0.0)) throw DomainError("dilate: factor must be positive");
  const SphericalFunction rho = body.rho();
  return StarBody(body.dim(),
                  SphericalFunction(
                      body.dim(), [rho, factor](std::span<const double> u) { return factor * rho(u); }, rho.even()),
                  body.label() + "*" + fmt(factor));
}

void validate(const StarBody& body, const QuadratureRule& rule) {
  const std::vector<double> values = sample(body.rho(), rule);
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("validate: radial function must be finite and positive");
  }
  if (!is_even(body.rho(), rule, 1e-12)) throw DomainError("validate: body is not origin-symmetric");
}

double volume(const StarBody& body, const QuadratureRule& rule) {
  if (body.dim() != rule.dim()) throw DimensionMismatch("volume: dimension mismatch");
  return kappa(body.dim()) * integrate(body.rho_power(body.dim()), rule);
}

double minkowski_functional(const StarBody& body, std::span<const double> x) {
  if (static_cast<int>(x.size()) != body.dim()) throw DimensionMismatch("minkowski_functional: dimension mismatch");
  const double len = norm(x);
  if (!(len > 0.0)) throw ZeroVector("minkowski_functional: zero vector");
  std::vector<double> u(x.begin(), x.end());
  for (double& v : u) v /= len;
  return len / body.radial(u);
}

StarBody linear_transform(const StarBody& body, const LinearMap& map) {
  if (map.dim() != body.dim()) throw DimensionMismatch("linear_transform: dimension mismatch");
  const int n = body.dim();
  const SphericalFunction rho = body.rho();
  const Eigen::MatrixXd inv = map.inverse();
  return StarBody(n,
                  SphericalFunction(
                      n,
                      [rho, inv, n](std::span<const double> u) {
                        const Eigen::VectorXd v =
                            inv * Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(n));
                        const double len = v.norm();
                        const Eigen::VectorXd dir = v / len;
                        return rho(std::span<const double>(dir.data(), static_cast<std::size_t>(n))) / len;
                      },
                      rho.even()),
                  "T(" + body.label() + ")");
}

Eigen::MatrixXd covariance(const StarBody& body, const QuadratureRule& rule) {
  if (body.dim() != rule.dim()) throw DimensionMismatch("covariance: dimension mismatch");
  const int n = body.dim();
  const std::vector<double> r = sample(body.rho_power(n + 2), rule);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      std::vector<double> values(rule.size());
      for (std::size_t k = 0; k < rule.size(); ++k) values[k] = r[k] * rule.node(k)[i] * rule.node(k)[j];
      m(i, j) = m(j, i) = integrate(values, rule);
    }
  }
  return (n * kappa(n) / (n + 2.0)) * m;
}

namespace {

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalDegeneracy("isotropic_position: eigensolver failed");
  const Eigen::VectorXd ev = solver.eigenvalues();
  if (!(ev.minCoeff() >= 1e-10 * ev.maxCoeff()) || !(ev.maxCoeff() > 0.0)) {
    throw NumericalDegeneracy("isotropic_position: covariance is degenerate");
  }
  return solver.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * solver.eigenvectors().transpose();
}

double off_diagonal_ratio(const Eigen::MatrixXd& m) {
  const double diag = m.diagonal().cwiseAbs().minCoeff();
  double off = 0.0;
  double spread = m.diagonal().maxCoeff() - m.diagonal().minCoeff();
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (i != j) off = std::max(off, std::abs(m(i, j)));
    }
  }
  return std::max(off, spread) / diag;
}

}  // namespace

IsotropicPosition isotropic_position(const StarBody& body, const QuadratureRule& rule) {
  Eigen::MatrixXd total = inverse_sqrt(covariance(body, rule));
  Eigen::MatrixXd sym = total;
  for (int step = 0; step < 6; ++step) {
    // Symmetric polar factor (T^t T)^{1/2}: the same position up to a rotation.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(total.transpose() * total);
    sym = solver.eigenvectors() * solver.eigenvalues().cwiseSqrt().asDiagonal() * solver.eigenvectors().transpose();
    sym = 0.5 * (sym + sym.transpose());
    const Eigen::MatrixXd m = covariance(linear_transform(body, LinearMap(sym)), rule);
    if (off_diagonal_ratio(m) <= 1e-13) break;
    total = inverse_sqrt(m / m.trace()) * sym;
  }
  LinearMap map(sym);
  StarBody image = linear_transform(body, map);
  return {std::move(image), std::move(map)};
}

double section_volume_on(const StarBody& body, std::span<const double> xi, const QuadratureRule& subsphere_base) {
  const int n = body.dim();
  if (static_cast<int>(xi.size()) != n) throw DimensionMismatch("section_volume: direction dimension");
  const QuadratureRule rule = subsphere_rule(xi, subsphere_base);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weight(i) * std::pow(body.radial(rule.node(i)), n - 1);
  return kappa(n - 1) * sum;
}

double section_volume(const StarBody& body, std::span<const double> xi, const QuadratureRule& rule) {
  if (body.dim() < 3) throw DimensionError("section_volume: dimension must be at least 3");
  return section_volume_on(body, xi, subsphere_base(body.dim(), rule.level()));
}

}  // namespace starlens
