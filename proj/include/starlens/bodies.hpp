#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "starlens/sphere.hpp"

namespace starlens {

// Origin-symmetric star body given by its radial function on S^{n-1}.
// The radial function is an evaluator, so a body can be sampled by any rule.
class StarBody {
 public:
  StarBody(int n, SphericalFunction rho, std::string label,
           std::optional<SphericalFunction> perturbation = std::nullopt);

  int dim() const { return n_; }
  const SphericalFunction& rho() const { return rho_; }
  double radial(std::span<const double> u) const { return rho_(u); }
  const std::string& label() const { return label_; }

  // phi with ||x||_K^{-n+p} = 1 + phi(x), recorded by perturbed_ball.
  const std::optional<SphericalFunction>& perturbation() const { return perturbation_; }

  // u -> rho(u)^power.
  SphericalFunction rho_power(double power) const;

 private:
  int n_;
  SphericalFunction rho_;
  std::string label_;
  std::optional<SphericalFunction> perturbation_;
};

// Invertible linear map with cached inverse and determinant.
class LinearMap {
 public:
  explicit LinearMap(Eigen::MatrixXd matrix);

  static LinearMap identity(int n) { return LinearMap(Eigen::MatrixXd::Identity(n, n)); }

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }
  double determinant() const { return determinant_; }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd inverse_;
  double determinant_;
};

StarBody ball(int n, double r = 1.0);
StarBody ellipsoid(std::vector<double> semi_axes);
StarBody lp_ball(int n, double q);

// ||x||_K^{-n+p} = 1 + eps * H(x), H the zonal harmonic P_m(<x, axis>) of
// even degree m >= 2, which has sup-norm 1. An empty axis means e_n.
StarBody perturbed_ball(int n, double p, double eps, int m, std::span<const double> axis = {});

// General form: H is `shape` minus its mean, scaled to sup-norm 1 on the
// rule's nodes. Validity (1 + eps H > 0) is checked on the same nodes.
StarBody perturbed_ball(int n, double p, double eps, const SphericalFunction& shape, const QuadratureRule& rule,
                        std::string label = "perturbed");

StarBody dilate(const StarBody& body, double factor);

// Throws DomainError unless rho is finite, positive and even on the nodes.
void validate(const StarBody& body, const QuadratureRule& rule);

double volume(const StarBody& body, const QuadratureRule& rule);

double minkowski_functional(const StarBody& body, std::span<const double> x);

// rho_{TK}(u) = rho_K(v/|v|) / |v| with v = T^{-1} u.
StarBody linear_transform(const StarBody& body, const LinearMap& map);

// M_ij = integral over K of x_i x_j dx.
Eigen::MatrixXd covariance(const StarBody& body, const QuadratureRule& rule);

struct IsotropicPosition {
  StarBody body;
  LinearMap map;  // symmetric positive definite; body = map(K)
};

// Position in which the covariance, measured with `rule`, is a multiple of the
// identity. Starts from T = M^{-1/2} and refines while the measured
// off-diagonal ratio exceeds 1e-13 (at most six steps).
IsotropicPosition isotropic_position(const StarBody& body, const QuadratureRule& rule);

// vol_{n-1}(K cap xi^perp), computed on the subsphere at rule.level().
double section_volume(const StarBody& body, std::span<const double> xi, const QuadratureRule& rule);
// Same, on a precomputed S^{n-2} rule (see subsphere_base).
double section_volume_on(const StarBody& body, std::span<const double> xi, const QuadratureRule& subsphere_base);

}  // namespace starlens
