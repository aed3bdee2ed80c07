#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "starlens/bodies.hpp"
#include "starlens/sphere.hpp"

namespace starlens {

// One instance of an inequality lhs <= rhs. deficit = rhs - lhs, so a
// nonnegative deficit means the instance holds; quad_error is the change of
// the deficit between the rule and a rule of half the level.
struct InequalityReport {
  std::string name;
  int n = 0;
  double param = 0.0;  // p, k or q, depending on the check
  std::string body;
  int level = 0;
  int max_degree = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double deficit = 0.0;
  double quad_error = 0.0;
  double truncation_residual = 0.0;  // of the harmonic expansion, where one is used

  // |deficit| <= 3 quad_error: equal within what the quadrature resolves.
  bool equal_within_resolution() const;
};

struct SweepResult {
  int n = 0;
  double p = 0.0;
  int m = 0;
  std::vector<double> eps_values;
  std::vector<double> deficits;
  std::vector<double> quad_errors;
  double fitted_quadratic_coeff = 0.0;
  double predicted_coeff = 0.0;
  double fit_residual = 0.0;
  double harmonic_norm2 = 0.0;  // ||H_m||_2^2 of the unit perturbation
};

// Level of the comparison rule used for quad_error estimates.
int coarse_level(int level);

// rho_{I(K)}(xi) = vol_{n-1}(K cap xi^perp).
StarBody intersection_body(const StarBody& body, const QuadratureRule& rule);

// vol(I(K)) <= (kappa_{n-1}^n / kappa_n^{n-2}) vol(K)^{n-1}.
InequalityReport busemann_check(const StarBody& body, const QuadratureRule& rule);

// integral |I_p(rho^{n-p})|^{n/p} dsigma <= kappa_n^{1-n/p} vol(K)^{n/p-1}, 0 < p < n/2.
// Recorded, never asserted, for general bodies.
InequalityReport generalized_busemann(const StarBody& body, double p, int max_degree, const QuadratureRule& rule);

// The p = n/2 case, an identity for every body.
InequalityReport parseval_check(const StarBody& body, const QuadratureRule& rule, int max_degree);

// (n/(2p))^{n/2}: factor by which the generalized inequality holds for every body.
double weakened_bound_factor(int n, double p);

struct KIntersection {
  std::optional<StarBody> body;   // empty when the k-intersection body does not exist
  std::vector<double> bracket;    // (kappa_{n-k}/kappa_k) I_k(rho^{n-k}) on the rule's nodes
  double min_bracket = 0.0;
  double truncation_residual = 0.0;
};

// rho_L(theta)^k = (kappa_{n-k}/kappa_k) I_k(rho_K^{n-k})(theta), when the
// right side is positive on every node.
KIntersection k_intersection_body(const StarBody& body, int k, int max_degree, const QuadratureRule& rule);

// (vol(I_k K) / vol(I_k B))^{1/n} after rescaling K to the volume of B.
// Throws NotABody when I_k K does not exist.
double kpz_ratio(const StarBody& body, int k, int max_degree, const QuadratureRule& rule);

struct KpzComparisonRow {
  int n;
  int k;
  double sqrt_bound;      // sqrt(n / (2k))
  double kpz_reference;   // min(log n, k log k), absolute constant taken as 1
  bool improves;          // sqrt_bound < kpz_reference
};

std::vector<KpzComparisonRow> kpz_comparison_table(std::span<const int> dims);

// ||x||_{Gamma_q^* K} = ((1/vol K) integral_K |<x, y>|^q dy)^{1/q}, q > -1, q != 0.
StarBody polar_centroid_body(const StarBody& body, double q, const QuadratureRule& rule);

// Radius of Gamma_q^* B_2^n.
double polar_centroid_ball_radius(int n, double q);

// vol(K) vol(Gamma_q^* K) <= vol(B) vol(Gamma_q^* B), q >= 1.
InequalityReport lutwak_zhang_check(const StarBody& body, double q, const QuadratureRule& rule);

// ||I_p f||_{n/p} / ||f||_{n/(n-p)}, 0 < p < n/2.
double operator_norm_test(const SphericalFunction& f, double p, int max_degree, const QuadratureRule& rule);

// Deficit of the generalized inequality on perturbed_ball(n, p, eps, m) for
// each eps, and the eps^2 coefficient of the deficit compared with
//   [n/(2(n-p)) - (n(n-p)/(2p^2)) lambda_m^2] ||H_m||_2^2.
SweepResult local_expansion(int n, double p, int m, std::span<const double> eps_list, int max_degree,
                            const QuadratureRule& rule);

// Second-order coefficients of the two sides in the local expansion.
double local_rhs_coeff(int n, double p);
double local_lhs_coeff(int n, double p, int m);

}  // namespace starlens
