#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace starlens {

inline constexpr std::size_t kDefaultNodeCap = 2'000'000;

// Nodes and weights on [-1, 1] for the weight (1 - x)^alpha (1 + x)^beta.
// Weights sum to the total mass of the weight function.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_jacobi(int count, double alpha, double beta);

// Quadrature against a probability measure on a sphere embedded in R^n.
// Immutable; copies share the node storage.
//
// Invariants checked at construction: every node is a unit vector (1e-14), all
// weights are positive and they are renormalized to sum to one.
class QuadratureRule {
 public:
  QuadratureRule(int dim, int level, std::vector<double> flat_nodes, std::vector<double> weights);

  int dim() const { return dim_; }
  // Polynomial degree integrated exactly.
  int level() const { return level_; }
  std::size_t size() const { return data_->weights.size(); }

  std::span<const double> node(std::size_t i) const {
    return {data_->nodes.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double weight(std::size_t i) const { return data_->weights[i]; }
  std::span<const double> weights() const { return data_->weights; }
  std::span<const double> flat_nodes() const { return data_->nodes; }

 private:
  struct Data {
    std::vector<double> nodes;
    std::vector<double> weights;
  };
  int dim_;
  int level_;
  std::shared_ptr<const Data> data_;
};

// A real function on S^{n-1}. The evaluator must be pure: it is called
// concurrently from parallel loops.
class SphericalFunction {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  SphericalFunction(int dim, Evaluator evaluator, bool even = false)
      : dim_(dim), evaluator_(std::move(evaluator)), even_(even) {}

  double operator()(std::span<const double> u) const { return evaluator_(u); }
  int dim() const { return dim_; }
  // Caller's claim that f(-u) = f(u); verified where an operation depends on it.
  bool even() const { return even_; }

 private:
  int dim_;
  Evaluator evaluator_;
  bool even_;
};

// Tensor-product rule on S^{n-1}: Gauss-Jacobi in the cosine of each polar
// angle (the sin^k Jacobian is the Jacobi weight) and a uniform rule in the
// azimuth. Exact through degree `level`; the node set is centrally symmetric.
QuadratureRule product_rule(int n, int level, std::size_t max_nodes = kDefaultNodeCap);

// Default level per dimension: 48 for n = 3, 32 for n = 4, 24 for n = 5 and above.
int default_level(int n);

// Probability rule on the great subsphere S^{n-1} cap xi^perp, in R^n.
QuadratureRule subsphere_rule(std::span<const double> xi, int level);

// Rule on S^{n-2} in R^{n-1}, the base that subsphere_rule embeds.
QuadratureRule subsphere_base(int n, int level);

// Builds the subsphere rule from a precomputed rule on S^{n-2} (in R^{n-1});
// avoids rebuilding the base rule for every direction.
QuadratureRule subsphere_rule(std::span<const double> xi, const QuadratureRule& base);

// Rule for integrals with the zonal weight |<x, axis>|^exponent, exponent > -1:
//   integral of g(x) |<x, axis>|^exponent dsigma(x) ~= mass * sum_i w_i g(x_i),
// where the w_i sum to one. The weight is absorbed into a Gauss-Jacobi rule in
// s = <x, axis>^2, so the rule is exact on polynomials of degree <= level and
// stays accurate for singular exponents. Nodes come in +-t pairs along the
// axis, which annihilates the odd part of g.
struct PowerWeightedRule {
  QuadratureRule rule;
  double mass;
};

PowerWeightedRule power_weighted_rule(std::span<const double> axis, double exponent, int level);

// Precomputes the axis-independent parts (radial Gauss-Jacobi rule and the
// S^{n-2} base rule) so that rules for many axes are cheap.
class PowerWeightedRuleBuilder {
 public:
  PowerWeightedRuleBuilder(int n, double exponent, int level);

  PowerWeightedRule build(std::span<const double> axis) const;
  double mass() const { return mass_; }

 private:
  int n_;
  int level_;
  GaussRule radial_;
  QuadratureRule equator_base_;
  double mass_;
};

// Closed form of integral |<x, e>|^a dsigma(x) on S^{n-1}.
double abs_moment(int n, double a);

// Values of f at every node, evaluated in parallel.
std::vector<double> sample(const SphericalFunction& f, const QuadratureRule& rule);

// Compensated sum of w_i v_i.
double integrate(std::span<const double> values, const QuadratureRule& rule);
double integrate(const SphericalFunction& f, const QuadratureRule& rule);

double lq_norm(std::span<const double> values, double q, const QuadratureRule& rule);
double lq_norm(const SphericalFunction& f, double q, const QuadratureRule& rule);

// True when |f(-u) - f(u)| <= tol * max(1, |f(u)|) on every node.
bool is_even(const SphericalFunction& f, const QuadratureRule& rule, double tol = 1e-12);

}  // namespace starlens
