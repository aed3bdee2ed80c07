#pragma once

#include <map>
#include <span>
#include <vector>

#include "starlens/specfun.hpp"
#include "starlens/sphere.hpp"

namespace starlens {

inline constexpr int kMaxDegree = 64;

// Degree-wise decomposition f ~ sum_m Proj_m f, with each component stored as
// samples on the rule's nodes.
struct HarmonicExpansion {
  int n = 0;
  int max_degree = 0;
  QuadratureRule rule;
  std::map<int, std::vector<double>> components;
  std::map<int, double> norms;  // L2(sigma) norm of each component
};

// Reproducing-kernel projection onto degree-m harmonics:
//   (Proj_m f)(theta) = dim_m * integral f(x) P_m(<x, theta>) dsigma(x),
// P_m the Gegenbauer polynomial of index (n - 2)/2 normalized to P_m(1) = 1.
// The result can be evaluated anywhere on the sphere.
SphericalFunction project_degree(const SphericalFunction& f, int m, const QuadratureRule& rule,
                                 int degree_cap = kMaxDegree);

// All projections up to max_degree on the rule's nodes. For even f only even
// degrees are computed.
HarmonicExpansion expand(const SphericalFunction& f, int max_degree, const QuadratureRule& rule);
HarmonicExpansion expand_samples(std::span<const double> values, bool even, int max_degree,
                                 const QuadratureRule& rule);

// Pointwise sum of the components. Off the nodes each component is
// re-projected from its samples, which reproduces it when the rule is exact
// through twice its degree.
SphericalFunction synthesize(const HarmonicExpansion& e);
std::vector<double> synthesize_on_nodes(const HarmonicExpansion& e);

// ||f - synthesize(e)||_2 on e's rule.
double truncation_residual(const SphericalFunction& f, const HarmonicExpansion& e);
double truncation_residual(std::span<const double> values, const HarmonicExpansion& e);

// Zonal kernel K(t) = sum_m coeff[m] dim_m P_m(t). Integrating g against
// K(<x, theta>) applies the multiplier coeff[m] to the degree-m part of g.
class ZonalKernel {
 public:
  ZonalKernel(int n, std::vector<double> coefficients);

  double operator()(double t) const;
  int max_degree() const { return static_cast<int>(scaled_.size()) - 1; }

 private:
  std::vector<double> scaled_;  // coeff[m] * dim_m
  std::vector<double> a_;
  std::vector<double> b_;
};

// Samples on the nodes of theta -> integral g(x) K(<x, theta>) dsigma(x),
// given the samples of g.
std::vector<double> apply_kernel_on_nodes(std::span<const double> values, const ZonalKernel& kernel,
                                          const QuadratureRule& rule);

// The same operator as an evaluator usable anywhere on the sphere.
SphericalFunction apply_kernel(std::span<const double> values, const ZonalKernel& kernel,
                               const QuadratureRule& rule, bool even);

}  // namespace starlens
