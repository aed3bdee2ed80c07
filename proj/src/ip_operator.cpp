#include "starlens/ip_operator.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "starlens/errors.hpp"
#include "starlens/harmonics.hpp"

namespace starlens {
namespace {

void check_even_degree(int m) {
  if (m < 0 || m % 2 != 0) throw DomainError("multiplier: degree must be even and nonnegative");
}

void check_exponent(int n, double p) {
  if (n < 3) throw DimensionError("I_p: dimension must be at least 3");
  if (!(p > 0.0) || !(p < n)) throw DomainError("I_p: exponent must lie in (0, n)");
}

std::vector<double> eigenvalues_up_to(int n, double p, int max_degree) {
  std::vector<double> coeff(max_degree + 1, 0.0);
  for (int m = 0; m <= max_degree; m += 2) coeff[m] = eigenvalue(n, p, m);
  return coeff;
}

}  // namespace

double multiplier(int n, double p, int m) {
  check_exponent(n, p);
  check_even_degree(m);
  if (m == 0) return 1.0;
  return std::exp(log_gamma(0.5 * (n - p)) + log_gamma(0.5 * (m + p)) - log_gamma(0.5 * p) -
                  log_gamma(0.5 * (m + n - p)));
}

double eigenvalue(int n, double p, int m) {
  const double value = multiplier(n, p, m);
  return (m / 2) % 2 == 0 ? value : -value;
}

Complex multiplier_complex(int n, double s, int m) {
  if (n < 3) throw DimensionError("multiplier_complex: dimension must be at least 3");
  check_even_degree(m);
  const Complex p = 0.5 * n * Complex(1.0, s);
  const Complex log_value = log_gamma(0.5 * (static_cast<double>(n) - p)) + log_gamma(0.5 * (static_cast<double>(m) + p)) -
                            log_gamma(0.5 * p) - log_gamma(0.5 * (static_cast<double>(m + n) - p));
  return std::exp(log_value);
}

SphericalFunction apply_ip(const SphericalFunction& f, double p, int max_degree, const QuadratureRule& rule) {
  check_exponent(rule.dim(), p);
  if (f.dim() != rule.dim()) throw DimensionMismatch("apply_ip: function and rule dimensions differ");
  if (max_degree > kMaxDegree) throw DegreeTooLarge("apply_ip: truncation degree exceeds cap");
  if (!is_even(f, rule)) throw ParityError("apply_ip: input is not even");
  const std::vector<double> values = sample(f, rule);
  return apply_kernel(values, ZonalKernel(rule.dim(), eigenvalues_up_to(rule.dim(), p, max_degree)), rule, true);
}

IpSamples apply_ip_sampled(const SphericalFunction& f, double p, int max_degree, const QuadratureRule& rule) {
  check_exponent(rule.dim(), p);
  if (f.dim() != rule.dim()) throw DimensionMismatch("apply_ip: function and rule dimensions differ");
  if (!is_even(f, rule)) throw ParityError("apply_ip: input is not even");
  IpSamples out;
  out.input = sample(f, rule);
  const HarmonicExpansion e = expand_samples(out.input, true, max_degree, rule);
  out.values.assign(rule.size(), 0.0);
  for (const auto& [m, component] : e.components) {
    const double lambda = eigenvalue(rule.dim(), p, m);
    for (std::size_t j = 0; j < rule.size(); ++j) out.values[j] += lambda * component[j];
  }
  out.truncation_residual = truncation_residual(out.input, e);
  return out;
}

double ip_integral_constant(int n, double p) {
  if (!(p > 0.0) || !(p < 1.0)) throw DomainError("apply_ip_integral: exponent must lie in (0, 1)");
  return std::exp(0.5 * std::log(std::numbers::pi) + log_gamma(0.5 * (n - p)) - log_gamma(0.5 * n) -
                  log_gamma(0.5 * (1.0 - p)));
}

SphericalFunction apply_ip_integral(const SphericalFunction& f, double p, int level) {
  const int n = f.dim();
  const double constant = ip_integral_constant(n, p);
  auto builder = std::make_shared<const PowerWeightedRuleBuilder>(n, -p, level);
  return SphericalFunction(
      n,
      [f, builder, constant](std::span<const double> theta) {
        const PowerWeightedRule weighted = builder->build(theta);
        return constant * weighted.mass * integrate(sample(f, weighted.rule), weighted.rule);
      },
      true);
}

double stein_A(double s, int n) {
  if (n < 1) throw DomainError("stein_A: dimension must be positive");
  const double shift = 0.5 * s * n;
  const double log_value = 0.5 * std::log(std::numbers::pi) + log_gamma(Complex(0.5 * n, -0.5 * shift)).real() -
                           log_gamma(0.5 * n) - log_gamma(Complex(0.5, -0.5 * shift)).real();
  return std::exp(log_value);
}

double operator_bound(int n, double p) {
  if (!(p > 0.0) || !(p <= 0.5 * n)) throw DomainError("operator_bound: exponent must lie in (0, n/2]");
  return std::pow(n / (2.0 * p), 0.5 * p);
}

}  // namespace starlens
