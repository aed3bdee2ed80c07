#include "starlens/inequalities.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>

#include "starlens/errors.hpp"
#include "starlens/harmonics.hpp"
#include "starlens/ip_operator.hpp"
#include "starlens/specfun.hpp"

namespace starlens {
namespace {

InequalityReport make_report(std::string name, const StarBody& body, double param, const QuadratureRule& rule,
                             int max_degree, double lhs, double rhs) {
  InequalityReport r;
  r.name = std::move(name);
  r.n = body.dim();
  r.param = param;
  r.body = body.label();
  r.level = rule.level();
  r.max_degree = max_degree;
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = lhs / rhs;
  r.deficit = rhs - lhs;
  return r;
}

// Evaluates `core` on the rule and on the coarse rule; the report comes from
// the fine rule and carries the change of the deficit as quad_error.
template <typename Core>
InequalityReport with_refinement(const QuadratureRule& rule, Core core) {
  InequalityReport fine = core(rule);
  const QuadratureRule coarse = product_rule(rule.dim(), coarse_level(rule.level()));
  const InequalityReport rough = core(coarse);
  fine.quad_error = std::abs(fine.deficit - rough.deficit);
  return fine;
}

double sum_abs_power(std::span<const double> values, double power, const QuadratureRule& rule) {
  std::vector<double> powered(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) powered[i] = std::pow(std::abs(values[i]), power);
  return integrate(powered, rule);
}

}  // namespace

bool InequalityReport::equal_within_resolution() const { return std::abs(deficit) <= 3.0 * quad_error; }

int coarse_level(int level) {
  int half = (level + 1) / 2;
  if (half % 2 == 1) ++half;
  return std::max(4, half);
}

StarBody intersection_body(const StarBody& body, const QuadratureRule& rule) {
  const int n = body.dim();
  if (n < 3) throw DimensionError("intersection_body: dimension must be at least 3");
  const QuadratureRule base = subsphere_base(n, rule.level());
  const StarBody source = body;
  return StarBody(
      n,
      SphericalFunction(
          n, [source, base](std::span<const double> xi) { return section_volume_on(source, xi, base); }, true),
      "I(" + body.label() + ")");
}

InequalityReport busemann_check(const StarBody& body, const QuadratureRule& rule) {
  const int n = body.dim();
  const double constant = std::pow(kappa(n - 1), n) / std::pow(kappa(n), n - 2);
  return with_refinement(rule, [&](const QuadratureRule& r) {
    const double lhs = volume(intersection_body(body, r), r);
    const double rhs = constant * std::pow(volume(body, r), n - 1);
    return make_report("busemann", body, 1.0, r, 0, lhs, rhs);
  });
}

InequalityReport generalized_busemann(const StarBody& body, double p, int max_degree, const QuadratureRule& rule) {
  const int n = body.dim();
  if (!(p > 0.0) || !(p < 0.5 * n)) throw DomainError("generalized_busemann: p must lie in (0, n/2)");
  double truncation = 0.0;
  InequalityReport report = with_refinement(rule, [&](const QuadratureRule& r) {
    const IpSamples ip = apply_ip_sampled(body.rho_power(n - p), p, max_degree, r);
    const double lhs = sum_abs_power(ip.values, n / p, r);
    const double rhs = std::pow(kappa(n), 1.0 - n / p) * std::pow(volume(body, r), n / p - 1.0);
    if (r.level() == rule.level()) truncation = ip.truncation_residual;
    return make_report("generalized", body, p, r, max_degree, lhs, rhs);
  });
  report.truncation_residual = truncation;
  return report;
}

InequalityReport parseval_check(const StarBody& body, const QuadratureRule& rule, int max_degree) {
  const int n = body.dim();
  const double p = 0.5 * n;
  double truncation = 0.0;
  InequalityReport report = with_refinement(rule, [&](const QuadratureRule& r) {
    const IpSamples ip = apply_ip_sampled(body.rho_power(n - p), p, max_degree, r);
    const double lhs = sum_abs_power(ip.values, 2.0, r);
    const double rhs = volume(body, r) / kappa(n);
    if (r.level() == rule.level()) truncation = ip.truncation_residual;
    return make_report("parseval", body, p, r, max_degree, lhs, rhs);
  });
  report.truncation_residual = truncation;
  return report;
}

double weakened_bound_factor(int n, double p) {
  if (!(p > 0.0) || !(p < 0.5 * n)) throw DomainError("weakened_bound_factor: p must lie in (0, n/2)");
  return std::pow(n / (2.0 * p), 0.5 * n);
}

KIntersection k_intersection_body(const StarBody& body, int k, int max_degree, const QuadratureRule& rule) {
  const int n = body.dim();
  if (k < 1 || k >= n) throw DomainError("k_intersection_body: k must satisfy 1 <= k < n");
  const double constant = kappa(n - k) / kappa(k);
  const SphericalFunction f = body.rho_power(n - k);

  KIntersection out;
  const IpSamples ip = apply_ip_sampled(f, k, max_degree, rule);
  out.truncation_residual = ip.truncation_residual;
  out.bracket.resize(ip.values.size());
  for (std::size_t i = 0; i < ip.values.size(); ++i) out.bracket[i] = constant * ip.values[i];
  out.min_bracket = *std::min_element(out.bracket.begin(), out.bracket.end());
  if (!(out.min_bracket > 0.0)) return out;

  const SphericalFunction transformed = apply_ip(f, k, max_degree, rule);
  const double inv_k = 1.0 / k;
  out.body = StarBody(n,
                      SphericalFunction(
                          n,
                          [transformed, constant, inv_k](std::span<const double> u) {
                            const double b = constant * transformed(u);
                            return b > 0.0 ? std::pow(b, inv_k) : std::nan("");
                          },
                          true),
                      "I_" + std::to_string(k) + "(" + body.label() + ")");
  return out;
}

double kpz_ratio(const StarBody& body, int k, int max_degree, const QuadratureRule& rule) {
  const int n = body.dim();
  const double scale = std::pow(kappa(n) / volume(body, rule), 1.0 / n);
  const KIntersection result = k_intersection_body(dilate(body, scale), k, max_degree, rule);
  if (!result.body) throw NotABody("kpz_ratio: the k-intersection body does not exist");
  const double vol = kappa(n) * sum_abs_power(result.bracket, static_cast<double>(n) / k, rule);
  const double vol_ball = kappa(n) * std::pow(kappa(n - k) / kappa(k), static_cast<double>(n) / k);
  return std::pow(vol / vol_ball, 1.0 / n);
}

std::vector<KpzComparisonRow> kpz_comparison_table(std::span<const int> dims) {
  std::vector<KpzComparisonRow> rows;
  for (int n : dims) {
    for (int k = 1; 2 * k < n; ++k) {
      KpzComparisonRow row{n, k, std::sqrt(n / (2.0 * k)), std::min(std::log(n), k * std::log(k)), false};
      row.improves = row.sqrt_bound < row.kpz_reference;
      rows.push_back(row);
    }
  }
  return rows;
}

StarBody polar_centroid_body(const StarBody& body, double q, const QuadratureRule& rule) {
  const int n = body.dim();
  if (!(q > -1.0) || q == 0.0) throw DomainError("polar_centroid_body: q must exceed -1 and be nonzero");
  auto builder = std::make_shared<const PowerWeightedRuleBuilder>(n, q, rule.level());
  const double factor = n * kappa(n) / ((n + q) * volume(body, rule));
  const SphericalFunction g = body.rho_power(n + q);
  return StarBody(n,
                  SphericalFunction(
                      n,
                      [builder, factor, g, q](std::span<const double> u) {
                        const PowerWeightedRule w = builder->build(u);
                        const double moment = factor * w.mass * integrate(sample(g, w.rule), w.rule);
                        return std::pow(moment, -1.0 / q);
                      },
                      true),
                  "Gamma*_" + std::to_string(q) + "(" + body.label() + ")");
}

double polar_centroid_ball_radius(int n, double q) {
  if (!(q > -1.0) || q == 0.0) throw DomainError("polar_centroid_ball_radius: q must exceed -1 and be nonzero");
  return std::pow(n / (n + q) * abs_moment(n, q), -1.0 / q);
}

InequalityReport lutwak_zhang_check(const StarBody& body, double q, const QuadratureRule& rule) {
  const int n = body.dim();
  if (!(q >= 1.0)) throw DomainError("lutwak_zhang_check: q must be at least 1");
  const double rhs = kappa(n) * kappa(n) * std::pow(polar_centroid_ball_radius(n, q), n);
  return with_refinement(rule, [&](const QuadratureRule& r) {
    const double lhs = volume(body, r) * volume(polar_centroid_body(body, q, r), r);
    return make_report("lz", body, q, r, 0, lhs, rhs);
  });
}

double operator_norm_test(const SphericalFunction& f, double p, int max_degree, const QuadratureRule& rule) {
  const int n = rule.dim();
  if (!(p > 0.0) || !(p < 0.5 * n)) throw DomainError("operator_norm_test: p must lie in (0, n/2)");
  const IpSamples ip = apply_ip_sampled(f, p, max_degree, rule);
  return lq_norm(ip.values, n / p, rule) / lq_norm(ip.input, n / (n - p), rule);
}

double local_rhs_coeff(int n, double p) { return n / (2.0 * (n - p)); }

double local_lhs_coeff(int n, double p, int m) {
  const double lambda = multiplier(n, p, m);
  return n * (n - p) / (2.0 * p * p) * lambda * lambda;
}

SweepResult local_expansion(int n, double p, int m, std::span<const double> eps_list, int max_degree,
                            const QuadratureRule& rule) {
  if (!(p > 0.0) || !(p < 0.5 * n)) throw DomainError("local_expansion: p must lie in (0, n/2)");
  if (eps_list.size() < 4) throw DomainError("local_expansion: at least four eps values are required");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0) || (i > 0 && !(eps_list[i] > eps_list[i - 1]))) {
      throw DomainError("local_expansion: eps values must be positive and strictly increasing");
    }
  }
  if (max_degree < m) throw DomainError("local_expansion: truncation degree below the perturbation degree");

  SweepResult out;
  out.n = n;
  out.p = p;
  out.m = m;
  out.eps_values.assign(eps_list.begin(), eps_list.end());
  for (double eps : eps_list) {
    const InequalityReport r = generalized_busemann(perturbed_ball(n, p, eps, m), p, max_degree, rule);
    out.deficits.push_back(r.deficit);
    out.quad_errors.push_back(r.quad_error);
  }

  // ||H_m||_2^2 of the unit zonal perturbation.
  const StarBody unit = perturbed_ball(n, p, 1.0, m);
  out.harmonic_norm2 = std::pow(lq_norm(*unit.perturbation(), 2.0, rule), 2.0);
  out.predicted_coeff = (local_rhs_coeff(n, p) - local_lhs_coeff(n, p, m)) * out.harmonic_norm2;

  // deficit / eps^2 = c + d eps + e eps^2, weighted least squares; the
  // correction terms extrapolate the eps^2 coefficient to eps -> 0.
  const Eigen::Index rows = static_cast<Eigen::Index>(eps_list.size());
  Eigen::MatrixXd a(rows, 3);
  Eigen::VectorXd b(rows);
  Eigen::VectorXd w(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double eps = eps_list[i];
    const double d = out.deficits[i];
    const double rel_noise = out.quad_errors[i] / std::max(std::abs(d), 1e-300);
    w(i) = 1.0 / (1.0 + rel_noise);
    a(i, 0) = w(i);
    a(i, 1) = w(i) * eps;
    a(i, 2) = w(i) * eps * eps;
    b(i) = w(i) * d / (eps * eps);
  }
  const Eigen::VectorXd coeffs = a.colPivHouseholderQr().solve(b);
  out.fitted_quadratic_coeff = coeffs(0);
  double sq = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double eps = eps_list[i];
    const double model = (coeffs(0) + coeffs(1) * eps + coeffs(2) * eps * eps) * eps * eps;
    sq += std::pow(out.deficits[i] - model, 2.0);
  }
  out.fit_residual = std::sqrt(sq / rows);
  return out;
}

}  // namespace starlens
