#include "starlens/sphere.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "starlens/errors.hpp"
#include "starlens/parallel.hpp"
#include "starlens/specfun.hpp"

namespace starlens {
namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::size_t azimuth_count(int level) {
  // Uniform rule on the circle is exact through degree N - 1; N even keeps
  // the node set centrally symmetric.
  std::size_t n = static_cast<std::size_t>(level) + 1;
  return n % 2 == 0 ? n : n + 1;
}

std::size_t polar_count(int level) { return static_cast<std::size_t>(level) / 2 + 1; }

struct RawRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

RawRule build_sphere(int d, int level) {
  RawRule out;
  if (d == 2) {
    const std::size_t count = azimuth_count(level);
    out.nodes.reserve(2 * count);
    for (std::size_t j = 0; j < count; ++j) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
      out.nodes.push_back(std::cos(phi));
      out.nodes.push_back(std::sin(phi));
      out.weights.push_back(1.0 / static_cast<double>(count));
    }
    return out;
  }
  const double jac = 0.5 * (d - 3);
  const GaussRule polar = gauss_jacobi(static_cast<int>(polar_count(level)), jac, jac);
  const RawRule inner = build_sphere(d - 1, level);
  const std::size_t inner_size = inner.weights.size();
  out.nodes.reserve(polar.nodes.size() * inner_size * d);
  out.weights.reserve(polar.nodes.size() * inner_size);
  for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
    const double t = polar.nodes[i];
    const double r = std::sqrt((1.0 - t) * (1.0 + t));
    for (std::size_t k = 0; k < inner_size; ++k) {
      out.nodes.push_back(t);
      for (int c = 0; c < d - 1; ++c) out.nodes.push_back(r * inner.nodes[k * (d - 1) + c]);
      out.weights.push_back(polar.weights[i] * inner.weights[k]);
    }
  }
  return out;
}

std::size_t predicted_size(int d, int level) {
  std::size_t size = azimuth_count(level);
  for (int k = 3; k <= d; ++k) size *= polar_count(level);
  return size;
}

}  // namespace

GaussRule gauss_jacobi(int count, double alpha, double beta) {
  if (count < 1) throw DomainError("gauss_jacobi: count must be positive");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");
  // Golub-Welsch on the Jacobi matrix of the monic Jacobi recurrence.
  Eigen::VectorXd diag(count);
  Eigen::VectorXd sub(std::max(count - 1, 1));
  const double ab = alpha + beta;
  for (int k = 0; k < count; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0) {
      diag(k) = (beta - alpha) / (ab + 2.0);
    } else {
      diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    if (k + 1 < count) {
      const int j = k + 1;
      const double sj = 2.0 * j + ab;
      double b;
      if (j == 1) {
        b = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
      } else {
        b = 4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (sj * sj * (sj + 1.0) * (sj - 1.0));
      }
      sub(k) = std::sqrt(b);
    }
  }
  const double log_mass = (ab + 1.0) * std::log(2.0) + log_gamma(alpha + 1.0) + log_gamma(beta + 1.0) -
                          log_gamma(ab + 2.0);
  const double mass = std::exp(log_mass);

  GaussRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  if (count == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mass;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(count - 1), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalDegeneracy("gauss_jacobi: eigensolver failed");
  for (int i = 0; i < count; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mass * v0 * v0;
  }
  if (alpha == beta) {
    // Enforce exact reflection symmetry of the symmetric rule.
    for (int i = 0; i < count / 2; ++i) {
      const int j = count - 1 - i;
      const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
      const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
      rule.nodes[i] = -x;
      rule.nodes[j] = x;
      rule.weights[i] = rule.weights[j] = w;
    }
    if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  }
  return rule;
}

QuadratureRule::QuadratureRule(int dim, int level, std::vector<double> flat_nodes, std::vector<double> weights)
    : dim_(dim), level_(level) {
  if (dim < 2) throw DimensionError("QuadratureRule: dimension must be at least 2");
  if (weights.empty()) throw DomainError("QuadratureRule: empty rule");
  if (flat_nodes.size() != weights.size() * static_cast<std::size_t>(dim)) {
    throw DimensionMismatch("QuadratureRule: node array does not match weight count");
  }
  CompensatedSum total;
  for (double w : weights) {
    if (!(w > 0.0)) throw DomainError("QuadratureRule: weights must be positive");
    total.add(w);
  }
  const double inv = 1.0 / total.value();
  for (double& w : weights) w *= inv;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double norm2 = 0.0;
    for (int c = 0; c < dim; ++c) norm2 += flat_nodes[i * dim + c] * flat_nodes[i * dim + c];
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-14) {
      throw DomainError("QuadratureRule: node " + std::to_string(i) + " is not a unit vector");
    }
  }
  data_ = std::make_shared<const Data>(Data{std::move(flat_nodes), std::move(weights)});
}

QuadratureRule product_rule(int n, int level, std::size_t max_nodes) {
  if (n < 3) throw DimensionError("product_rule: dimension must be at least 3");
  if (level < 4) throw DomainError("product_rule: level must be at least 4");
  const std::size_t size = predicted_size(n, level);
  if (size > max_nodes) {
    throw ResourceError("product_rule: " + std::to_string(size) + " nodes exceed the cap of " +
                        std::to_string(max_nodes));
  }
  RawRule raw = build_sphere(n, level);
  return QuadratureRule(n, level, std::move(raw.nodes), std::move(raw.weights));
}

int default_level(int n) {
  if (n <= 3) return 48;
  if (n == 4) return 32;
  return 24;
}

QuadratureRule subsphere_rule(std::span<const double> xi, const QuadratureRule& base) {
  const int n = static_cast<int>(xi.size());
  if (n < 3) throw DimensionError("subsphere_rule: dimension must be at least 3");
  if (base.dim() != n - 1) throw DimensionMismatch("subsphere_rule: base rule must live in R^{n-1}");
  double norm2 = 0.0;
  for (double x : xi) norm2 += x * x;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) throw DomainError("subsphere_rule: xi must be a unit vector");
  const double norm = std::sqrt(norm2);

  // Householder reflection H with H e_0 = -+xi; its remaining columns span xi^perp.
  std::vector<double> v(n);
  for (int c = 0; c < n; ++c) v[c] = xi[c] / norm;
  v[0] += v[0] >= 0.0 ? 1.0 : -1.0;
  double vv = 0.0;
  for (double x : v) vv += x * x;

  std::vector<double> nodes(base.size() * n);
  std::vector<double> weights(base.weights().begin(), base.weights().end());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto b = base.node(i);
    double vb = 0.0;
    for (int c = 1; c < n; ++c) vb += v[c] * b[c - 1];
    const double scale = 2.0 * vb / vv;
    double* u = nodes.data() + i * n;
    u[0] = -scale * v[0];
    for (int c = 1; c < n; ++c) u[c] = b[c - 1] - scale * v[c];
  }
  return QuadratureRule(n, base.level(), std::move(nodes), std::move(weights));
}

QuadratureRule subsphere_base(int n, int level) {
  if (n < 3) throw DimensionError("subsphere_rule: dimension must be at least 3");
  if (level < 1) throw DomainError("subsphere_rule: level must be positive");
  RawRule raw = build_sphere(n - 1, level);
  return QuadratureRule(n - 1, level, std::move(raw.nodes), std::move(raw.weights));
}

QuadratureRule subsphere_rule(std::span<const double> xi, int level) {
  return subsphere_rule(xi, subsphere_base(static_cast<int>(xi.size()), level));
}

double abs_moment(int n, double a) {
  if (!(a > -1.0)) throw DomainError("abs_moment: exponent must exceed -1");
  return std::exp(log_gamma(0.5 * n) + log_gamma(0.5 * (a + 1.0)) - 0.5 * std::log(std::numbers::pi) -
                  log_gamma(0.5 * (n + a)));
}

PowerWeightedRuleBuilder::PowerWeightedRuleBuilder(int n, double exponent, int level)
    : n_(n), level_(level), equator_base_(subsphere_base(n, level)) {
  if (n < 3) throw DimensionError("power_weighted_rule: dimension must be at least 3");
  if (!(exponent > -1.0)) throw DomainError("power_weighted_rule: exponent must exceed -1");
  // x = t axis + sqrt(1 - t^2) v; dsigma = c_n (1 - t^2)^{(n-3)/2} dt dsigma_{n-2}(v).
  // With s = t^2 and s = (1 + y)/2 the weight becomes (1 - y)^alpha (1 + y)^beta.
  const double alpha = 0.5 * (n - 3);
  const double beta = 0.5 * (exponent - 1.0);
  radial_ = gauss_jacobi(static_cast<int>(polar_count(level)), alpha, beta);
  const double c_n = std::exp(log_gamma(0.5 * n) - 0.5 * std::log(std::numbers::pi) - log_gamma(0.5 * (n - 1)));
  double raw_total = 0.0;
  for (double w : radial_.weights) raw_total += w;
  mass_ = c_n * raw_total * std::pow(2.0, -alpha - beta - 1.0);
}

PowerWeightedRule PowerWeightedRuleBuilder::build(std::span<const double> axis) const {
  if (static_cast<int>(axis.size()) != n_) throw DimensionMismatch("power_weighted_rule: axis dimension");
  const QuadratureRule equator = subsphere_rule(axis, equator_base_);
  const int n = n_;
  std::vector<double> nodes;
  std::vector<double> weights;
  nodes.reserve(2 * radial_.nodes.size() * equator.size() * n);
  weights.reserve(2 * radial_.nodes.size() * equator.size());
  double axis_norm = 0.0;
  for (double x : axis) axis_norm += x * x;
  axis_norm = std::sqrt(axis_norm);
  for (std::size_t i = 0; i < radial_.nodes.size(); ++i) {
    const double t = std::sqrt(0.5 * (1.0 + radial_.nodes[i]));
    const double r = std::sqrt(0.5 * (1.0 - radial_.nodes[i]));
    for (double sign : {1.0, -1.0}) {
      for (std::size_t k = 0; k < equator.size(); ++k) {
        const auto v = equator.node(k);
        double norm2 = 0.0;
        const std::size_t start = nodes.size();
        for (int c = 0; c < n; ++c) {
          const double x = sign * t * axis[c] / axis_norm + r * v[c];
          nodes.push_back(x);
          norm2 += x * x;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (int c = 0; c < n; ++c) nodes[start + c] *= inv;
        weights.push_back(0.5 * radial_.weights[i] * equator.weight(k));
      }
    }
  }
  return {QuadratureRule(n, level_, std::move(nodes), std::move(weights)), mass_};
}

PowerWeightedRule power_weighted_rule(std::span<const double> axis, double exponent, int level) {
  return PowerWeightedRuleBuilder(static_cast<int>(axis.size()), exponent, level).build(axis);
}

std::vector<double> sample(const SphericalFunction& f, const QuadratureRule& rule) {
  if (f.dim() != rule.dim()) throw DimensionMismatch("sample: function and rule dimensions differ");
  std::vector<double> values(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) { values[i] = f(rule.node(i)); });
  return values;
}

double integrate(std::span<const double> values, const QuadratureRule& rule) {
  if (values.size() != rule.size()) throw DimensionMismatch("integrate: sample count differs from rule size");
  CompensatedSum sum;
  for (std::size_t i = 0; i < values.size(); ++i) sum.add(rule.weight(i) * values[i]);
  return sum.value();
}

double integrate(const SphericalFunction& f, const QuadratureRule& rule) {
  return integrate(sample(f, rule), rule);
}

double lq_norm(std::span<const double> values, double q, const QuadratureRule& rule) {
  if (!(q >= 1.0)) throw DomainError("lq_norm: q must be at least 1");
  if (values.size() != rule.size()) throw DimensionMismatch("lq_norm: sample count differs from rule size");
  CompensatedSum sum;
  for (std::size_t i = 0; i < values.size(); ++i) sum.add(rule.weight(i) * std::pow(std::abs(values[i]), q));
  return std::pow(sum.value(), 1.0 / q);
}

double lq_norm(const SphericalFunction& f, double q, const QuadratureRule& rule) {
  return lq_norm(sample(f, rule), q, rule);
}

bool is_even(const SphericalFunction& f, const QuadratureRule& rule, double tol) {
  if (f.dim() != rule.dim()) throw DimensionMismatch("is_even: function and rule dimensions differ");
  const int n = rule.dim();
  std::vector<char> ok(rule.size(), 1);
  parallel_for(rule.size(), [&](std::size_t i) {
    const auto u = rule.node(i);
    std::vector<double> minus(u.begin(), u.end());
    for (double& x : minus) x = -x;
    const double a = f(u);
    const double b = f(std::span<const double>(minus.data(), static_cast<std::size_t>(n)));
    ok[i] = std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
  });
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

}  // namespace starlens
