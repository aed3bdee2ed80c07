#include "starlens/harmonics.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "starlens/errors.hpp"
#include "starlens/parallel.hpp"
#include "starlens/specfun.hpp"

namespace starlens {
namespace {

double gegenbauer_index(int n) {
  if (n < 3) throw DimensionError("harmonics: dimension must be at least 3");
  return 0.5 * (n - 2);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
  return std::clamp(s, -1.0, 1.0);
}

std::vector<int> degrees_up_to(int max_degree, bool even) {
  std::vector<int> out;
  for (int m = 0; m <= max_degree; ++m) {
    if (!even || m % 2 == 0) out.push_back(m);
  }
  return out;
}

// out[d][j] = dim_m * sum_i w_i v_i P_m(<x_i, x_j>) for m = degrees[d].
std::vector<std::vector<double>> project_on_nodes(std::span<const double> values, std::span<const int> degrees,
                                                  const QuadratureRule& rule) {
  const int n = rule.dim();
  const int top = degrees.empty() ? 0 : degrees.back();
  const NormalizedGegenbauer poly(top, gegenbauer_index(n));
  std::vector<double> weighted(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) weighted[i] = rule.weight(i) * values[i];
  std::vector<double> dims(degrees.size());
  for (std::size_t d = 0; d < degrees.size(); ++d) dims[d] = static_cast<double>(harmonic_space_dim(n, degrees[d]));

  std::vector<std::vector<double>> out(degrees.size(), std::vector<double>(rule.size(), 0.0));
  parallel_for(rule.size(), [&](std::size_t j) {
    std::vector<double> p(top + 1);
    std::vector<double> acc(degrees.size(), 0.0);
    const auto theta = rule.node(j);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      poly.evaluate(dot(rule.node(i), theta), p);
      for (std::size_t d = 0; d < degrees.size(); ++d) acc[d] += weighted[i] * p[degrees[d]];
    }
    for (std::size_t d = 0; d < degrees.size(); ++d) out[d][j] = dims[d] * acc[d];
  });
  return out;
}

void check_degree(int m, int cap) {
  if (m < 0) throw DomainError("harmonics: negative degree");
  if (m > cap) throw DegreeTooLarge("harmonics: degree " + std::to_string(m) + " exceeds cap " + std::to_string(cap));
}

}  // namespace

ZonalKernel::ZonalKernel(int n, std::vector<double> coefficients) : scaled_(std::move(coefficients)) {
  const double lam = gegenbauer_index(n);
  if (scaled_.empty()) scaled_.push_back(0.0);
  a_.assign(scaled_.size(), 0.0);
  b_.assign(scaled_.size(), 0.0);
  for (std::size_t m = 0; m < scaled_.size(); ++m) {
    scaled_[m] *= static_cast<double>(harmonic_space_dim(n, static_cast<int>(m)));
    if (m >= 2) {
      a_[m] = 2.0 * (m + lam - 1.0) / (m + 2.0 * lam - 1.0);
      b_[m] = (m - 1.0) / (m + 2.0 * lam - 1.0);
    }
  }
}

double ZonalKernel::operator()(double t) const {
  double prev = 1.0;
  double sum = scaled_[0];
  if (scaled_.size() == 1) return sum;
  double curr = t;
  sum += scaled_[1] * curr;
  for (std::size_t m = 2; m < scaled_.size(); ++m) {
    const double next = a_[m] * t * curr - b_[m] * prev;
    prev = curr;
    curr = next;
    sum += scaled_[m] * curr;
  }
  return sum;
}

std::vector<double> apply_kernel_on_nodes(std::span<const double> values, const ZonalKernel& kernel,
                                          const QuadratureRule& rule) {
  if (values.size() != rule.size()) throw DimensionMismatch("apply_kernel: sample count differs from rule size");
  std::vector<double> weighted(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) weighted[i] = rule.weight(i) * values[i];
  std::vector<double> out(rule.size());
  parallel_for(rule.size(), [&](std::size_t j) {
    const auto theta = rule.node(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) acc += weighted[i] * kernel(dot(rule.node(i), theta));
    out[j] = acc;
  });
  return out;
}

SphericalFunction apply_kernel(std::span<const double> values, const ZonalKernel& kernel,
                               const QuadratureRule& rule, bool even) {
  if (values.size() != rule.size()) throw DimensionMismatch("apply_kernel: sample count differs from rule size");
  auto weighted = std::make_shared<std::vector<double>>(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) (*weighted)[i] = rule.weight(i) * values[i];
  const int n = rule.dim();
  return SphericalFunction(
      n,
      [weighted, kernel, rule](std::span<const double> theta) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) acc += (*weighted)[i] * kernel(dot(rule.node(i), theta));
        return acc;
      },
      even);
}

SphericalFunction project_degree(const SphericalFunction& f, int m, const QuadratureRule& rule, int degree_cap) {
  if (f.dim() != rule.dim()) throw DimensionMismatch("project_degree: function and rule dimensions differ");
  check_degree(m, degree_cap);
  std::vector<double> coeff(m + 1, 0.0);
  coeff[m] = 1.0;
  const std::vector<double> values = sample(f, rule);
  return apply_kernel(values, ZonalKernel(rule.dim(), std::move(coeff)), rule, m % 2 == 0);
}

HarmonicExpansion expand_samples(std::span<const double> values, bool even, int max_degree,
                                 const QuadratureRule& rule) {
  check_degree(max_degree, kMaxDegree);
  if (values.size() != rule.size()) throw DimensionMismatch("expand: sample count differs from rule size");
  const std::vector<int> degrees = degrees_up_to(max_degree, even);
  auto projected = project_on_nodes(values, degrees, rule);
  HarmonicExpansion e{rule.dim(), max_degree, rule, {}, {}};
  for (std::size_t d = 0; d < degrees.size(); ++d) {
    e.norms[degrees[d]] = lq_norm(projected[d], 2.0, rule);
    e.components[degrees[d]] = std::move(projected[d]);
  }
  return e;
}

HarmonicExpansion expand(const SphericalFunction& f, int max_degree, const QuadratureRule& rule) {
  if (f.dim() != rule.dim()) throw DimensionMismatch("expand: function and rule dimensions differ");
  const std::vector<double> values = sample(f, rule);
  return expand_samples(values, f.even(), max_degree, rule);
}

std::vector<double> synthesize_on_nodes(const HarmonicExpansion& e) {
  std::vector<double> out(e.rule.size(), 0.0);
  for (const auto& [m, samples] : e.components) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += samples[j];
  }
  return out;
}

SphericalFunction synthesize(const HarmonicExpansion& e) {
  if (e.components.empty()) {
    return SphericalFunction(e.n, [](std::span<const double>) { return 0.0; }, true);
  }
  // Each component re-projected through its own degree: one weighted sample
  // vector per degree, summed into a single evaluator.
  struct Part {
    std::vector<double> weighted;
    ZonalKernel kernel;
  };
  auto parts = std::make_shared<std::vector<Part>>();
  bool even = true;
  for (const auto& [m, samples] : e.components) {
    std::vector<double> coeff(m + 1, 0.0);
    coeff[m] = 1.0;
    std::vector<double> weighted(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) weighted[i] = e.rule.weight(i) * samples[i];
    parts->push_back(Part{std::move(weighted), ZonalKernel(e.n, std::move(coeff))});
    if (m % 2 == 1) even = false;
  }
  const QuadratureRule rule = e.rule;
  return SphericalFunction(
      e.n,
      [parts, rule](std::span<const double> theta) {
        double acc = 0.0;
        for (const Part& part : *parts) {
          for (std::size_t i = 0; i < rule.size(); ++i) acc += part.weighted[i] * part.kernel(dot(rule.node(i), theta));
        }
        return acc;
      },
      even);
}

double truncation_residual(std::span<const double> values, const HarmonicExpansion& e) {
  if (values.size() != e.rule.size()) throw DimensionMismatch("truncation_residual: sample count differs");
  const std::vector<double> synth = synthesize_on_nodes(e);
  std::vector<double> diff(values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = values[i] - synth[i];
  return lq_norm(diff, 2.0, e.rule);
}

double truncation_residual(const SphericalFunction& f, const HarmonicExpansion& e) {
  return truncation_residual(sample(f, e.rule), e);
}

}  // namespace starlens
