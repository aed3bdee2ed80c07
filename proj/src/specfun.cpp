#include "starlens/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "starlens/errors.hpp"

namespace starlens {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

// B_{2k} / (2k (2k - 1)) for k = 1..10.
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

// Stirling series, valid for |z| >= 10 with |arg z| < pi / 2.
Complex stirling(Complex z) {
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex series = 0.0;
  Complex power = inv;
  for (double c : kStirling) {
    series += c * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series;
}

// Re z >= 1/2: shift up with log Gamma(z) = log Gamma(z + N) - sum log(z + k).
// Each log(z + k) has argument in (-pi/2, pi/2), so the sum stays on the
// principal branch.
Complex log_gamma_right(Complex z) {
  Complex shift = 0.0;
  while (std::abs(z) < 10.0) {
    shift += std::log(z);
    z += 1.0;
  }
  return stirling(z) - shift;
}

// log sin(pi z) for Im z >= 0, continuous in the closed upper half-plane:
// sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z}) and Re(1 - e^{2 i pi z}) >= 0.
Complex log_sin_pi_upper(Complex z) {
  const Complex i(0.0, 1.0);
  const Complex e = std::exp(2.0 * i * kPi * z);
  return -i * kPi * z + std::log(1.0 - e) + Complex(-std::log(2.0), kPi / 2.0);
}

Complex log_gamma_upper(Complex z) {
  if (z.real() >= 0.5) return log_gamma_right(z);
  // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z).
  return std::log(kPi) - log_sin_pi_upper(z) - log_gamma_right(1.0 - z);
}

bool near_pole(Complex z) {
  if (z.real() > 0.5) return false;
  const double tol = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z.real()));
  return std::abs(z.imag()) <= tol && std::abs(z.real() - std::round(z.real())) <= tol;
}

}  // namespace

Complex log_gamma(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("log_gamma: non-finite argument");
  }
  if (near_pole(z)) {
    throw PoleError("log_gamma: pole at z = " + std::to_string(z.real()));
  }
  Complex value;
  if (z.imag() >= 0.0) {
    value = log_gamma_upper(z);
  } else {
    value = std::conj(log_gamma_upper(std::conj(z)));
  }
  if (z.imag() == 0.0 && z.real() > 0.0) value.imag(0.0);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw DomainError("log_gamma: result overflow");
  }
  return value;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: real argument must be positive");
  return log_gamma(Complex(x, 0.0)).real();
}

double kappa(double p) {
  if (!(p > 0.0)) throw DomainError("kappa: p must be positive");
  return std::exp(0.5 * p * std::log(kPi) - log_gamma(1.0 + 0.5 * p));
}

double gegenbauer(int m, double lam, double t) {
  if (m < 0) throw DomainError("gegenbauer: negative degree");
  if (!(lam > 0.0)) throw DomainError("gegenbauer: lam must be positive");
  if (std::abs(t) > 1.0 + 1e-12) throw DomainError("gegenbauer: |t| > 1");
  if (m == 0) return 1.0;
  double prev = 1.0;
  double curr = 2.0 * lam * t;
  for (int k = 2; k <= m; ++k) {
    const double next = (2.0 * (k + lam - 1.0) * t * curr - (k + 2.0 * lam - 2.0) * prev) / k;
    prev = curr;
    curr = next;
  }
  return curr;
}

double gegenbauer_at_one(int m, double lam) {
  if (m < 0) throw DomainError("gegenbauer_at_one: negative degree");
  if (!(lam > 0.0)) throw DomainError("gegenbauer_at_one: lam must be positive");
  // Product form of Gamma(m + 2 lam) / (Gamma(2 lam) m!).
  double value = 1.0;
  for (int k = 1; k <= m; ++k) value *= (k - 1.0 + 2.0 * lam) / k;
  return value;
}

NormalizedGegenbauer::NormalizedGegenbauer(int max_degree, double lam)
    : max_degree_(max_degree), lam_(lam), a_(max_degree + 1, 0.0), b_(max_degree + 1, 0.0) {
  if (max_degree < 0) throw DomainError("NormalizedGegenbauer: negative degree");
  if (!(lam > 0.0)) throw DomainError("NormalizedGegenbauer: lam must be positive");
  for (int m = 2; m <= max_degree; ++m) {
    a_[m] = 2.0 * (m + lam - 1.0) / (m + 2.0 * lam - 1.0);
    b_[m] = (m - 1.0) / (m + 2.0 * lam - 1.0);
  }
}

void NormalizedGegenbauer::evaluate(double t, std::span<double> out) const {
  out[0] = 1.0;
  if (max_degree_ == 0) return;
  out[1] = t;
  for (int m = 2; m <= max_degree_; ++m) {
    out[m] = a_[m] * t * out[m - 1] - b_[m] * out[m - 2];
  }
}

std::int64_t binomial(int a, int b) {
  if (b < 0 || a < 0 || b > a) return 0;
  b = std::min(b, a - b);
  std::int64_t value = 1;
  for (int i = 0; i < b; ++i) {
    // value * (a - i) is divisible by (i + 1) at every step.
    value = value * (a - i) / (i + 1);
  }
  return value;
}

std::int64_t harmonic_space_dim(int n, int m) {
  if (n < 1 || m < 0) throw DomainError("harmonic_space_dim: invalid arguments");
  const std::int64_t all = binomial(n + m - 1, m);
  const std::int64_t lower = m >= 2 ? binomial(n + m - 3, m - 2) : 0;
  return all - lower;
}

}  // namespace starlens
