#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace starlens {

using Complex = std::complex<double>;

// Principal branch of log Gamma: analytic on C minus (-inf, 0], real on the
// positive axis. Stirling series after an upward shift for Re z >= 1/2,
// reflection below. Throws PoleError at nonpositive integers.
Complex log_gamma(Complex z);

// Real-argument convenience; requires x > 0.
double log_gamma(double x);

// pi^{p/2} / Gamma(1 + p/2): volume of the unit ball in R^p for integer p.
double kappa(double p);

// Gegenbauer polynomial C_m^{lam}(t) by the three-term recurrence.
double gegenbauer(int m, double lam, double t);

// C_m^{lam}(1) = Gamma(m + 2 lam) / (Gamma(2 lam) m!).
double gegenbauer_at_one(int m, double lam);

// Coefficients of the recurrence for P_m = C_m^{lam} / C_m^{lam}(1):
//   P_0 = 1, P_1 = t, P_m = a_m t P_{m-1} - b_m P_{m-2}.
// With this normalization P_m(1) = 1 and |P_m| <= 1 on [-1, 1].
class NormalizedGegenbauer {
 public:
  NormalizedGegenbauer(int max_degree, double lam);

  // Fills out[0..max_degree] with P_0(t) .. P_max_degree(t).
  void evaluate(double t, std::span<double> out) const;

  int max_degree() const { return max_degree_; }
  double lam() const { return lam_; }

 private:
  int max_degree_;
  double lam_;
  std::vector<double> a_;
  std::vector<double> b_;
};

// Dimension of the space of degree-m spherical harmonics in n variables.
std::int64_t harmonic_space_dim(int n, int m);

// Exact binomial coefficient for the small arguments used here.
std::int64_t binomial(int a, int b);

}  // namespace starlens
