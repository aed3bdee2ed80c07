#pragma once

#include <span>
#include <vector>

#include "starlens/specfun.hpp"
#include "starlens/sphere.hpp"

namespace starlens {

// Gamma ratio
//   Gamma((n-p)/2) Gamma((m+p)/2) / (Gamma(p/2) Gamma((m+n-p)/2)),
// the modulus of the eigenvalue of I_p on degree-m harmonics (m even).
double multiplier(int n, double p, int m);

// The eigenvalue itself: (-1)^{m/2} * multiplier(n, p, m). This is the sign
// carried by the Fourier transform of |x|^{-n+p} H_m(x/|x|) and by the
// integral kernel |<x, theta>|^{-p}; apply_ip uses it.
double eigenvalue(int n, double p, int m);

// Gamma ratio at the complex exponent p = (n/2)(1 + i s).
Complex multiplier_complex(int n, double s, int m);

// I_p f = sum over even m <= max_degree of eigenvalue(n, p, m) Proj_m f.
// Throws ParityError when f is not even on the rule's nodes.
SphericalFunction apply_ip(const SphericalFunction& f, double p, int max_degree, const QuadratureRule& rule);

struct IpSamples {
  std::vector<double> input;   // f on the nodes
  std::vector<double> values;  // I_p f on the nodes
  double truncation_residual;  // ||f - sum_{m <= max_degree} Proj_m f||_2
};

// Same operator on the rule's nodes, with the truncation residual of f.
IpSamples apply_ip_sampled(const SphericalFunction& f, double p, int max_degree, const QuadratureRule& rule);

// Coefficient in front of the kernel integral for 0 < p < 1:
//   sqrt(pi) Gamma((n-p)/2) / (Gamma(n/2) Gamma((1-p)/2)).
double ip_integral_constant(int n, double p);

// I_p f(theta) = ip_integral_constant(n, p) * integral |<x, theta>|^{-p} f(x) dsigma(x),
// 0 < p < 1, with the singular weight absorbed into a Gauss-Jacobi rule.
SphericalFunction apply_ip_integral(const SphericalFunction& f, double p, int level);

// A(s) = sqrt(pi) |Gamma((n - i s n/2)/2)| / (Gamma(n/2) |Gamma((1 - i s n/2)/2)|).
double stein_A(double s, int n);

// (n/(2p))^{p/2}: bound for I_p from L^{n/(n-p)} to L^{n/p}, 0 < p <= n/2.
double operator_bound(int n, double p);

}  // namespace starlens
