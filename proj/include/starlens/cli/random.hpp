#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "starlens/bodies.hpp"
#include "starlens/sphere.hpp"

namespace starlens::cli {

using Rng = std::mt19937_64;

std::vector<double> random_unit(int n, Rng& rng);
Eigen::MatrixXd random_rotation(int n, Rng& rng);
// Q1 diag(s) Q2 with singular values drawn from [1, max_cond].
LinearMap random_map(int n, double max_cond, Rng& rng);
// Axis-aligned ellipsoid with semi-axes in [lo, hi], then a random rotation.
StarBody random_ellipsoid(int n, double lo, double hi, Rng& rng);
// c_0 + sum_j c_j P_{m_j}(<x, a_j>), four terms, even m_j <= max_degree.
SphericalFunction random_band_limited(int n, int max_degree, Rng& rng);

}  // namespace starlens::cli
