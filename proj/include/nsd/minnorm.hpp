#pragma once

#include <span>
#include <vector>

#include "nsd/core.hpp"
#include "nsd/metric.hpp"

namespace nsd {

class EmptyBundle : public Error {
 public:
  using Error::Error;
};

class BundleTooLarge : public Error {
 public:
  using Error::Error;
};

/// Convex combination a = sum_i lambda_i p_i of a bundle.
struct SimplexSolution {
  std::vector<double> lambda;
  Point point;
  double norm = 0.0;  // |point|_k
  int iterations = 0;
};

/// Norm-minimal point of conv(bundle) in |.|_k. Solved with Wolfe's corral algorithm in the
/// transformed coordinates z_i = A p_i. Terminates when no bundle point improves the current
/// point by more than tol * |x| * max_i |z_i| in the first-order test <x, z_i> >= |x|^2.
SimplexSolution min_norm_point(std::span<const Point> bundle, const Metric& metric, double tol = 1e-12);

/// Reference minimizer by enumeration of simplex coefficients on the lattice of resolution
/// 1 / grid. Lattices too large to enumerate at once (more than ~2e6 points) are walked from a
/// coarse full enumeration through successively finer windows around the incumbent, ending
/// with a local search at full resolution. At most five bundle points.
Point brute_force_min_norm(std::span<const Point> bundle, const Metric& metric, int grid);

}  // namespace nsd
