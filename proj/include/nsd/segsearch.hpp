#pragma once

#include <optional>

#include "nsd/core.hpp"
#include "nsd/metric.hpp"
#include "nsd/observer.hpp"

namespace nsd {

/// The bisection ran out of levels without meeting <a, b>_k <= delta' |a|_k^2.
class NonTermination : public Error {
 public:
  NonTermination(std::string msg, Point last_probe, int levels)
      : Error(std::move(msg)), last_probe_(std::move(last_probe)), levels_(levels) {}
  const Point& last_probe() const { return last_probe_; }
  int levels() const { return levels_; }

 private:
  Point last_probe_;
  int levels_;
};

struct CuttingGradient {
  Point b;  // k-metric representer of an element of the generalized gradient at y
  Point y;  // evaluation point on the segment
  int level = 0;
  double distance = 0.0;  // |y - x|_k
};

/// Function values the caller already holds, to avoid re-evaluating them.
struct KnownValues {
  std::optional<double> f_x;      // f(x)
  std::optional<double> f_trial;  // f(x - eps h)
};

/// Bisection along [x, x - 2 eps h], h = a / |a|_k, for a subgradient b at a midpoint with
/// <a, b>_k <= delta' |a|_k^2. Expects that neither the null step nor the sufficient descent
/// test holds for a at radius eps. Every kept segment violates sufficient descent; when both
/// halves qualify the half nearer x is kept. One gradient per probed midpoint.
/// Throws NonTermination after max_bisections halvings.
CuttingGradient find_cutting_gradient(const Point& x, double eps, const Point& a, const Metric& metric,
                                      Evaluator& eval, double delta, double delta_prime, int max_bisections,
                                      SolveObserver* observer = nullptr, KnownValues known = {});

}  // namespace nsd
