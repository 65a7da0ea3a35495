#pragma once

#include "nsd/core.hpp"
#include "nsd/metric.hpp"

namespace nsd {

/// A segment kept by the bisection search at level >= 1. Its endpoints satisfy
/// f(right) - f(left) > -delta |a|_k |right - left|_k.
struct BisectionEvent {
  const Metric& metric;
  const Point& x;  // current iterate x_k
  const Point& left;
  const Point& right;
  double f_left;
  double f_right;
  int level;
  double eps;
  double a_norm;
  double delta;
};

/// One completed inner step: b is the cutting subgradient for a, a_next the new min-norm point.
struct InnerStepEvent {
  const Metric& metric;
  const Point& a;
  const Point& b;
  const Point& a_next;
  double delta_prime;
  int j;
};

/// Outcome of one inner approximation at radius eps.
struct DirectionEvent {
  const Metric& metric;
  StepKind kind;
  const Point& x;
  double f_x;
  double eps;
  const Point& a;
  double a_norm;
  double t1;
  double delta;
};

/// An accepted outer step x_{k+1} = x - sigma h.
struct StepEvent {
  const Metric& metric;
  const Point& x;
  const Point& h;
  double sigma;
  double eps;
  double a_norm;
  double delta;
  double f_before;
  double f_after;
};

/// Read-only hooks into a running solve. Default implementations ignore every event.
class SolveObserver {
 public:
  virtual ~SolveObserver() = default;
  virtual void on_bisection(const BisectionEvent&) {}
  virtual void on_inner_step(const InnerStepEvent&) {}
  virtual void on_direction(const DirectionEvent&) {}
  virtual void on_step(const StepEvent&) {}
};

}  // namespace nsd
