#pragma once

#include <vector>

#include "nsd/core.hpp"
#include "nsd/metric.hpp"
#include "nsd/observer.hpp"

namespace nsd {

class InnerBudgetExhausted : public Error {
 public:
  InnerBudgetExhausted(std::string msg, double last_norm)
      : Error(std::move(msg)), last_norm_(last_norm) {}
  double last_norm() const { return last_norm_; }

 private:
  double last_norm_;
};

/// Wraps a NonTermination of the segment search together with the iterate it happened at.
class SegmentSearchFailed : public Error {
 public:
  SegmentSearchFailed(std::string msg, Point x, Point probe)
      : Error(std::move(msg)), x_(std::move(x)), probe_(std::move(probe)) {}
  const Point& x() const { return x_; }
  const Point& probe() const { return probe_; }

 private:
  Point x_;
  Point probe_;
};

/// Min-norm points a'_0..a'_j and cutting subgradients b'_0..b'_j of one inner approximation.
struct BundleState {
  std::vector<Point> a;
  std::vector<Point> b;
};

/// Retained set B'_j for the newest index j = b.size() - 1:
///   KeepCuts:     {a'_0, a'_j} u {b'_l : j - m <= l <= j}
///   KeepMinNorms: {a'_0} u {a'_l : j - m <= l <= j} u {b'_j}
/// Entries are distinct history slots; a'_j and b'_j are always present.
std::vector<Point> update_bundle(const BundleState& state, BundlePolicy policy, int m);

struct DirectionOutcome {
  StepKind kind = StepKind::NullStep;
  Point a;              // a_{k,i}
  double a_norm = 0.0;  // |a_{k,i}|_k
  Point h;              // a / |a|_k, empty for null steps
  double f_trial = 0.0; // f(x - eps h) for descent outcomes
  int inner_steps = 0;
  std::int64_t gradient_evals = 0;
  double max_probe_distance = 0.0;
};

/// Inner approximation of the gradient on the eps-ball around x, started from a0. Checks the
/// null step condition before sufficient descent at every step.
/// Throws InnerBudgetExhausted or SegmentSearchFailed.
DirectionOutcome approximate_direction(const Point& x, double f_x, double eps, const Point& a0,
                                       const Metric& metric, Evaluator& eval, const Controls& controls,
                                       const Params& params, SolveObserver* observer = nullptr);

}  // namespace nsd
