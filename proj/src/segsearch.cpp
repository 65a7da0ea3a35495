#include "nsd/segsearch.hpp"

#include <cmath>
#include <string>

namespace nsd {

CuttingGradient find_cutting_gradient(const Point& x, double eps, const Point& a, const Metric& metric,
                                      Evaluator& eval, double delta, double delta_prime, int max_bisections,
                                      SolveObserver* observer, KnownValues known) {
  if (!(eps > 0.0)) throw DomainError("segment search radius must be positive");
  const double a_norm = metric.norm(a);
  if (!(a_norm > 0.0)) throw DomainError("segment search needs a nonzero direction");
  const Point h = a / a_norm;
  const double cut_level = delta_prime * a_norm * a_norm;

  Point left = x;
  Point right = x - (2.0 * eps) * h;
  double f_left = 0.0;
  double f_right = 0.0;
  double length = 2.0 * eps;

  for (int level = 0;; ++level) {
    Point mid = 0.5 * (left + right);
    Point b = metric.representer(eval.subgradient(mid));
    if (metric.inner(a, b) <= cut_level) {
      const double dist = metric.norm(mid - x);
      return {std::move(b), std::move(mid), level, dist};
    }
    if (level == max_bisections) {
      throw NonTermination("segment search did not terminate after " + std::to_string(max_bisections) +
                               " bisections",
                           std::move(mid), level);
    }

    if (level == 0) {
      // the first half [x, x - eps h] is kept: sufficient descent fails on it by assumption
      f_left = known.f_x ? *known.f_x : eval.value(x);
      f_right = known.f_trial ? *known.f_trial : eval.value(mid);
      right = std::move(mid);
      length = eps;
    } else {
      const double f_mid = eval.value(mid);
      const double half = 0.5 * length;
      const double threshold = -delta * a_norm * half;
      const double slack_left = (f_mid - f_left) - threshold;
      const double slack_right = (f_right - f_mid) - threshold;
      // at least one half qualifies since the two slacks sum to the parent's positive slack
      if (slack_left > 0.0 || slack_left >= slack_right) {
        right = std::move(mid);
        f_right = f_mid;
      } else {
        left = std::move(mid);
        f_left = f_mid;
      }
      length = half;
    }
    if (observer) {
      observer->on_bisection({metric, x, left, right, f_left, f_right, level + 1, eps, a_norm, delta});
    }
  }
}

}  // namespace nsd
