#include "nsd/bundle.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "nsd/minnorm.hpp"
#include "nsd/segsearch.hpp"

namespace nsd {

std::vector<Point> update_bundle(const BundleState& state, BundlePolicy policy, int m) {
  if (state.b.empty() || state.a.size() != state.b.size()) {
    throw DomainError("bundle state needs a'_0..a'_j and b'_0..b'_j");
  }
  const int j = static_cast<int>(state.b.size()) - 1;
  const int first = std::max(0, j - m);
  std::vector<Point> out;

  if (policy == BundlePolicy::KeepCuts) {
    out.push_back(state.a.front());
    if (j > 0) out.push_back(state.a.back());
    for (int l = first; l <= j; ++l) out.push_back(state.b[static_cast<std::size_t>(l)]);
  } else {
    out.push_back(state.a.front());
    for (int l = std::max(1, first); l <= j; ++l) out.push_back(state.a[static_cast<std::size_t>(l)]);
    out.push_back(state.b.back());
  }
  return out;
}

DirectionOutcome approximate_direction(const Point& x, double f_x, double eps, const Point& a0,
                                       const Metric& metric, Evaluator& eval, const Controls& controls,
                                       const Params& params, SolveObserver* observer) {
  const std::int64_t grads_at_entry = eval.gradient_evals();
  const double t1 = controls.t1(eps);

  DirectionOutcome out;
  BundleState state;
  Point a = a0;
  double a_norm = metric.norm(a);

  for (int j = 0;; ++j) {
    if (a_norm < t1) {
      out.kind = StepKind::NullStep;
      break;
    }
    Point h = a / a_norm;
    const double f_trial = eval.value(x - eps * h);
    if (f_trial - f_x <= -params.delta * a_norm * eps) {
      out.kind = StepKind::Descent;
      out.h = std::move(h);
      out.f_trial = f_trial;
      break;
    }
    if (j >= params.max_inner_steps) {
      char msg[128];
      std::snprintf(msg, sizeof msg, "inner approximation exceeded %d steps at radius %.3g", params.max_inner_steps, eps);
      throw InnerBudgetExhausted(msg, a_norm);
    }

    CuttingGradient cut;
    try {
      cut = find_cutting_gradient(x, eps, a, metric, eval, params.delta, params.delta_prime,
                                  params.max_bisections, observer, {f_x, f_trial});
    } catch (const NonTermination& e) {
      throw SegmentSearchFailed(e.what(), x, e.last_probe());
    }
    out.max_probe_distance = std::max(out.max_probe_distance, cut.distance);

    state.a.push_back(a);
    state.b.push_back(cut.b);
    const std::vector<Point> retained = update_bundle(state, params.bundle_policy, params.bundle_m);
    SimplexSolution next = min_norm_point(retained, metric, params.minnorm_tol);
    if (next.norm > a_norm) {
      // round-off only: a'_j itself belongs to the retained hull
      next.point = a;
      next.norm = a_norm;
    }
    if (observer) observer->on_inner_step({metric, a, cut.b, next.point, params.delta_prime, j});
    a = std::move(next.point);
    a_norm = next.norm;
    out.inner_steps = j + 1;
  }

  out.a = std::move(a);
  out.a_norm = a_norm;
  out.gradient_evals = eval.gradient_evals() - grads_at_entry;
  if (observer) {
    observer->on_direction({metric, out.kind, x, f_x, eps, out.a, out.a_norm, t1, params.delta});
  }
  return out;
}

}  // namespace nsd
