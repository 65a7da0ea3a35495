#include "nsd/solver.hpp"

#include <cmath>
#include <string>

#include "nsd/bundle.hpp"

namespace nsd {

double next_radius(double a_norm, double eps_k, const GControl& g, Variant variant) {
  if (!(a_norm > 0.0) || !(eps_k > 0.0)) throw DomainError("next_radius: inputs must be positive");
  if (variant == Variant::B) return a_norm;
  return eval_control(g, a_norm, eps_k);
}

LineSearchResult line_search(const Point& x, double f_x, const Point& h, double eps, double f_eps,
                             double a_norm, double delta, Evaluator& eval, LineSearchPolicy policy,
                             double growth, int max_doublings, int refinements) {
  auto sufficient = [&](double sigma, double f) { return f - f_x <= -delta * a_norm * sigma; };

  LineSearchResult best{eps, f_eps, 0};
  double sigma = eps;
  double sigma_prev = eps;  // candidate before `sigma`
  double f_prev = f_eps;
  int trials = 0;
  bool bracketed = false;
  for (int p = 1; p <= max_doublings; ++p) {
    const double s = sigma * growth;
    const double f = eval.value(x - s * h);
    ++trials;
    if (policy == LineSearchPolicy::ArmijoExpand) {
      if (!sufficient(s, f)) break;
      best = {s, f, 0};
    } else {
      if (f >= f_prev) {
        // the ray minimum lies in [sigma_prev, s]
        bracketed = true;
        sigma_prev = std::max(eps, sigma_prev);
        sigma = s;
        break;
      }
      if (sufficient(s, f)) best = {s, f, 0};
      f_prev = f;
    }
    sigma_prev = sigma;
    sigma = s;
  }

  if (bracketed && refinements > 0) {
    // golden-section search for the point where f stops decreasing
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = sigma_prev, hi = sigma;
    double m1 = hi - ratio * (hi - lo), m2 = lo + ratio * (hi - lo);
    double f1 = eval.value(x - m1 * h), f2 = eval.value(x - m2 * h);
    trials += 2;
    for (int r = 0; r < refinements; ++r) {
      if (f1 <= f2) {
        hi = m2;
        m2 = m1;
        f2 = f1;
        m1 = hi - ratio * (hi - lo);
        f1 = eval.value(x - m1 * h);
      } else {
        lo = m1;
        m1 = m2;
        f1 = f2;
        m2 = lo + ratio * (hi - lo);
        f2 = eval.value(x - m2 * h);
      }
      ++trials;
    }
    const double s = f1 <= f2 ? m1 : m2;
    const double f = std::min(f1, f2);
    if (s >= eps && f <= best.f && sufficient(s, f)) best = {s, f, 0};
  }
  best.trials = trials;
  return best;
}

Trace solve(const Oracle& oracle, const Point& x0, const Params& params, const Controls& controls,
            const MetricProvider& metric_provider, SolveObserver* observer) {
  validate_params(params, controls);
  const int n = oracle.dimension();
  if (x0.size() != n) throw DimensionMismatch("initial point", n, x0.size());
  require_finite(x0, "initial point");
  if (params.variant == Variant::B && !metric_provider) {
    throw InvalidConfig({"variant B requires a metric provider"});
  }

  Evaluator eval(oracle, params.max_gradient_evals);
  Trace trace;
  Point x = x0;
  double f_x = eval.value(x);
  double eps_k = params.eps0;
  double prev_a_norm = -1.0;
  trace.status = Status::BudgetExhausted;

  auto close_record = [&](IterationRecord& rec) {
    rec.grad_evals = eval.gradient_evals();
    rec.value_evals = eval.value_evals();
  };

  try {
    for (std::int64_t k = 0;; ++k) {
      if (params.f_target && f_x - *params.f_target < params.gap_tol) {
        trace.status = Status::ConvergedTarget;
        break;
      }
      if (k >= params.max_iterations) {
        trace.status = Status::BudgetExhausted;
        trace.message = "iteration budget exhausted";
        break;
      }

      trace.iterations.push_back({});
      IterationRecord& rec = trace.iterations.back();
      rec.k = k;
      rec.x = x;
      rec.f = f_x;
      rec.eps_k = eps_k;

      const Metric metric = params.variant == Variant::B
                                ? metric_from_hessian(metric_provider(x), params.metric_mode)
                                : Metric::identity(n);
      rec.metric_condition = metric.condition_number();

      const Point a_k = metric.representer(eval.subgradient(x));
      const double a_norm = metric.norm(a_k);
      const double radius_norm =
          (params.radius_from_previous_gradient && prev_a_norm >= 0.0) ? prev_a_norm : a_norm;
      prev_a_norm = a_norm;

      double eps = params.variant == Variant::B ? a_norm : controls.g(radius_norm, eps_k);
      if (!(eps > 0.0)) {
        // zero subgradient with a radius rule proportional to it: x_k is stationary
        close_record(rec);
        trace.status = Status::ConvergedRadius;
        trace.message = "zero subgradient";
        break;
      }

      bool done = false;
      for (;;) {
        DirectionOutcome dir = approximate_direction(x, f_x, eps, a_k, metric, eval, controls, params, observer);
        rec.radii.push_back({eps, dir.kind, dir.a_norm, dir.inner_steps});
        rec.max_probe_distance = std::max(rec.max_probe_distance, dir.max_probe_distance);

        if (dir.kind == StepKind::NullStep) {
          if (eps <= params.eps_tol) {
            trace.status = Status::ConvergedRadius;
            done = true;
            break;
          }
          eps = controls.t2(eps);
          continue;
        }

        const LineSearchResult ls = line_search(x, f_x, dir.h, eps, dir.f_trial, dir.a_norm, params.delta, eval,
                                                params.line_search, params.sigma_growth, params.max_doublings,
                                                params.line_search_refinements);
        Point x_next = x - ls.sigma * dir.h;
        if (observer) {
          observer->on_step({metric, x, dir.h, ls.sigma, eps, dir.a_norm, params.delta, f_x, ls.f});
        }
        rec.sigma = ls.sigma;
        eps_k = eps;
        x = std::move(x_next);
        f_x = ls.f;
        break;
      }
      close_record(rec);
      if (done) break;
    }
  } catch (const BudgetExhausted& e) {
    trace.status = Status::BudgetExhausted;
    trace.message = e.what();
  } catch (const InnerBudgetExhausted& e) {
    trace.status = Status::BudgetExhausted;
    trace.message = e.what();
  } catch (const SegmentSearchFailed& e) {
    trace.status = Status::SegmentSearchFailed;
    trace.message = std::string(e.what()) + " at iterate k=" +
                    std::to_string(trace.iterations.empty() ? 0 : trace.iterations.back().k);
  }

  if (!trace.iterations.empty() && trace.status != Status::ConvergedTarget) {
    auto& last = trace.iterations.back();
    if (last.grad_evals < eval.gradient_evals() || last.value_evals < eval.value_evals()) {
      last.grad_evals = eval.gradient_evals();
      last.value_evals = eval.value_evals();
    }
  }
  trace.x = x;
  trace.f = f_x;
  trace.grad_evals = eval.gradient_evals();
  trace.value_evals = eval.value_evals();
  return trace;
}

}  // namespace nsd
