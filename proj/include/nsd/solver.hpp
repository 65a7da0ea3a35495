#pragma once

#include <functional>

#include "nsd/core.hpp"
#include "nsd/metric.hpp"
#include "nsd/observer.hpp"

namespace nsd {

/// Symmetric matrix defining the metric at x_k (interpreted per Params::metric_mode).
using MetricProvider = std::function<Matrix(const Point&)>;

/// Initial radius eps_{k,0} of outer iteration k: G(|a_k|_k, eps_k) for variant A, |a_k|_k
/// for variant B. Throws DomainError on non-positive inputs.
double next_radius(double a_norm, double eps_k, const GControl& g, Variant variant = Variant::A);

struct LineSearchResult {
  double sigma = 0.0;
  double f = 0.0;  // f(x - sigma h)
  int trials = 0;
};

/// Step length sigma >= eps along -h satisfying f(x - sigma h) - f(x) <= -delta |a|_k sigma.
/// f_eps = f(x - eps h) must already satisfy that test. Candidates are eps * growth^p,
/// p = 1..max_doublings.
LineSearchResult line_search(const Point& x, double f_x, const Point& h, double eps, double f_eps,
                             double a_norm, double delta, Evaluator& eval, LineSearchPolicy policy,
                             double growth, int max_doublings, int refinements = 0);

/// Outer descent loop. `metric_provider` is required for variant B and ignored for variant A.
/// Never throws for run-time failures of the method: those end the trace with a status.
/// Throws InvalidConfig / DimensionMismatch / NonFiniteValue for bad inputs.
Trace solve(const Oracle& oracle, const Point& x0, const Params& params, const Controls& controls,
            const MetricProvider& metric_provider = {}, SolveObserver* observer = nullptr);

}  // namespace nsd
