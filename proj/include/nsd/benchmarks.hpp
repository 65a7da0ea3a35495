#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nsd/core.hpp"

namespace nsd::bench {

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class UnknownStart : public Error {
 public:
  using Error::Error;
};

struct NamedPoint {
  std::string label;
  Point x;
};

struct KnownOptimum {
  std::optional<Point> minimizer;
  double value = 0.0;
};

/// A row of a published result table, kept for report context.
struct ReferenceRow {
  std::string label;
  std::optional<std::int64_t> iterations;
  std::optional<std::int64_t> gradients;
  double value = 0.0;
};

/// Reference configuration overrides on top of the variant defaults.
struct ReferenceConfig {
  double eps0 = 1.0;
  std::optional<double> t1_factor;  // variant A: T1(x) = factor * x / eps0
  std::optional<double> t2_factor;  // T2(x) = factor * x
  LineSearchPolicy line_search = LineSearchPolicy::FirstNonDecrease;
  int line_search_refinements = 50;
  std::optional<double> f_target;
  double gap_tol = 1e-8;
  std::int64_t max_gradient_evals = 100'000;
};

struct Benchmark {
  std::string name;
  int dimension = 0;
  std::shared_ptr<const Oracle> oracle;
  std::vector<NamedPoint> starts;  // first entry is the default
  ReferenceConfig config;
  std::optional<KnownOptimum> optimum;
  std::vector<ReferenceRow> reference_rows;
  /// Analytic Hessian where the function is smooth, empty otherwise.
  std::function<Matrix(const Point&)> hessian;

  const Point& start(const std::string& label) const;
  /// Params + Controls for the reference configuration in the given variant. `eps0`
  /// replaces the reference radius where T1 depends on it.
  Params params(Variant variant) const;
  Controls controls(Variant variant, std::optional<double> eps0 = std::nullopt) const;
};

enum class NesterovKind { Smooth, Nonsmooth, AbsVariant };
enum class ChebMode { PerturbedStart, PerturbedFunction };

/// Three-piece convex Wolfe function, minimizer (-1, 0) with value -8.
Benchmark make_wolfe();
/// max_i x_i^2; starts u+, v = 0.1 u+, and u+- for even n.
Benchmark make_qmax(int n);
Benchmark make_rosenbrock();
/// x^T H x with the n x n Hilbert matrix H.
Benchmark make_hilbert(int n);
Benchmark make_nesterov(NesterovKind kind, int n);
/// Discrete Chebyshev approximation of 1/t on [1, 10] by m exponentials, n = 2m.
Benchmark make_cheb_exp(int m, ChebMode mode);
Benchmark make_regression();

/// Grid t_i = 1 + 9 i / 2000, i = 0..2000.
const std::vector<double>& cheb_grid();

/// Resolves a registry name (wolfe, qmax, rosenbrock, hilbert, nesterov_smooth,
/// nesterov_nonsmooth, nesterov_abs, cheb_exp, cheb_exp_fn, regression). `n` is the problem
/// dimension where the family has one. Returns nullopt for unknown names.
std::optional<Benchmark> make_by_name(const std::string& name, std::optional<int> n = std::nullopt);
std::vector<std::string> registry_names();

}  // namespace nsd::bench
