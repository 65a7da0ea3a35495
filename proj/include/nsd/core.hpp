#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace nsd {

/// A point of R^n. Every point exchanged with an oracle must have finite coordinates.
using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::string_view what, Eigen::Index expected, Eigen::Index got);
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

/// Raised by the evaluator when a gradient or value budget would be exceeded.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Oracle

/// First-order oracle of a locally Lipschitz function: f(x) and one element of the
/// Clarke generalized gradient at x (Euclidean representer). Implementations must be
/// pure and reentrant.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual int dimension() const = 0;
  virtual double value(const Point& x) const = 0;
  virtual Point subgradient(const Point& x) const = 0;
};

class FunctionOracle final : public Oracle {
 public:
  using ValueFn = std::function<double(const Point&)>;
  using SubgradientFn = std::function<Point(const Point&)>;

  FunctionOracle(int dimension, ValueFn value, SubgradientFn subgradient);

  int dimension() const override { return dimension_; }
  double value(const Point& x) const override { return value_(x); }
  Point subgradient(const Point& x) const override { return subgradient_(x); }

 private:
  int dimension_;
  ValueFn value_;
  SubgradientFn subgradient_;
};

/// Counting front-end to an oracle, owned by a single solve. Every call is checked for
/// dimension and finiteness; the gradient budget is enforced before the oracle is hit,
/// so the counter never exceeds it.
class Evaluator {
 public:
  explicit Evaluator(const Oracle& oracle,
                     std::int64_t max_gradient_evals = std::numeric_limits<std::int64_t>::max());

  double value(const Point& x);
  Point subgradient(const Point& x);

  std::int64_t gradient_evals() const { return gradient_evals_; }
  std::int64_t value_evals() const { return value_evals_; }
  int dimension() const { return oracle_->dimension(); }
  const Oracle& oracle() const { return *oracle_; }

 private:
  const Oracle* oracle_;
  std::int64_t max_gradient_evals_;
  std::int64_t gradient_evals_ = 0;
  std::int64_t value_evals_ = 0;
};

void require_finite(const Point& x, std::string_view what);

// ---------------------------------------------------------------------------
// Control functions

/// Null-step threshold T1: non-decreasing with T1(t) -> 0 as t -> 0.
struct T1Control {
  enum class Family { Linear, Sqrt };  // scale * t, scale * sqrt(t)
  Family family = Family::Linear;
  double scale = 1.0;

  static T1Control linear(double scale) { return {Family::Linear, scale}; }
  double operator()(double t) const;
};

/// Radius contraction T2: non-decreasing with iterates tending to 0.
struct T2Control {
  enum class Family { Geometric, Rational };  // factor * t, t / (1 + t)
  Family family = Family::Geometric;
  double factor = 0.35;

  static T2Control geometric(double factor) { return {Family::Geometric, factor}; }
  static T2Control rational() { return {Family::Rational, 1.0}; }
  double operator()(double t) const;
};

/// Fresh-radius rule G(|a_k|, eps_k). Each family carries the property it satisfies:
///   (a) G(x_k, y_k) -> 0 implies x_k -> 0,
///   (b) for every x0 > 0 there is y0 with G(x, y) >= y whenever x > x0, y < y0.
struct GControl {
  enum class Family {
    SecondArg,     // y                 (b)
    FirstArg,      // x                 (a)
    ScaledSecond,  // alpha * y, a >= 1 (b)
    MaxConst,      // max(alpha, y)     (a)
    MinConst,      // min(alpha, y)     (b)
    Constant,      // alpha             (a)
  };
  enum class Property { A, B };

  Family family = Family::SecondArg;
  double alpha = 1.0;

  static GControl second_arg() { return {Family::SecondArg, 1.0}; }
  static GControl first_arg() { return {Family::FirstArg, 1.0}; }
  Property property() const;
  double operator()(double x, double y) const;
};

struct Controls {
  T1Control t1;
  T2Control t2;
  GControl g;

  /// Fixed Euclidean norm defaults: G(x,y) = y, T1(x) = x / eps0, T2(x) = 0.35 x.
  static Controls variant_a(double eps0);
  /// Variable metric defaults: G(x,y) = x, T1(x) = 0.5 x, T2(x) = 0.35 x.
  static Controls variant_b();
};

/// Evaluates a control at positive arguments; DomainError otherwise.
double eval_control(const T1Control& c, double t);
double eval_control(const T2Control& c, double t);
double eval_control(const GControl& c, double x, double y);

// ---------------------------------------------------------------------------
// Parameters

enum class Variant { A, B };
enum class LineSearchPolicy { ArmijoExpand, FirstNonDecrease };
enum class BundlePolicy { KeepCuts, KeepMinNorms };

/// How a symmetric matrix returned by the metric provider defines the norm.
///   Gram:     |x|_k^2 = x^T M x, i.e. A_k = M^{1/2}
///   Operator: A_k = M
enum class MetricMode { Gram, Operator };

struct Params {
  double delta = 0.3;
  double delta_prime = 0.35;
  double eps0 = 1.0;
  int bundle_m = 10;
  BundlePolicy bundle_policy = BundlePolicy::KeepCuts;

  std::int64_t max_iterations = 1'000'000;
  std::int64_t max_gradient_evals = 10'000'000;
  int max_bisections = 60;
  int max_inner_steps = 500;

  double eps_tol = 1e-12;
  std::optional<double> f_target;
  double gap_tol = 1e-8;

  LineSearchPolicy line_search = LineSearchPolicy::ArmijoExpand;
  double sigma_growth = 2.0;
  int max_doublings = 50;
  /// Golden-section steps locating the first non-decrease point (first-non-decrease only).
  int line_search_refinements = 0;

  Variant variant = Variant::A;
  MetricMode metric_mode = MetricMode::Gram;
  /// Use G(|a_{k-1}|_{k-1}, eps_k) instead of G(|a_k|_k, eps_k) for k > 0.
  bool radius_from_previous_gradient = false;
  double minnorm_tol = 1e-12;
};

struct Config {
  Params params;
  Controls controls;
};

/// All violated constraints, empty when the configuration is admissible.
std::vector<std::string> check_params(const Params& params, const Controls& controls);

/// Throws InvalidConfig naming every violated constraint.
Config validate_params(const Params& params, const Controls& controls);

// ---------------------------------------------------------------------------
// Trace

enum class StepKind { NullStep, Descent };
enum class Status { ConvergedRadius, ConvergedTarget, BudgetExhausted, SegmentSearchFailed };

std::string_view to_string(StepKind kind);
std::string_view to_string(Status status);
std::string_view to_string(Variant variant);
std::string_view to_string(LineSearchPolicy policy);
std::string_view to_string(GControl::Family family);

std::optional<Variant> parse_variant(std::string_view s);
std::optional<LineSearchPolicy> parse_line_search(std::string_view s);
std::optional<GControl::Family> parse_g_family(std::string_view s);

/// One radius eps_{k,i} tried inside an outer iteration.
struct RadiusStep {
  double eps = 0.0;
  StepKind kind = StepKind::NullStep;
  double a_norm = 0.0;  // |a_{k,i}|_k
  int inner_steps = 0;
};

struct IterationRecord {
  std::int64_t k = 0;
  Point x;
  double f = 0.0;
  double eps_k = 0.0;
  std::vector<RadiusStep> radii;
  std::optional<double> sigma;
  std::int64_t grad_evals = 0;   // cumulative at the end of the iteration
  std::int64_t value_evals = 0;  // cumulative at the end of the iteration
  double max_probe_distance = 0.0;  // largest |y_j - x_k|_k over probed subgradient points
  double metric_condition = 1.0;
};

struct Trace {
  std::vector<IterationRecord> iterations;
  Status status = Status::BudgetExhausted;
  Point x;
  double f = 0.0;
  std::int64_t grad_evals = 0;
  std::int64_t value_evals = 0;
  std::string message;
};

}  // namespace nsd
