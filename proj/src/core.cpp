#include "nsd/core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace nsd {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

void require_positive(double t, std::string_view what) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError(std::string(what) + ": argument must be positive and finite");
  }
}

}  // namespace

InvalidConfig::InvalidConfig(std::vector<std::string> violations)
    : Error("invalid configuration: " + join(violations)), violations_(std::move(violations)) {}

DimensionMismatch::DimensionMismatch(std::string_view what, Eigen::Index expected, Eigen::Index got)
    : Error(std::string(what) + ": expected dimension " + std::to_string(expected) + ", got " +
            std::to_string(got)) {}

FunctionOracle::FunctionOracle(int dimension, ValueFn value, SubgradientFn subgradient)
    : dimension_(dimension), value_(std::move(value)), subgradient_(std::move(subgradient)) {
  if (dimension_ < 1) throw DomainError("oracle dimension must be >= 1");
}

void require_finite(const Point& x, std::string_view what) {
  if (!x.allFinite()) throw NonFiniteValue(std::string(what) + " has non-finite coordinates");
}

Evaluator::Evaluator(const Oracle& oracle, std::int64_t max_gradient_evals)
    : oracle_(&oracle), max_gradient_evals_(max_gradient_evals) {}

double Evaluator::value(const Point& x) {
  if (x.size() != oracle_->dimension()) throw DimensionMismatch("value", oracle_->dimension(), x.size());
  ++value_evals_;
  const double v = oracle_->value(x);
  if (!std::isfinite(v)) throw NonFiniteValue("oracle returned a non-finite value");
  return v;
}

Point Evaluator::subgradient(const Point& x) {
  if (x.size() != oracle_->dimension()) {
    throw DimensionMismatch("subgradient", oracle_->dimension(), x.size());
  }
  if (gradient_evals_ >= max_gradient_evals_) {
    throw BudgetExhausted("gradient budget of " + std::to_string(max_gradient_evals_) + " exhausted");
  }
  ++gradient_evals_;
  Point g = oracle_->subgradient(x);
  if (g.size() != oracle_->dimension()) {
    throw DimensionMismatch("oracle subgradient", oracle_->dimension(), g.size());
  }
  require_finite(g, "oracle subgradient");
  return g;
}

// ---------------------------------------------------------------------------

double T1Control::operator()(double t) const {
  switch (family) {
    case Family::Linear: return scale * t;
    case Family::Sqrt: return scale * std::sqrt(t);
  }
  return scale * t;
}

double T2Control::operator()(double t) const {
  switch (family) {
    case Family::Geometric: return factor * t;
    case Family::Rational: return t / (1.0 + t);
  }
  return factor * t;
}

GControl::Property GControl::property() const {
  switch (family) {
    case Family::FirstArg:
    case Family::MaxConst:
    case Family::Constant: return Property::A;
    case Family::SecondArg:
    case Family::ScaledSecond:
    case Family::MinConst: return Property::B;
  }
  return Property::B;
}

double GControl::operator()(double x, double y) const {
  switch (family) {
    case Family::SecondArg: return y;
    case Family::FirstArg: return x;
    case Family::ScaledSecond: return alpha * y;
    case Family::MaxConst: return std::max(alpha, y);
    case Family::MinConst: return std::min(alpha, y);
    case Family::Constant: return alpha;
  }
  return y;
}

Controls Controls::variant_a(double eps0) {
  return {T1Control::linear(1.0 / eps0), T2Control::geometric(0.35), GControl::second_arg()};
}

Controls Controls::variant_b() {
  return {T1Control::linear(0.5), T2Control::geometric(0.35), GControl::first_arg()};
}

double eval_control(const T1Control& c, double t) {
  require_positive(t, "T1");
  return c(t);
}

double eval_control(const T2Control& c, double t) {
  require_positive(t, "T2");
  return c(t);
}

double eval_control(const GControl& c, double x, double y) {
  require_positive(x, "G");
  require_positive(y, "G");
  return c(x, y);
}

// ---------------------------------------------------------------------------

std::vector<std::string> check_params(const Params& p, const Controls& c) {
  std::vector<std::string> v;
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };

  if (!(p.delta > 0.0 && p.delta < 1.0)) v.emplace_back("0 < delta < 1");
  if (!(p.delta_prime > 0.0 && p.delta_prime < 1.0)) v.emplace_back("0 < delta_prime < 1");
  if (!(p.delta < p.delta_prime)) v.emplace_back("delta < delta_prime");
  if (!positive(p.eps0)) v.emplace_back("eps0 > 0");
  if (!positive(p.eps_tol)) v.emplace_back("eps_tol > 0");
  if (!positive(p.gap_tol)) v.emplace_back("gap_tol > 0");
  if (p.f_target && !std::isfinite(*p.f_target)) v.emplace_back("f_target finite");
  if (p.bundle_m < 1) v.emplace_back("bundle_m >= 1");
  if (p.max_iterations < 1) v.emplace_back("max_iterations >= 1");
  if (p.max_gradient_evals < 1) v.emplace_back("max_gradient_evals >= 1");
  if (p.max_bisections < 1) v.emplace_back("max_bisections >= 1");
  if (p.max_inner_steps < 1) v.emplace_back("max_inner_steps >= 1");
  if (p.max_doublings < 0) v.emplace_back("max_doublings >= 0");
  if (p.line_search_refinements < 0) v.emplace_back("line_search_refinements >= 0");
  if (!(p.sigma_growth > 1.0) || !std::isfinite(p.sigma_growth)) v.emplace_back("sigma_growth > 1");
  if (!(p.minnorm_tol > 0.0)) v.emplace_back("minnorm_tol > 0");

  if (!positive(c.t1.scale)) v.emplace_back("t1 scale > 0");
  if (p.variant == Variant::B && c.t1.family == T1Control::Family::Linear && !(c.t1.scale < 1.0)) {
    v.emplace_back("variant B requires T1(x) < x");
  }
  if (c.t2.family == T2Control::Family::Geometric) {
    if (!(c.t2.factor > 0.0)) v.emplace_back("t2 factor > 0");
    if (!(c.t2.factor < 1.0)) v.emplace_back("t2 iterates must vanish");
  }
  switch (c.g.family) {
    case GControl::Family::ScaledSecond:
      if (!(c.g.alpha >= 1.0)) v.emplace_back("g alpha >= 1 for scaled-second family");
      break;
    case GControl::Family::MaxConst:
    case GControl::Family::MinConst:
    case GControl::Family::Constant:
      if (!positive(c.g.alpha)) v.emplace_back("g alpha > 0");
      break;
    default: break;
  }
  return v;
}

Config validate_params(const Params& params, const Controls& controls) {
  auto violations = check_params(params, controls);
  if (!violations.empty()) throw InvalidConfig(std::move(violations));
  return {params, controls};
}

// ---------------------------------------------------------------------------

std::string_view to_string(StepKind kind) {
  return kind == StepKind::NullStep ? "null" : "descent";
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::ConvergedRadius: return "converged-radius";
    case Status::ConvergedTarget: return "converged-target";
    case Status::BudgetExhausted: return "budget-exhausted";
    case Status::SegmentSearchFailed: return "segment-search-failed";
  }
  return "unknown";
}

std::string_view to_string(Variant variant) { return variant == Variant::A ? "A" : "B"; }

std::string_view to_string(LineSearchPolicy policy) {
  return policy == LineSearchPolicy::ArmijoExpand ? "armijo-expand" : "first-non-decrease";
}

std::string_view to_string(GControl::Family family) {
  switch (family) {
    case GControl::Family::SecondArg: return "second";
    case GControl::Family::FirstArg: return "first";
    case GControl::Family::ScaledSecond: return "scaled-second";
    case GControl::Family::MaxConst: return "max-const";
    case GControl::Family::MinConst: return "min-const";
    case GControl::Family::Constant: return "const";
  }
  return "second";
}

std::optional<Variant> parse_variant(std::string_view s) {
  if (s == "A" || s == "a") return Variant::A;
  if (s == "B" || s == "b") return Variant::B;
  return std::nullopt;
}

std::optional<LineSearchPolicy> parse_line_search(std::string_view s) {
  if (s == "armijo-expand") return LineSearchPolicy::ArmijoExpand;
  if (s == "first-non-decrease") return LineSearchPolicy::FirstNonDecrease;
  return std::nullopt;
}

std::optional<GControl::Family> parse_g_family(std::string_view s) {
  for (auto f : {GControl::Family::SecondArg, GControl::Family::FirstArg, GControl::Family::ScaledSecond,
                 GControl::Family::MaxConst, GControl::Family::MinConst, GControl::Family::Constant}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

}  // namespace nsd
