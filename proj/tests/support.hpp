#pragma once

#include <atomic>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nsd/core.hpp"
#include "nsd/metric.hpp"
#include "nsd/observer.hpp"

namespace nsd::test {

/// Forwards to an oracle and counts every call independently of the solver's Evaluator.
class CountingOracle final : public Oracle {
 public:
  explicit CountingOracle(const Oracle& inner) : inner_(&inner) {}
  int dimension() const override { return inner_->dimension(); }
  double value(const Point& x) const override {
    ++values_;
    return inner_->value(x);
  }
  Point subgradient(const Point& x) const override {
    ++subgradients_;
    return inner_->subgradient(x);
  }
  std::int64_t subgradients() const { return subgradients_; }
  std::int64_t values() const { return values_; }

 private:
  const Oracle* inner_;
  mutable std::atomic<std::int64_t> values_{0};
  mutable std::atomic<std::int64_t> subgradients_{0};
};

/// f(x) = |x|^2 in n dimensions.
inline std::shared_ptr<Oracle> squared_norm(int n) {
  return std::make_shared<FunctionOracle>(
      n, [](const Point& x) { return x.squaredNorm(); }, [](const Point& x) -> Point { return 2.0 * x; });
}

/// f(x) = |x_1| + ... + |x_n| with sign(0) := +1.
inline std::shared_ptr<Oracle> l1_norm(int n) {
  return std::make_shared<FunctionOracle>(
      n, [](const Point& x) { return x.cwiseAbs().sum(); },
      [](const Point& x) -> Point { return x.unaryExpr([](double t) { return t >= 0.0 ? 1.0 : -1.0; }); });
}

/// Exact min-norm point of conv(bundle) in |.|_k: enumerates every support set S, solves the
/// affine-hull problem on S through its KKT system and keeps the best feasible candidate.
inline Point exact_min_norm(std::span<const Point> bundle, const Metric& metric) {
  const int q = static_cast<int>(bundle.size());
  std::vector<Point> z;
  for (const auto& p : bundle) z.push_back(metric.apply(p));
  Point best;
  double best_norm = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << q); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < q; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const int s = static_cast<int>(idx.size());
    Matrix kkt = Matrix::Zero(s + 1, s + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
    for (int r = 0; r < s; ++r) {
      for (int c = 0; c < s; ++c) kkt(r, c) = z[idx[r]].dot(z[idx[c]]);
      kkt(r, s) = 1.0;
      kkt(s, r) = 1.0;
    }
    rhs(s) = 1.0;
    Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    if (!sol.allFinite() || std::abs(sol.head(s).sum() - 1.0) > 1e-9) continue;
    if (sol.head(s).minCoeff() < -1e-12) continue;
    Point p = Point::Zero(bundle[0].size());
    for (int r = 0; r < s; ++r) p += sol(r) * bundle[idx[r]];
    const double nrm = metric.norm(p);
    if (nrm < best_norm) {
      best_norm = nrm;
      best = p;
    }
  }
  return best;
}

inline double rel_close(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

/// Checks every per-event certificate of a running solve and records violations.
class InvariantAuditor : public SolveObserver {
 public:
  /// `oracle` is used to recompute function values independently; may be null.
  explicit InvariantAuditor(const Oracle* oracle = nullptr) : oracle_(oracle) {}

  void on_bisection(const BisectionEvent& e) override {
    ++bisections;
    const double len = e.metric.norm(e.right - e.left);
    const double expected = std::ldexp(e.eps, 1 - e.level);
    // endpoints carry the rounding of coordinates of size |x|
    const double slack = 1e-9 * expected + 16.0 * DBL_EPSILON * e.metric.operator_norm() * (e.x.norm() + 2.0 * e.eps);
    if (std::abs(len - expected) > slack) fail("halving", e.level, len, expected);
    double fl = e.f_left, fr = e.f_right;
    if (oracle_) {
      fl = oracle_->value(e.left);
      fr = oracle_->value(e.right);
    }
    const double rhs = -e.delta * e.a_norm * len;
    if (!(fr - fl > rhs - 1e-13 * (1.0 + std::abs(fl)))) fail("E-IS-6", e.level, fr - fl, rhs);
  }

  void on_inner_step(const InnerStepEvent& e) override {
    ++inner_steps;
    const double an = e.metric.norm(e.a);
    const double bn = e.metric.norm(e.b);
    const double nn = e.metric.norm(e.a_next);
    if (e.metric.inner(e.a, e.b) > e.delta_prime * an * an * (1.0 + 1e-12) + 1e-300) fail("cut", e.j, e.metric.inner(e.a, e.b), an);
    const double gamma = e.delta_prime;
    const double l = std::max(an, bn) + 1e-12;
    const double bound = l * l * an * an / ((1.0 - gamma) * (1.0 - gamma) * an * an + l * l) + 1e-10;
    if (nn * nn > bound) fail("contraction", e.j, nn * nn, bound);
    if (nn > an * (1.0 + 1e-12)) fail("monotone", e.j, nn, an);
  }

  void on_direction(const DirectionEvent& e) override {
    if (e.kind == StepKind::NullStep) {
      ++null_steps;
      if (!(e.a_norm < e.t1)) fail("null-step", 0, e.a_norm, e.t1);
    } else {
      ++descents;
      if (oracle_) {
        const Point h = e.a / e.a_norm;
        const double ft = oracle_->value(e.x - e.eps * h);
        if (!(ft - e.f_x <= -e.delta * e.a_norm * e.eps)) fail("descent", 0, ft - e.f_x, -e.delta * e.a_norm * e.eps);
      }
    }
  }

  void on_step(const StepEvent& e) override {
    ++steps;
    if (!(e.f_after < e.f_before)) fail("strict-descent", 0, e.f_after, e.f_before);
    double fa = e.f_after;
    if (oracle_) fa = oracle_->value(e.x - e.sigma * e.h);
    if (!(fa - e.f_before <= -e.delta * e.a_norm * e.sigma)) fail("armijo", 0, fa - e.f_before, -e.delta * e.a_norm * e.sigma);
    if (!(e.sigma >= e.eps)) fail("sigma", 0, e.sigma, e.eps);
  }

  bool clean() const { return violations.empty(); }
  std::string report() const {
    std::ostringstream os;
    for (const auto& v : violations) os << v << "\n";
    return os.str();
  }

  std::int64_t bisections = 0, inner_steps = 0, null_steps = 0, descents = 0, steps = 0;
  std::vector<std::string> violations;

 private:
  void fail(const char* what, int at, double got, double bound) {
    if (violations.size() < 20) {
      std::ostringstream os;
      os.precision(17);
      os << what << " @" << at << ": " << got << " vs " << bound;
      violations.push_back(os.str());
    }
  }
  const Oracle* oracle_;
};

inline Point random_point(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Point p(n);
  for (int i = 0; i < n; ++i) p(i) = d(rng);
  return p;
}

}  // namespace nsd::test
