#include "nsd/benchmarks.hpp"

#include <array>
#include <cmath>

namespace nsd::bench {

namespace {

double sign(double t) { return t >= 0.0 ? 1.0 : -1.0; }

std::shared_ptr<const Oracle> make_oracle(int n, FunctionOracle::ValueFn f, FunctionOracle::SubgradientFn g) {
  return std::make_shared<FunctionOracle>(n, std::move(f), std::move(g));
}

}  // namespace

const Point& Benchmark::start(const std::string& label) const {
  for (const auto& s : starts) {
    if (s.label == label) return s.x;
  }
  throw UnknownStart("benchmark " + name + " has no start '" + label + "'");
}

Params Benchmark::params(Variant variant) const {
  Params p;
  p.variant = variant;
  p.eps0 = config.eps0;
  p.line_search = config.line_search;
  p.line_search_refinements = config.line_search_refinements;
  p.f_target = config.f_target;
  p.gap_tol = config.gap_tol;
  p.max_gradient_evals = config.max_gradient_evals;
  return p;
}

Controls Benchmark::controls(Variant variant, std::optional<double> eps0) const {
  const double e0 = eps0.value_or(config.eps0);
  Controls c = variant == Variant::A ? Controls::variant_a(e0) : Controls::variant_b();
  if (variant == Variant::A && config.t1_factor) c.t1 = T1Control::linear(*config.t1_factor / e0);
  if (config.t2_factor) c.t2 = T2Control::geometric(*config.t2_factor);
  return c;
}

// ---------------------------------------------------------------------------

Benchmark make_wolfe() {
  auto value = [](const Point& p) {
    const double x = p(0), y = p(1);
    if (x <= 0.0) return 9.0 * x + 16.0 * std::abs(y) - std::pow(x, 9);
    if (x < std::abs(y)) return 9.0 * x + 16.0 * std::abs(y);
    return 5.0 * std::sqrt(9.0 * x * x + 16.0 * y * y);
  };
  auto subgradient = [](const Point& p) {
    const double x = p(0), y = p(1);
    Point g(2);
    if (x <= 0.0) {
      g << 9.0 - 9.0 * std::pow(x, 8), 16.0 * sign(y);
    } else if (x < std::abs(y)) {
      g << 9.0, 16.0 * sign(y);
    } else {
      const double r = std::sqrt(9.0 * x * x + 16.0 * y * y);
      g << 45.0 * x / r, 80.0 * y / r;
    }
    return g;
  };

  Benchmark b;
  b.name = "wolfe";
  b.dimension = 2;
  b.oracle = make_oracle(2, value, subgradient);
  b.starts = {{"default", Point{{5.0, 4.0}}}};
  b.config.eps0 = 0.9;
  b.config.f_target = -8.0;
  b.config.gap_tol = 1e-8;
  b.config.max_gradient_evals = 1000;
  b.optimum = KnownOptimum{Point{{-1.0, 0.0}}, -8.0};
  b.reference_rows = {{"A", 16, 28, 2.9e-12}};
  return b;
}

Benchmark make_qmax(int n) {
  if (n < 1) throw InvalidDimension("q-max needs n >= 1");
  auto value = [](const Point& x) { return x.cwiseAbs2().maxCoeff(); };
  auto subgradient = [](const Point& x) {
    Eigen::Index i = 0;
    x.cwiseAbs2().maxCoeff(&i);  // first index attaining the max
    Point g = Point::Zero(x.size());
    g(i) = 2.0 * x(i);
    return g;
  };

  Benchmark b;
  b.name = "qmax";
  b.dimension = n;
  b.oracle = make_oracle(n, value, subgradient);
  Point u_plus = Point::LinSpaced(n, 1.0, static_cast<double>(n));
  b.starts = {{"u+", u_plus}, {"v", 0.1 * u_plus}};
  if (n % 2 == 0) {
    Point u_pm = u_plus;
    for (int i = n / 2; i < n; ++i) u_pm(i) = -u_pm(i);
    b.starts.push_back({"u+-", u_pm});
  }
  b.config.eps0 = 0.5;
  b.config.t1_factor = 15.0;
  b.config.line_search = LineSearchPolicy::FirstNonDecrease;
  b.config.line_search_refinements = 50;
  b.config.f_target = 0.0;
  b.config.gap_tol = 1e-9;
  b.config.max_gradient_evals = 5000;
  b.optimum = KnownOptimum{Point::Zero(n), 0.0};
  if (n == 20) {
    b.reference_rows = {{"u+", 142, 246, 1.4e-10}, {"v", 142, 246, 1.4e-12}};
  } else if (n == 50) {
    b.reference_rows = {{"u+", 126, 311, 9.6e-6}, {"v", 126, 311, 9.6e-8}};
  }
  return b;
}

Benchmark make_rosenbrock() {
  auto value = [](const Point& p) {
    const double x = p(0), y = p(1);
    return (1.0 - x) * (1.0 - x) + 100.0 * (y - x * x) * (y - x * x);
  };
  auto gradient = [](const Point& p) {
    const double x = p(0), y = p(1);
    return Point{{-2.0 * (1.0 - x) - 400.0 * x * (y - x * x), 200.0 * (y - x * x)}};
  };

  Benchmark b;
  b.name = "rosenbrock";
  b.dimension = 2;
  b.oracle = make_oracle(2, value, gradient);
  b.starts = {{"default", Point{{-1.9, 2.0}}}};
  b.config.eps0 = 1.5;
  b.config.f_target = 0.0;
  b.config.gap_tol = 2e-6;
  b.config.max_gradient_evals = 2000;
  b.optimum = KnownOptimum{Point{{1.0, 1.0}}, 0.0};
  b.reference_rows = {{"A", 14, 29, 1.74e-6}, {"A", 19, 37, 2.25e-9}, {"A", 29, 55, 1.26e-18}, {"B", 12, 20, 0.0}};
  b.hessian = [](const Point& p) {
    const double x = p(0), y = p(1);
    Matrix h(2, 2);
    h << 2.0 - 400.0 * (y - x * x) + 800.0 * x * x, -400.0 * x, -400.0 * x, 200.0;
    return h;
  };
  return b;
}

Benchmark make_hilbert(int n) {
  if (n < 1) throw InvalidDimension("Hilbert function needs n >= 1");
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = 1.0 / (i + j + 1);
  }
  auto value = [a](const Point& x) { return x.dot(a * x); };
  auto gradient = [a](const Point& x) -> Point { return 2.0 * (a * x); };

  Benchmark b;
  b.name = "hilbert";
  b.dimension = n;
  b.oracle = make_oracle(n, value, gradient);
  Point x0(n);
  for (int i = 0; i < n; ++i) x0(i) = 4.0 / (i + 1);
  b.starts = {{"default", x0}};
  b.config.eps0 = std::sqrt(static_cast<double>(n));
  b.config.f_target = 0.0;
  b.config.gap_tol = 1e-9;
  b.config.max_gradient_evals = 5000;
  b.optimum = KnownOptimum{Point::Zero(n), 0.0};
  if (n == 10) b.reference_rows = {{"A", 40, 58, 7.0e-10}, {"A", 100, 123, 4.6e-13}};
  if (n == 40) b.reference_rows = {{"A", 40, 69, 2.2e-10}, {"A", 100, 176, 3.3e-14}};
  if (n == 80) b.reference_rows = {{"A", 40, 77, 3.8e-10}, {"A", 100, 194, 3.0e-14}};
  b.hessian = [a](const Point&) -> Matrix { return 2.0 * a; };
  return b;
}

Benchmark make_nesterov(NesterovKind kind, int n) {
  if (n < 2) throw InvalidDimension("Nesterov functions need n >= 2");
  Benchmark b;
  b.dimension = n;

  switch (kind) {
    case NesterovKind::Smooth: {
      b.name = "nesterov_smooth";
      auto value = [](const Point& x) {
        double f = 0.25 * (x(0) - 1.0) * (x(0) - 1.0);
        for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
          const double r = x(i + 1) - 2.0 * x(i) * x(i) + 1.0;
          f += r * r;
        }
        return f;
      };
      auto gradient = [](const Point& x) {
        Point g = Point::Zero(x.size());
        g(0) = 0.5 * (x(0) - 1.0);
        for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
          const double r = x(i + 1) - 2.0 * x(i) * x(i) + 1.0;
          g(i + 1) += 2.0 * r;
          g(i) += -8.0 * r * x(i);
        }
        return g;
      };
      b.oracle = make_oracle(n, value, gradient);
      b.hessian = [](const Point& x) {
        const auto m = x.size();
        Matrix h = Matrix::Zero(m, m);
        h(0, 0) = 0.5;
        for (Eigen::Index i = 0; i + 1 < m; ++i) {
          const double r = x(i + 1) - 2.0 * x(i) * x(i) + 1.0;
          // r^2 has Hessian 2 grad(r) grad(r)^T + 2 r Hess(r), grad(r) = e_{i+1} - 4 x_i e_i
          const double gi = -4.0 * x(i);
          h(i, i) += 2.0 * gi * gi - 8.0 * r;
          h(i, i + 1) += 2.0 * gi;
          h(i + 1, i) += 2.0 * gi;
          h(i + 1, i + 1) += 2.0;
        }
        return h;
      };
      Point perturbed = Point::Ones(n);
      perturbed(0) = -1.05;
      Point hat = Point::Ones(n);
      hat(0) = -1.0;
      b.starts = {{"default", perturbed}, {"hat", hat}};
      b.config.t1_factor = 0.001;
      b.config.gap_tol = 1e-15;
      b.config.max_gradient_evals = 2'000'000;
      if (n == 8) b.reference_rows = {{"A", 16683, 124040, 4e-26}, {"B", 4109, 4779, 0.0}};
      if (n == 10) b.reference_rows = {{"A", 223639, 1773929, 6.4e-16}, {"B", 31600, 37305, 9.9e-16}};
      break;
    }
    case NesterovKind::Nonsmooth: {
      b.name = "nesterov_nonsmooth";
      auto value = [](const Point& x) {
        double f = 0.25 * (x(0) - 1.0) * (x(0) - 1.0);
        for (Eigen::Index i = 0; i + 1 < x.size(); ++i) f += std::abs(x(i + 1) - 2.0 * x(i) * x(i) + 1.0);
        return f;
      };
      auto subgradient = [](const Point& x) {
        Point g = Point::Zero(x.size());
        g(0) = 0.5 * (x(0) - 1.0);
        for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
          const double s = sign(x(i + 1) - 2.0 * x(i) * x(i) + 1.0);
          g(i + 1) += s;
          g(i) += -4.0 * s * x(i);
        }
        return g;
      };
      b.oracle = make_oracle(n, value, subgradient);
      Point hat = Point::Ones(n);
      hat(0) = -1.0;
      b.starts = {{"default", hat}};
      b.config.gap_tol = 1e-8;
      b.config.max_gradient_evals = 2'000'000;
      if (n == 3) b.reference_rows = {{"A", 4365, 13691, 2.6e-15}};
      if (n == 4) b.reference_rows = {{"A", 25766, 106714, 3.8e-10}};
      if (n == 5) b.reference_rows = {{"A", 219886, 1124623, 1.0e-8}};
      break;
    }
    case NesterovKind::AbsVariant: {
      b.name = "nesterov_abs";
      auto value = [](const Point& x) {
        double f = 0.25 * std::abs(x(0) - 1.0);
        for (Eigen::Index i = 0; i + 1 < x.size(); ++i) f += std::abs(x(i + 1) - 2.0 * std::abs(x(i)) + 1.0);
        return f;
      };
      auto subgradient = [](const Point& x) {
        Point g = Point::Zero(x.size());
        g(0) = 0.25 * sign(x(0) - 1.0);
        for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
          const double s = sign(x(i + 1) - 2.0 * std::abs(x(i)) + 1.0);
          g(i + 1) += s;
          g(i) += -2.0 * s * sign(x(i));
        }
        return g;
      };
      b.oracle = make_oracle(n, value, subgradient);
      Point hat = Point::Ones(n);
      hat(0) = -1.0;
      b.starts = {{"default", hat}};
      b.config.f_target.reset();
      b.config.max_gradient_evals = 200'000;
      break;
    }
  }
  b.config.eps0 = 0.5;
  if (kind != NesterovKind::AbsVariant) b.config.f_target = 0.0;
  b.optimum = KnownOptimum{Point::Ones(n), 0.0};
  return b;
}

const std::vector<double>& cheb_grid() {
  static const std::vector<double> grid = [] {
    constexpr int kN = 2000;
    std::vector<double> t(kN + 1);
    for (int i = 0; i <= kN; ++i) t[static_cast<std::size_t>(i)] = 1.0 + 9.0 * i / kN;
    return t;
  }();
  return grid;
}

namespace {

// Published minimal values of the discretized problem, index m - 1.
constexpr std::array<double, 7> kChebStartValues{8.55641e-2, 8.75226e-3, 7.14509e-4, 5.57688e-5,
                                                 4.24248e-6, 3.17295e-7, 8.56e-7};
constexpr std::array<double, 7> kChebFunctionValues{8.55641e-2, 8.75226e-3, 7.14509e-4, 5.57688e-5,
                                                    4.24249e-6, 3.17285e-7, 3.17570e-7};
constexpr std::array<std::array<std::int64_t, 2>, 7> kChebStartCounts{
    {{10, 21}, {44, 124}, {95, 431}, {406, 2547}, {2757, 22075}, {14276, 140700}, {17961, 180065}}};
constexpr std::array<std::array<std::int64_t, 2>, 7> kChebFunctionCounts{
    {{14, 32}, {36, 118}, {90, 442}, {381, 2512}, {2766, 24066}, {117329, 2529382}, {6114, 62298}}};

}  // namespace

Benchmark make_cheb_exp(int m, ChebMode mode) {
  if (m < 1) throw InvalidDimension("Chebyshev exponential sums need m >= 1");
  const int n = 2 * m;
  const bool scaled = mode == ChebMode::PerturbedFunction;

  // residual h_i(a, b) = 1/t_i - sum_j a_j exp(-c_j b_j t_i), c_j = j (perturbed function) or 1
  auto residual = [m, scaled](const Point& x, double t) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
      const double c = scaled ? j + 1.0 : 1.0;
      s += x(j) * std::exp(-c * x(m + j) * t);
    }
    return 1.0 / t - s;
  };
  auto value = [residual](const Point& x) {
    double best = 0.0;
    for (double t : cheb_grid()) best = std::max(best, std::abs(residual(x, t)));
    return best;
  };
  auto subgradient = [m, scaled, residual](const Point& x) {
    double best = -1.0;
    double best_t = 1.0;
    double best_sign = 1.0;
    for (double t : cheb_grid()) {
      const double h = residual(x, t);
      const double v = std::max(h, -h);
      if (v > best) {
        best = v;
        best_t = t;
        best_sign = h >= -h ? 1.0 : -1.0;
      }
    }
    Point g(2 * m);
    for (int j = 0; j < m; ++j) {
      const double c = scaled ? j + 1.0 : 1.0;
      const double e = std::exp(-c * x(m + j) * best_t);
      g(j) = -best_sign * e;
      g(m + j) = best_sign * x(j) * c * best_t * e;
    }
    return g;
  };

  Benchmark b;
  b.name = scaled ? "cheb_exp_fn" : "cheb_exp";
  b.dimension = n;
  b.oracle = make_oracle(n, value, subgradient);
  if (scaled) {
    b.starts = {{"default", Point::Zero(n)}};
  } else {
    Point x0(n);
    for (int j = 0; j < m; ++j) {
      x0(j) = -0.001 * (2.0 * j) * (2.0 * j);
      x0(m + j) = 0.001 * (2.0 * j + 1.0) * (2.0 * j + 1.0);
    }
    b.starts = {{"default", x0}, {"zero", Point::Zero(n)}};
  }
  b.config.eps0 = 5.0 * std::sqrt(static_cast<double>(m));
  b.config.t2_factor = 0.1;
  b.config.max_gradient_evals = 1000 * m * m;
  if (m <= 7) {
    const auto idx = static_cast<std::size_t>(m - 1);
    const double v = scaled ? kChebFunctionValues[idx] : kChebStartValues[idx];
    const auto& counts = scaled ? kChebFunctionCounts[idx] : kChebStartCounts[idx];
    b.optimum = KnownOptimum{std::nullopt, v};
    b.reference_rows = {{"A", counts[0], counts[1], v}};
  }
  return b;
}

namespace {
constexpr std::array<double, 10> kEta{1.0, 1.1, 1.2, 1.35, 1.55, 1.75, 2.5, 3.0, 3.7, 4.5};
}

Benchmark make_regression() {
  auto value = [](const Point& x) {
    double f = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double r = x(0) * std::exp(i * x(1)) + x(2) - kEta[static_cast<std::size_t>(i - 1)];
      f += r * r;
    }
    return f;
  };
  auto gradient = [](const Point& x) {
    Point g = Point::Zero(3);
    for (int i = 1; i <= 10; ++i) {
      const double e = std::exp(i * x(1));
      const double r = x(0) * e + x(2) - kEta[static_cast<std::size_t>(i - 1)];
      g(0) += 2.0 * r * e;
      g(1) += 2.0 * r * x(0) * i * e;
      g(2) += 2.0 * r;
    }
    return g;
  };

  Benchmark b;
  b.name = "regression";
  b.dimension = 3;
  b.oracle = make_oracle(3, value, gradient);
  b.starts = {{"zero", Point::Zero(3)}, {"ones", Point::Ones(3)}};
  b.config.eps0 = 0.5;
  b.config.max_gradient_evals = 2000;
  b.optimum = KnownOptimum{Point{{0.270, 0.269, 0.592}}, 0.0861942};
  b.reference_rows = {{"A zero", 56, 130, 0.0861942},
                      {"A ones", 42, 102, 0.0861942},
                      {"B zero", 70, 194, 0.0861942},
                      {"B ones", 49, 137, 0.0861942}};
  b.hessian = [](const Point& x) {
    Matrix h = Matrix::Zero(3, 3);
    for (int i = 1; i <= 10; ++i) {
      const double e = std::exp(i * x(1));
      const double r = x(0) * e + x(2) - kEta[static_cast<std::size_t>(i - 1)];
      const Eigen::Vector3d dr(e, x(0) * i * e, 1.0);
      h += 2.0 * dr * dr.transpose();
      // second derivatives of r: d2/dx0dx1 = i e, d2/dx1^2 = x0 i^2 e
      h(0, 1) += 2.0 * r * i * e;
      h(1, 0) += 2.0 * r * i * e;
      h(1, 1) += 2.0 * r * x(0) * i * i * e;
    }
    return h;
  };
  return b;
}

// ---------------------------------------------------------------------------

std::vector<std::string> registry_names() {
  return {"wolfe",        "qmax",     "rosenbrock",  "hilbert",   "nesterov_smooth",
          "nesterov_nonsmooth", "nesterov_abs", "cheb_exp", "cheb_exp_fn", "regression"};
}

std::optional<Benchmark> make_by_name(const std::string& name, std::optional<int> n) {
  if (name == "wolfe") return make_wolfe();
  if (name == "rosenbrock") return make_rosenbrock();
  if (name == "regression") return make_regression();
  if (name == "qmax") return make_qmax(n.value_or(20));
  if (name == "hilbert") return make_hilbert(n.value_or(10));
  if (name == "nesterov_smooth") return make_nesterov(NesterovKind::Smooth, n.value_or(3));
  if (name == "nesterov_nonsmooth") return make_nesterov(NesterovKind::Nonsmooth, n.value_or(3));
  if (name == "nesterov_abs") return make_nesterov(NesterovKind::AbsVariant, n.value_or(2));
  if (name == "cheb_exp" || name == "cheb_exp_fn") {
    const int dim = n.value_or(2);
    if (dim < 2 || dim % 2 != 0) throw InvalidDimension("Chebyshev exponential sums need an even n >= 2");
    return make_cheb_exp(dim / 2, name == "cheb_exp" ? ChebMode::PerturbedStart : ChebMode::PerturbedFunction);
  }
  return std::nullopt;
}

}  // namespace nsd::bench
