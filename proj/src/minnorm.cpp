#include "nsd/minnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>

namespace nsd {

namespace {

Matrix transformed_bundle(std::span<const Point> bundle, const Metric& metric) {
  if (bundle.empty()) throw EmptyBundle("bundle must contain at least one point");
  const int n = metric.dimension();
  Matrix z(n, static_cast<Eigen::Index>(bundle.size()));
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    if (bundle[i].size() != n) throw DimensionMismatch("bundle point", n, bundle[i].size());
    z.col(static_cast<Eigen::Index>(i)) = metric.apply(bundle[i]);
  }
  return z;
}

Point combine(std::span<const Point> bundle, const std::vector<double>& lambda) {
  Point a = Point::Zero(bundle.front().size());
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    if (lambda[i] != 0.0) a += lambda[i] * bundle[i];
  }
  return a;
}

// Affine minimizer of |sum mu_i z_i| subject to sum mu_i = 1 over the corral columns, as the
// least-squares problem z_0 + D nu ~ 0 with D = [z_i - z_0]. False when D is rank deficient,
// i.e. the columns are affinely dependent.
bool affine_minimizer(const Matrix& z, const std::vector<int>& corral, Eigen::VectorXd& mu) {
  const auto s = static_cast<Eigen::Index>(corral.size());
  mu.resize(s);
  if (s == 1) {
    mu(0) = 1.0;
    return true;
  }
  const Eigen::VectorXd z0 = z.col(corral.front());
  Matrix d(z.rows(), s - 1);
  for (Eigen::Index c = 1; c < s; ++c) d.col(c - 1) = z.col(corral[static_cast<std::size_t>(c)]) - z0;
  Eigen::ColPivHouseholderQR<Matrix> qr(d);
  qr.setThreshold(1e-12);
  if (qr.rank() < s - 1) return false;
  const Eigen::VectorXd nu = qr.solve(-z0);
  if (!nu.allFinite()) return false;
  mu(0) = 1.0 - nu.sum();
  mu.tail(s - 1) = nu;
  return true;
}

}  // namespace

SimplexSolution min_norm_point(std::span<const Point> bundle, const Metric& metric, double tol) {
  const Matrix z = transformed_bundle(bundle, metric);
  const auto k = static_cast<int>(bundle.size());

  Eigen::VectorXd norms2 = z.colwise().squaredNorm().transpose();
  const double scale = std::max(norms2.maxCoeff(), std::numeric_limits<double>::min());

  Eigen::Index start = 0;
  norms2.minCoeff(&start);
  std::vector<int> corral{static_cast<int>(start)};
  std::vector<double> lambda(static_cast<std::size_t>(k), 0.0);
  lambda[static_cast<std::size_t>(start)] = 1.0;
  Eigen::VectorXd x = z.col(start);

  auto recompute_x = [&] {
    x.setZero();
    for (int c : corral) x += lambda[static_cast<std::size_t>(c)] * z.col(c);
  };

  SimplexSolution out;
  const int max_major = 50 * k + 100;
  for (int major = 0; major < max_major; ++major) {
    out.iterations = major + 1;
    const double xx = x.squaredNorm();
    Eigen::VectorXd proj = z.transpose() * x;
    Eigen::Index j = 0;
    proj.minCoeff(&j);
    // gap <x, x - z_j> is at most |x| |x - z_j|, so measure it against |x| max |z_i|
    if (proj(j) >= xx - tol * std::sqrt(xx * scale)) break;
    if (std::find(corral.begin(), corral.end(), static_cast<int>(j)) != corral.end()) break;

    corral.push_back(static_cast<int>(j));
    lambda[static_cast<std::size_t>(j)] = 0.0;

    bool stalled = false;
    for (int minor = 0; minor <= k; ++minor) {
      Eigen::VectorXd mu;
      if (!affine_minimizer(z, corral, mu)) {
        // j is affinely dependent on the corral up to round-off: no further progress possible
        corral.pop_back();
        stalled = true;
        break;
      }
      const double eps_pos = 1e-14;
      if ((mu.array() > eps_pos).all()) {
        for (std::size_t c = 0; c < corral.size(); ++c) {
          lambda[static_cast<std::size_t>(corral[c])] = mu(static_cast<Eigen::Index>(c));
        }
        recompute_x();
        break;
      }
      // Move from lambda towards mu until the first weight hits zero, then drop it.
      double theta = 1.0;
      for (std::size_t c = 0; c < corral.size(); ++c) {
        const double lc = lambda[static_cast<std::size_t>(corral[c])];
        const double mc = mu(static_cast<Eigen::Index>(c));
        if (mc <= eps_pos && lc - mc > 0.0) theta = std::min(theta, lc / (lc - mc));
      }
      theta = std::clamp(theta, 0.0, 1.0);
      for (std::size_t c = 0; c < corral.size(); ++c) {
        auto& lc = lambda[static_cast<std::size_t>(corral[c])];
        lc = theta * mu(static_cast<Eigen::Index>(c)) + (1.0 - theta) * lc;
      }
      std::vector<int> kept;
      for (int c : corral) {
        if (lambda[static_cast<std::size_t>(c)] > eps_pos) {
          kept.push_back(c);
        } else {
          lambda[static_cast<std::size_t>(c)] = 0.0;
        }
      }
      if (kept.empty()) kept.push_back(static_cast<int>(j));
      corral = std::move(kept);
      double total = 0.0;
      for (int c : corral) total += lambda[static_cast<std::size_t>(c)];
      for (int c : corral) lambda[static_cast<std::size_t>(c)] /= total;
      recompute_x();
    }
    if (stalled) break;
  }

  out.lambda = std::move(lambda);
  out.point = combine(bundle, out.lambda);
  out.norm = metric.norm(out.point);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double lattice_size(int grid, int k) {
  // C(grid + k - 1, k - 1)
  double c = 1.0;
  for (int i = 1; i <= k - 1; ++i) c = c * (grid + i) / i;
  return c;
}

struct LatticeSearch {
  const Matrix& z;
  int k;
  int grid;
  std::vector<int> lo, hi;  // per-coordinate bounds on lattice counts
  std::vector<int> counts;
  std::vector<int> best;
  double best_value = std::numeric_limits<double>::infinity();

  void run() {
    counts.assign(static_cast<std::size_t>(k), 0);
    Eigen::VectorXd partial = Eigen::VectorXd::Zero(z.rows());
    recurse(0, grid, partial);
  }

  void recurse(int i, int remaining, Eigen::VectorXd& partial) {
    const auto iu = static_cast<std::size_t>(i);
    if (i == k - 1) {
      if (remaining < lo[iu] || remaining > hi[iu]) return;
      counts[iu] = remaining;
      Eigen::VectorXd x = partial + (static_cast<double>(remaining) / grid) * z.col(i);
      const double v = x.squaredNorm();
      if (v < best_value) {
        best_value = v;
        best = counts;
      }
      return;
    }
    const int top = std::min(hi[iu], remaining);
    for (int c = lo[iu]; c <= top; ++c) {
      counts[iu] = c;
      Eigen::VectorXd next = partial + (static_cast<double>(c) / grid) * z.col(i);
      recurse(i + 1, remaining - c, next);
    }
  }
};

std::vector<double> to_lambda(const std::vector<int>& counts, int grid) {
  std::vector<double> lambda(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) lambda[i] = static_cast<double>(counts[i]) / grid;
  return lambda;
}

}  // namespace

Point brute_force_min_norm(std::span<const Point> bundle, const Metric& metric, int grid) {
  if (bundle.size() > 5) throw BundleTooLarge("brute force enumeration supports at most 5 points");
  if (grid < 1) throw DomainError("grid must be positive");
  const Matrix z = transformed_bundle(bundle, metric);
  const auto k = static_cast<int>(bundle.size());
  if (k == 1) return bundle.front();

  constexpr double kFullLimit = 2e6;
  int g = grid;
  while (g > 1 && lattice_size(g, k) > kFullLimit) g = g * 3 / 4;

  LatticeSearch full{z, k, g, std::vector<int>(static_cast<std::size_t>(k), 0),
                     std::vector<int>(static_cast<std::size_t>(k), g), {}, {}};
  full.run();
  std::vector<double> lambda = to_lambda(full.best, g);

  // Window refinement: resolution grows by `factor`, window spans +-2 cells of the previous level.
  auto window_search = [&](int res, double half_width) {
    LatticeSearch w{z, k, res, {}, {}, {}, {}};
    for (int i = 0; i < k; ++i) {
      const double li = lambda[static_cast<std::size_t>(i)];
      w.lo.push_back(std::max(0, static_cast<int>(std::ceil((li - half_width) * res - 1e-9))));
      w.hi.push_back(std::min(res, static_cast<int>(std::floor((li + half_width) * res + 1e-9))));
    }
    w.run();
    if (!w.best.empty()) lambda = to_lambda(w.best, res);
    return w.best_value;
  };

  const int factor = 8;
  while (g < grid) {
    const int next = std::min(grid, g * factor);
    window_search(next, 2.0 / g);
    g = next;
  }
  if (lattice_size(grid, k) > kFullLimit) {
    double value = std::numeric_limits<double>::infinity();
    for (int pass = 0; pass < 20; ++pass) {
      const double v = window_search(grid, 3.0 / grid);
      if (!(v < value)) break;
      value = v;
    }
  }
  return combine(bundle, lambda);
}

}  // namespace nsd
