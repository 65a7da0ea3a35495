#include "nsd/metric.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace nsd {

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Metric Metric::identity(int n) {
  if (n < 1) throw DomainError("metric dimension must be >= 1");
  Metric m;
  m.n_ = n;
  m.identity_ = true;
  return m;
}

Metric Metric::from_matrix(const Matrix& a) {
  if (a.rows() != a.cols()) throw NotSymmetric("metric matrix must be square");
  if (a.rows() < 1) throw DomainError("metric dimension must be >= 1");
  if (!a.allFinite()) throw NonFiniteValue("metric matrix has non-finite entries");
  if (!is_symmetric(a)) throw NotSymmetric("metric matrix is not symmetric");

  Metric m;
  m.n_ = static_cast<int>(a.rows());
  m.identity_ = false;
  m.a_ = 0.5 * (a + a.transpose());
  m.llt_.compute(m.a_);
  if (m.llt_.info() != Eigen::Success) throw SingularMetric("metric matrix is not positive definite");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(m.a_, Eigen::EigenvaluesOnly);
  m.min_eig_ = eig.eigenvalues().minCoeff();
  m.max_eig_ = eig.eigenvalues().maxCoeff();
  if (!(m.min_eig_ > 0.0)) throw SingularMetric("metric matrix is not positive definite");
  m.condition_ = m.max_eig_ / m.min_eig_;
  return m;
}

Matrix Metric::matrix() const {
  if (identity_) return Matrix::Identity(n_, n_);
  return a_;
}

void Metric::check_dim(const Point& x, std::string_view what) const {
  if (x.size() != n_) throw DimensionMismatch(what, n_, x.size());
}

Point Metric::apply(const Point& x) const {
  check_dim(x, "metric apply");
  if (identity_) return x;
  return a_ * x;
}

double Metric::norm(const Point& x) const {
  check_dim(x, "norm_k");
  if (identity_) return x.norm();
  return (a_ * x).norm();
}

double Metric::inner(const Point& u, const Point& v) const {
  check_dim(u, "inner_k");
  check_dim(v, "inner_k");
  if (identity_) return u.dot(v);
  return (a_ * u).dot(a_ * v);
}

Point Metric::representer(const Point& g) const {
  check_dim(g, "representer");
  if (identity_) return g;
  Point r = llt_.solve(llt_.solve(g));
  if (!r.allFinite()) throw SingularMetric("representer is not finite");
  return r;
}

Metric regularize_spd(const Matrix& candidate, double floor, SpdFallback fallback, Curvature rule) {
  if (!(floor > 0.0)) throw DomainError("regularization floor must be positive");
  if (candidate.rows() != candidate.cols()) throw NotSymmetric("candidate must be square");
  if (!candidate.allFinite()) throw NonFiniteValue("candidate has non-finite entries");
  if (!is_symmetric(candidate)) throw NotSymmetric("candidate is not symmetric");

  const auto n = static_cast<int>(candidate.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (candidate + candidate.transpose()));
  Eigen::VectorXd lambda = eig.eigenvalues();
  if (fallback == SpdFallback::Identity && lambda.maxCoeff() <= 0.0) return Metric::identity(n);

  if (lambda.minCoeff() >= floor) return Metric::from_matrix(candidate);
  if (rule == Curvature::Reflect) lambda = lambda.cwiseAbs();
  lambda = lambda.cwiseMax(floor);
  const Matrix& v = eig.eigenvectors();
  Matrix clamped = v * lambda.asDiagonal() * v.transpose();
  clamped = 0.5 * (clamped + clamped.transpose());
  return Metric::from_matrix(clamped);
}

Metric metric_from_hessian(const Matrix& h, MetricMode mode) {
  if (h.rows() != h.cols()) throw NotSymmetric("Hessian must be square");
  const double inf_norm = h.cwiseAbs().rowwise().sum().maxCoeff();
  const double floor = 1e-8 * (1.0 + inf_norm);
  if (mode == MetricMode::Operator) return regularize_spd(h, floor, SpdFallback::Identity);

  if (!is_symmetric(h)) throw NotSymmetric("Hessian is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (h + h.transpose()));
  Eigen::VectorXd lambda = eig.eigenvalues();
  if (lambda.maxCoeff() <= 0.0) return Metric::identity(static_cast<int>(h.rows()));
  // negative curvature is mirrored: clamping it to the floor makes the Newton step explode
  lambda = lambda.cwiseAbs().cwiseMax(floor).cwiseSqrt();
  const Matrix& v = eig.eigenvectors();
  Matrix root = v * lambda.asDiagonal() * v.transpose();
  return Metric::from_matrix(0.5 * (root + root.transpose()));
}

}  // namespace nsd
