#pragma once

#include <Eigen/Cholesky>

#include "nsd/core.hpp"

namespace nsd {

class NotSymmetric : public Error {
 public:
  using Error::Error;
};

class SingularMetric : public Error {
 public:
  using Error::Error;
};

/// Variable norm |x|_k = |A x|_2 induced by a symmetric positive-definite A, with the
/// inner product <u, v>_k = <A u, A v>. A^{-1} and A^{-2} are applied through a Cholesky
/// factorization of A; no explicit inverse is formed.
class Metric {
 public:
  static Metric identity(int n);
  /// Throws NotSymmetric, or SingularMetric if A is not positive definite.
  static Metric from_matrix(const Matrix& a);

  int dimension() const { return n_; }
  bool is_identity() const { return identity_; }
  /// The operator A (materialized on demand for the identity).
  Matrix matrix() const;

  Point apply(const Point& x) const;
  double norm(const Point& x) const;
  double inner(const Point& u, const Point& v) const;
  /// a = A^{-2} g, so that inner(a, h) == <g, h> for every h.
  Point representer(const Point& g) const;

  double condition_number() const { return condition_; }
  /// Spectral norms |A| and |A^{-1}|.
  double operator_norm() const { return max_eig_; }
  double inverse_norm() const { return 1.0 / min_eig_; }

 private:
  Metric() = default;
  void check_dim(const Point& x, std::string_view what) const;

  int n_ = 0;
  bool identity_ = true;
  Matrix a_;
  Eigen::LLT<Matrix> llt_;
  double min_eig_ = 1.0;
  double max_eig_ = 1.0;
  double condition_ = 1.0;
};

inline double norm_k(const Metric& m, const Point& x) { return m.norm(x); }
inline double inner_k(const Metric& m, const Point& u, const Point& v) { return m.inner(u, v); }
inline Point representer(const Metric& m, const Point& g) { return m.representer(g); }

enum class SpdFallback { None, Identity };
/// Clamp maps eigenvalues lambda to max(lambda, floor), Reflect to max(|lambda|, floor).
enum class Curvature { Clamp, Reflect };

/// Clamps the eigenvalues of a symmetric candidate to at least `floor`. With the identity
/// fallback a candidate without any positive eigenvalue yields the identity instead.
Metric regularize_spd(const Matrix& candidate, double floor, SpdFallback fallback = SpdFallback::None,
                      Curvature rule = Curvature::Clamp);

/// Metric for a Hessian-like symmetric matrix, regularized with floor 1e-8 (1 + |H|_inf).
/// Gram mode builds A = |H|^{1/2} (so |x|_k^2 = x^T |H| x and the first trial step is the
/// Newton step), Operator mode uses the clamped A = H itself.
Metric metric_from_hessian(const Matrix& h, MetricMode mode);

bool is_symmetric(const Matrix& m, double rel_tol = 1e-12);

}  // namespace nsd
