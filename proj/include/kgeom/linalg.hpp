#ifndef KGEOM_LINALG_HPP
#define KGEOM_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "kgeom/config.hpp"

namespace kgeom {

/// Determinant by LU with partial pivoting, accumulated in long double.
inline double lu_determinant(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw DimensionMismatch("determinant of a non-square matrix");
  if (n == 0) return 1.0;
  std::vector<long double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  long double det = 1.0L;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(a[r * n + c]) > std::fabs(a[piv * n + c])) piv = r;
    if (a[piv * n + c] == 0.0L) return 0.0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
      det = -det;
    }
    const long double d = a[c * n + c];
    det *= d;
    for (int r = c + 1; r < n; ++r) {
      const long double f = a[r * n + c] / d;
      if (f == 0.0L) continue;
      for (int j = c + 1; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
    }
  }
  return static_cast<double>(det);
}

/// Numerical rank from singular values relative to the largest one.
inline int numerical_rank(const Mat& m, double rel_tol, double abs_tol = 1e-14) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= abs_tol) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0) && s(i) > abs_tol) ++r;
  return r;
}

/// Columns of `basis` stacked as a matrix.
inline Mat columns(const std::vector<Vec>& vs, Eigen::Index rows) {
  Mat out(rows, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) {
    if (vs[j].size() != rows) throw DimensionMismatch("vector length differs from ambient dimension");
    out.col(static_cast<Eigen::Index>(j)) = vs[j];
  }
  return out;
}

/// Orthonormal basis (columns) of the Euclidean orthogonal complement of
/// span(cols of b).  `b` must have full column rank.  Built by Gram-Schmidt on
/// the projected unit vectors in index order, so a coordinate subspace leaves
/// the remaining unit vectors in their natural order.
inline Mat orthogonal_complement(const Mat& b) {
  const Eigen::Index n = b.rows();
  if (b.cols() == 0) return Mat::Identity(n, n);
  Eigen::HouseholderQR<Mat> qr(b);
  const Mat range = (qr.householderQ() * Mat::Identity(n, n)).leftCols(b.cols());
  Mat out(n, n - b.cols());
  Eigen::Index found = 0;
  for (Eigen::Index i = 0; i < n && found < out.cols(); ++i) {
    Vec v = Vec::Unit(n, i);
    for (int pass = 0; pass < 2; ++pass) {
      v -= range * (range.transpose() * v);
      if (found > 0) v -= out.leftCols(found) * (out.leftCols(found).transpose() * v);
    }
    const double nv = v.norm();
    if (nv < 1e-3) continue;
    out.col(found++) = v / nv;
  }
  if (found < out.cols()) return (qr.householderQ() * Mat::Identity(n, n)).rightCols(n - b.cols());
  return out;
}

/// Orthonormal basis of span(cols of b).
inline Mat orthonormal_range(const Mat& b) {
  const Eigen::Index n = b.rows();
  Eigen::HouseholderQR<Mat> qr(b);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.leftCols(b.cols());
}

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

inline double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

/// Visits every strictly increasing r-subset of {0..n-1}; the callback may
/// return false to stop early.
inline void for_each_combination(int n, int r, const std::function<bool(const std::vector<int>&)>& fn) {
  if (r < 0 || r > n) return;
  std::vector<int> idx(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    if (!fn(idx)) return;
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Conjugate exponent, with 1 <-> inf.
inline double conjugate_exponent(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return p / (p - 1.0);
}

inline double lp_norm(const Vec& x, double p) {
  if (x.size() == 0) return 0.0;
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.norm();
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::fabs(x(i)) / m, p);
  return m * std::pow(s, 1.0 / p);
}

}  // namespace kgeom

#endif  // KGEOM_LINALG_HPP
