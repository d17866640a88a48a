#ifndef KGEOM_DETERMINANT_HPP
#define KGEOM_DETERMINANT_HPP

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "kgeom/config.hpp"
#include "kgeom/linalg.hpp"

namespace kgeom {

namespace detail {

inline void check_family(const std::vector<Vec>& points, const std::vector<Vec>& functionals, const char* op) {
  if (points.size() != functionals.size() + 1)
    throw DimensionMismatch(std::string(op) + ": need one more point than functionals (got " +
                            std::to_string(points.size()) + " points, " + std::to_string(functionals.size()) +
                            " functionals)");
  const Eigen::Index d = points.front().size();
  for (const auto& x : points)
    if (x.size() != d) throw DimensionMismatch(std::string(op) + ": points of different lengths");
  for (const auto& f : functionals)
    if (f.size() != d) throw DimensionMismatch(std::string(op) + ": functional length differs from point length");
}

}  // namespace detail

/// Bordered matrix: first row all ones, row j+1 holds f_j(x_1), .., f_j(x_{k+1}).
inline Mat bordered_matrix(const std::vector<Vec>& points, const std::vector<Vec>& functionals) {
  detail::check_family(points, functionals, "bordered_matrix");
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(0, i) = 1.0;
    for (Eigen::Index j = 1; j < n; ++j)
      m(j, i) = functionals[static_cast<std::size_t>(j - 1)].dot(points[static_cast<std::size_t>(i)]);
  }
  return m;
}

/// D_k[(x_i); (f_j)] for k+1 points and k functionals.  An empty functional
/// list with one point gives D_0 = 1.
inline double dk_determinant(const std::vector<Vec>& points, const std::vector<Vec>& functionals) {
  if (points.empty()) throw ValidationError("dk_determinant: at least one point required");
  detail::check_family(points, functionals, "dk_determinant");
  if (static_cast<int>(functionals.size()) > kMaxOrder)
    throw ValidationError("dk_determinant: order k = " + std::to_string(functionals.size()) + " exceeds the maximum " +
                          std::to_string(kMaxOrder));
  // Columns are taken in lexicographic order of the points and the
  // permutation sign applied afterwards, so reordering the points changes
  // the result by an exact sign.
  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto less = [&](std::size_t a, std::size_t b) {
    const Vec& x = points[a];
    const Vec& y = points[b];
    for (Eigen::Index c = 0; c < x.size(); ++c)
      if (x(c) != y(c)) return x(c) < y(c);
    return false;
  };
  std::stable_sort(order.begin(), order.end(), less);
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!less(order[i], order[i + 1])) return 0.0;  // repeated point
  double sign = 1.0;
  std::vector<std::size_t> perm = order;
  for (std::size_t i = 0; i < n; ++i)
    while (perm[i] != i) {
      std::swap(perm[i], perm[perm[i]]);
      sign = -sign;
    }
  std::vector<Vec> sorted;
  sorted.reserve(n);
  for (std::size_t i : order) sorted.push_back(points[i]);
  return sign * lu_determinant(bordered_matrix(sorted, functionals));
}

struct SubfamilyEntry {
  std::vector<int> alpha;  // 1-based point indices, increasing
  std::vector<int> beta;   // 1-based functional indices, increasing
  double value = 0.0;
};

struct SubfamilyTable {
  int k = 0;
  std::vector<SubfamilyEntry> entries;
  double full = 0.0;  // D_{k+1} of the whole family

  double max_abs() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::fabs(e.value));
    return m;
  }

  std::string to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "# kgeom subfamily table v1: alpha,beta,value\n";
    auto join = [](const std::vector<int>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
      return s;
    };
    for (const auto& e : entries) out << join(e.alpha) << "," << join(e.beta) << "," << e.value << "\n";
    out << "full,full," << full << "\n";
    return out.str();
  }
};

/// All D_k values over (k+1)-subsets of k+2 points and k-subsets of k+1
/// functionals, plus D_{k+1} of the full family.
inline SubfamilyTable subfamily_scan(const std::vector<Vec>& points, const std::vector<Vec>& functionals) {
  if (functionals.empty()) throw ValidationError("subfamily_scan: at least two functionals required");
  detail::check_family(points, functionals, "subfamily_scan");
  const int k = static_cast<int>(functionals.size()) - 1;
  if (k < 1) throw ValidationError("subfamily_scan: at least two functionals required");
  SubfamilyTable table;
  table.k = k;
  table.full = dk_determinant(points, functionals);
  for_each_combination(k + 2, k + 1, [&](const std::vector<int>& a) {
    for_each_combination(k + 1, k, [&](const std::vector<int>& b) {
      SubfamilyEntry e;
      std::vector<Vec> xs, fs;
      for (int i : a) {
        xs.push_back(points[static_cast<std::size_t>(i)]);
        e.alpha.push_back(i + 1);
      }
      for (int j : b) {
        fs.push_back(functionals[static_cast<std::size_t>(j)]);
        e.beta.push_back(j + 1);
      }
      e.value = dk_determinant(xs, fs);
      table.entries.push_back(std::move(e));
      return true;
    });
    return true;
  });
  return table;
}

struct SylvesterResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double pivot = 0.0;  // D_{r-1} of the leading block
  double relative_error = 0.0;
};

/// Sylvester's identity on the bordered matrix A of n points and n-1
/// functionals with leading block of order r:
///
///   det(A) * D_{r-1}[x_1..x_r; f_1..f_{r-1}]^(n-r-1) = det(B),
///   b_{s,t} = D_r[x_1..x_r, x_t; f_1..f_{r-1}, f_{s-1}],  r < s,t <= n.
///
/// With n = k+2 (A is the D_{k+1} matrix) the exponent is k-r+1.
inline SylvesterResult sylvester_check(const std::vector<Vec>& points, const std::vector<Vec>& functionals, int r,
                                       const Tolerances& tol = default_tolerances()) {
  detail::check_family(points, functionals, "sylvester_check");
  const int n = static_cast<int>(points.size());
  if (n - 1 > kMaxOrder + 1) throw ValidationError("sylvester_check: family too large");
  if (r < 1 || r > n - 1)
    throw ValidationError("sylvester_check: pivot order r must satisfy 1 <= r <= " + std::to_string(n - 1));
  const std::vector<Vec> lead_x(points.begin(), points.begin() + r);
  const std::vector<Vec> lead_f(functionals.begin(), functionals.begin() + (r - 1));
  SylvesterResult out;
  out.pivot = dk_determinant(lead_x, lead_f);
  if (std::fabs(out.pivot) <= tol.pivot)
    throw DegenerateInput("sylvester_check: pivot-degenerate leading block (|D_{r-1}| = " +
                          std::to_string(std::fabs(out.pivot)) + ")");
  const int m = n - r;
  Mat b(m, m);
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t) {
      std::vector<Vec> xs = lead_x;
      std::vector<Vec> fs = lead_f;
      xs.push_back(points[static_cast<std::size_t>(r + t)]);
      fs.push_back(functionals[static_cast<std::size_t>(r + s - 1)]);
      b(s, t) = dk_determinant(xs, fs);
    }
  out.lhs = lu_determinant(bordered_matrix(points, functionals)) * std::pow(out.pivot, n - r - 1);
  out.rhs = lu_determinant(b);
  const double scale = std::max(std::fabs(out.lhs), std::fabs(out.rhs));
  out.relative_error = scale > 0.0 ? std::fabs(out.lhs - out.rhs) / scale : 0.0;
  return out;
}

}  // namespace kgeom

#endif  // KGEOM_DETERMINANT_HPP
