#ifndef KGEOM_VOLUME_HPP
#define KGEOM_VOLUME_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "kgeom/config.hpp"
#include "kgeom/determinant.hpp"
#include "kgeom/linalg.hpp"
#include "kgeom/spaces.hpp"

namespace kgeom {

enum class VolumeStrategy { Auto, Exact, Iterative };
enum class VolumeMethod { ExactExtremePoints, AlternatingMax, EuclideanGram };

inline const char* method_name(VolumeMethod m) {
  switch (m) {
    case VolumeMethod::ExactExtremePoints: return "exact-extreme-points";
    case VolumeMethod::AlternatingMax: return "alternating-max";
    case VolumeMethod::EuclideanGram: return "euclidean-gram";
  }
  return "?";
}

struct VolumeResult {
  double value = 0.0;
  std::vector<Vec> certificate;  // k unit functionals with D_k = value
  VolumeMethod method = VolumeMethod::ExactExtremePoints;
  bool lower_bound = false;  // value is a lower estimate of the supremum
  bool converged = true;
};

namespace detail {

inline Mat differences(const std::vector<Vec>& points) {
  const int k = static_cast<int>(points.size()) - 1;
  const Vec& last = points.back();
  Mat g(last.size(), k);
  for (int i = 0; i < k; ++i) g.col(i) = points[static_cast<std::size_t>(i)] - last;
  return g;
}

inline void check_points(const Space& space, const std::vector<Vec>& points, const char* op) {
  if (points.size() < 2) throw ValidationError(std::string(op) + ": at least two points required");
  if (static_cast<int>(points.size()) - 1 > kMaxOrder)
    throw ValidationError(std::string(op) + ": order exceeds the maximum " + std::to_string(kMaxOrder));
  for (const auto& x : points) {
    if (x.size() != space.dim())
      throw DimensionMismatch(std::string(op) + ": point length " + std::to_string(x.size()) +
                              " differs from space dimension " + std::to_string(space.dim()));
    if (!x.allFinite()) throw ValidationError(std::string(op) + ": non-finite coordinate");
  }
}

/// Makes D_k non-negative by flipping the first functional when needed.
inline void orient(const std::vector<Vec>& points, VolumeResult& r) {
  const double d = dk_determinant(points, r.certificate);
  if (d < 0.0) r.certificate.front() = -r.certificate.front();
  r.value = std::fabs(d);
}

/// Row of cofactors of M = F^T G along row j, mapped back through G: the
/// vector v_j with D_k = +-f_j(v_j).
inline Vec slot_vector(const Mat& g, const Mat& m, int j) {
  const int k = static_cast<int>(m.rows());
  Vec c(k);
  for (int i = 0; i < k; ++i) {
    Mat minor(k - 1, k - 1);
    for (int r = 0, rr = 0; r < k; ++r) {
      if (r == j) continue;
      for (int s = 0, cc = 0; s < k; ++s) {
        if (s == i) continue;
        minor(rr, cc++) = m(r, s);
      }
      ++rr;
    }
    c(i) = ((i + j) % 2 ? -1.0 : 1.0) * lu_determinant(minor);
  }
  return g * c;
}

inline VolumeResult euclidean_volume(const std::vector<Vec>& points) {
  const int k = static_cast<int>(points.size()) - 1;
  const Mat g = differences(points);
  VolumeResult r;
  r.method = VolumeMethod::EuclideanGram;
  const Eigen::Index d = g.rows();
  if (d < k) {
    for (int j = 0; j < k; ++j) r.certificate.push_back(Vec::Unit(d, j % d));
    orient(points, r);
    return r;
  }
  Eigen::HouseholderQR<Mat> qr(g);
  const Mat q = (qr.householderQ() * Mat::Identity(d, d)).leftCols(k);
  for (int j = 0; j < k; ++j) r.certificate.push_back(q.col(j));
  orient(points, r);
  return r;
}

inline double exact_cost(const Space& space, int k) {
  return binomial(static_cast<int>(space.poly_data().facets.size() / 2 + 1), k);
}

inline VolumeResult exact_polyhedral_volume(const Space& space, const std::vector<Vec>& points) {
  const int k = static_cast<int>(points.size()) - 1;
  const Mat g = differences(points);
  // one representative of every +-pair of dual vertices
  std::vector<Vec> reps;
  for (const auto& a : space.extreme_points(true)) {
    bool seen = false;
    for (const auto& b : reps)
      if ((a + b).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
        seen = true;
        break;
      }
    if (!seen) reps.push_back(a);
  }
  VolumeResult r;
  r.method = VolumeMethod::ExactExtremePoints;
  std::vector<int> best;
  double best_val = -1.0;
  const int m = static_cast<int>(reps.size());
  if (m < k) {
    for (int j = 0; j < k; ++j) r.certificate.push_back(reps[static_cast<std::size_t>(j % m)]);
    orient(points, r);
    return r;
  }
  Mat ft(k, g.rows());
  for_each_combination(m, k, [&](const std::vector<int>& idx) {
    for (int j = 0; j < k; ++j) ft.row(j) = reps[static_cast<std::size_t>(idx[j])].transpose();
    const double v = std::fabs(lu_determinant(ft * g));
    if (v > best_val) {
      best_val = v;
      best = idx;
    }
    return true;
  });
  for (int j = 0; j < k; ++j) r.certificate.push_back(reps[static_cast<std::size_t>(best[j])]);
  orient(points, r);
  return r;
}

inline VolumeResult alternating_volume(const Space& space, const std::vector<Vec>& points, const Budget& budget) {
  const int k = static_cast<int>(points.size()) - 1;
  const Mat g = differences(points);
  const Eigen::Index d = g.rows();
  VolumeResult best;
  best.method = VolumeMethod::AlternatingMax;
  best.lower_bound = true;
  best.value = -1.0;
  std::mt19937_64 rng(budget.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Mat q = d >= k ? Mat((Eigen::HouseholderQR<Mat>(g).householderQ() * Mat::Identity(d, d)).leftCols(k))
                       : Mat::Identity(d, k);
  bool all_converged = true;
  for (int start = 0; start < std::max(1, budget.volume_starts); ++start) {
    Mat f(d, k);
    for (int j = 0; j < k; ++j) {
      Vec v(d);
      if (start == 0) v = q.col(j);
      else if (start <= k && start - 1 < d) v = Vec::Unit(d, (j + start - 1) % d);
      else
        for (Eigen::Index i = 0; i < d; ++i) v(i) = gauss(rng);
      if (v.norm() == 0.0) v = Vec::Unit(d, j % d);
      f.col(j) = v / space.dual_norm(v);
    }
    double value = std::fabs(lu_determinant(f.transpose() * g));
    bool converged = false;
    for (int round = 0; round < budget.volume_rounds; ++round) {
      const double before = value;
      for (int j = 0; j < k; ++j) {
        const Vec v = slot_vector(g, f.transpose() * g, j);
        if (v.cwiseAbs().maxCoeff() == 0.0) continue;
        f.col(j) = space.support_functional(v).coords;
      }
      value = std::fabs(lu_determinant(f.transpose() * g));
      if (value - before < 1e-9 * std::max(1.0, value)) {
        converged = true;
        break;
      }
    }
    all_converged = all_converged && converged;
    if (value > best.value) {
      best.value = value;
      best.certificate.clear();
      for (int j = 0; j < k; ++j) best.certificate.push_back(f.col(j));
    }
  }
  best.converged = all_converged;
  orient(points, best);
  return best;
}

}  // namespace detail

/// k-dimensional volume V[x_1..x_{k+1}] = sup |D_k| over unit functionals.
inline VolumeResult vk_volume(const Space& space, const std::vector<Vec>& points,
                              VolumeStrategy strategy = VolumeStrategy::Auto, const Budget& budget = Budget{}) {
  detail::check_points(space, points, "vk_volume");
  const int k = static_cast<int>(points.size()) - 1;
  const bool exact_ok = space.euclidean() || (space.polyhedral() && detail::exact_cost(space, k) <= 2e6);
  if (strategy == VolumeStrategy::Exact && !exact_ok)
    throw UnsupportedStrategy("vk_volume: exact strategy needs a polyhedral or Euclidean dual ball");
  if (strategy != VolumeStrategy::Iterative && exact_ok) {
    if (space.euclidean()) return detail::euclidean_volume(points);
    return detail::exact_polyhedral_volume(space, points);
  }
  return detail::alternating_volume(space, points, budget);
}

struct DegeneracyReport {
  bool degenerate = false;
  int rank = 0;
  Vec singular_values;
};

/// V > 0 exactly when x_1 - x_{k+1}, .., x_k - x_{k+1} are independent.
inline DegeneracyReport degeneracy_test(const Space& space, const std::vector<Vec>& points,
                                        const Tolerances& tol = default_tolerances()) {
  detail::check_points(space, points, "degeneracy_test");
  const int k = static_cast<int>(points.size()) - 1;
  const Mat g = detail::differences(points);
  DegeneracyReport r;
  Eigen::JacobiSVD<Mat> svd(g);
  r.singular_values = svd.singularValues();
  r.rank = numerical_rank(g, tol.rank);
  r.degenerate = r.rank < k;
  return r;
}

struct DiameterResult {
  double value = 0.0;
  std::vector<int> witness;  // 0-based indices into the point set
  VolumeResult volume;
  bool lower_bound = false;
};

/// diam_k of a finite set: max of V over (k+1)-subsets.  Exhaustive up to 25
/// points, greedy exchange with restarts beyond that.
inline DiameterResult diam_k(const Space& space, const std::vector<Vec>& pts, int k, const Budget& budget = Budget{}) {
  if (k < 1 || k > kMaxOrder) throw ValidationError("diam_k: order k must lie in 1.." + std::to_string(kMaxOrder));
  const int n = static_cast<int>(pts.size());
  if (n < k + 1)
    throw ValidationError("diam_k: need at least k+1 = " + std::to_string(k + 1) + " points, got " + std::to_string(n));
  DiameterResult out;
  out.value = -1.0;
  auto eval = [&](const std::vector<int>& idx) {
    std::vector<Vec> xs;
    for (int i : idx) xs.push_back(pts[static_cast<std::size_t>(i)]);
    return vk_volume(space, xs, VolumeStrategy::Auto, budget);
  };
  auto consider = [&](const std::vector<int>& idx, const VolumeResult& v) {
    if (v.value > out.value) {
      out.value = v.value;
      out.witness = idx;
      out.volume = v;
    }
  };
  if (n <= 25) {
    for_each_combination(n, k + 1, [&](const std::vector<int>& idx) {
      consider(idx, eval(idx));
      return true;
    });
    out.lower_bound = out.volume.lower_bound;
    return out;
  }
  std::mt19937_64 rng(budget.seed);
  const int restarts = std::max(1, budget.starts / 8);
  for (int s = 0; s < restarts; ++s) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> cur(all.begin(), all.begin() + k + 1);
    std::sort(cur.begin(), cur.end());
    double cur_val = eval(cur).value;
    bool improved = true;
    while (improved) {
      improved = false;
      for (int slot = 0; slot <= k && !improved; ++slot)
        for (int cand = 0; cand < n && !improved; ++cand) {
          if (std::find(cur.begin(), cur.end(), cand) != cur.end()) continue;
          std::vector<int> trial = cur;
          trial[static_cast<std::size_t>(slot)] = cand;
          std::sort(trial.begin(), trial.end());
          const double v = eval(trial).value;
          if (v > cur_val * (1.0 + 1e-12) + 1e-15) {
            cur = trial;
            cur_val = v;
            improved = true;
          }
        }
    }
    consider(cur, eval(cur));
  }
  out.lower_bound = true;
  return out;
}

}  // namespace kgeom

#endif  // KGEOM_VOLUME_HPP
