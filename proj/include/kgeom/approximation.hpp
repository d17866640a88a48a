#ifndef KGEOM_APPROXIMATION_HPP
#define KGEOM_APPROXIMATION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "kgeom/config.hpp"
#include "kgeom/conic.hpp"
#include "kgeom/decay.hpp"
#include "kgeom/determinant.hpp"
#include "kgeom/linalg.hpp"
#include "kgeom/spaces.hpp"
#include "kgeom/volume.hpp"

namespace kgeom {

enum class SetKind { UnitBall, ScaledSphere, Subspace, Polytope, FinitePointSet, BallInSubspace };

inline const char* set_kind_name(SetKind k) {
  switch (k) {
    case SetKind::UnitBall: return "UnitBall";
    case SetKind::ScaledSphere: return "ScaledSphere";
    case SetKind::Subspace: return "Subspace";
    case SetKind::Polytope: return "Polytope";
    case SetKind::FinitePointSet: return "FinitePointSet";
    case SetKind::BallInSubspace: return "BallInSubspace";
  }
  return "?";
}

/// Subsets of the space used as A or B.  `vectors` holds the subspace basis,
/// polytope vertices or points depending on the kind.
struct SetDescriptor {
  SetKind kind = SetKind::UnitBall;
  double radius = 1.0;  // ScaledSphere, BallInSubspace
  std::vector<Vec> vectors;

  static SetDescriptor unit_ball() { return {}; }
  static SetDescriptor scaled_sphere(double r) { return {SetKind::ScaledSphere, r, {}}; }
  static SetDescriptor subspace(std::vector<Vec> basis) { return {SetKind::Subspace, 1.0, std::move(basis)}; }
  static SetDescriptor polytope(std::vector<Vec> vertices) { return {SetKind::Polytope, 1.0, std::move(vertices)}; }
  static SetDescriptor points(std::vector<Vec> pts) { return {SetKind::FinitePointSet, 1.0, std::move(pts)}; }
  static SetDescriptor ball_in_subspace(std::vector<Vec> basis, double r = 1.0) {
    return {SetKind::BallInSubspace, r, std::move(basis)};
  }

  bool convex() const { return kind != SetKind::ScaledSphere && kind != SetKind::FinitePointSet; }
};

inline void validate_set(const Space& s, const SetDescriptor& a) {
  const std::string name = set_kind_name(a.kind);
  for (const auto& v : a.vectors)
    if (v.size() != s.dim()) throw DimensionMismatch(name + ": vector length differs from space dimension");
  switch (a.kind) {
    case SetKind::UnitBall: break;
    case SetKind::ScaledSphere:
      if (!(a.radius > 0.0) || !std::isfinite(a.radius)) throw ValidationError(name + ": radius must be positive");
      break;
    case SetKind::Subspace:
    case SetKind::BallInSubspace:
      if (!a.vectors.empty() &&
          numerical_rank(columns(a.vectors, s.dim()), s.tolerances().rank) < static_cast<int>(a.vectors.size()))
        throw ValidationError(name + ": basis is linearly dependent");
      if (a.kind == SetKind::BallInSubspace && (!(a.radius > 0.0) || !std::isfinite(a.radius)))
        throw ValidationError(name + ": radius must be positive");
      break;
    case SetKind::Polytope:
    case SetKind::FinitePointSet:
      if (a.vectors.empty()) throw ValidationError(name + ": at least one point required");
      break;
  }
}

struct SetDistance {
  double distance = 0.0;
  Vec nearest;
  bool exact = true;      // closed form or exhaustive
  bool converged = true;  // numerical routes: solver reached its tolerance
};

namespace detail {

inline Vec project_onto_span(const std::vector<Vec>& basis, const Vec& y) {
  if (basis.empty()) return Vec::Zero(y.size());
  const Mat b = columns(basis, y.size());
  return b * b.colPivHouseholderQr().solve(y);
}

inline SetDistance polytope_distance(const Space& s, const Vec& x, const std::vector<Vec>& verts) {
  SetDistance out;
  out.exact = false;
  const int n = static_cast<int>(verts.size());
  if (n == 1) {
    out.nearest = verts[0];
    out.distance = s.norm(x - verts[0]);
    out.exact = true;
    return out;
  }
  // lambda_n = 1 - sum(mu) eliminates the simplex equality
  conic::Problem pr;
  std::vector<int> mu;
  for (int i = 0; i + 1 < n; ++i) mu.push_back(pr.add_var(1.0 / n));
  for (int m : mu) pr.linear_le(conic::LinExpr::var(m, -1.0));
  conic::LinExpr last = conic::LinExpr::constant_of(-1.0);
  for (int m : mu) last.add(m, 1.0);
  pr.linear_le(last);
  const Vec& vn = verts.back();
  conic::AffVec u(static_cast<std::size_t>(x.size()));
  for (Eigen::Index r = 0; r < x.size(); ++r) {
    u[static_cast<std::size_t>(r)].constant = x(r) - vn(r);
    for (int i = 0; i + 1 < n; ++i) u[static_cast<std::size_t>(r)].add(mu[static_cast<std::size_t>(i)], -(verts[static_cast<std::size_t>(i)](r) - vn(r)));
  }
  const int tau = pr.add_var(0.0);
  const double bound = s.emit(pr, u, conic::LinExpr::var(tau), 1.0, false);
  pr.set_initial(tau, bound + 1.0);
  pr.minimize(conic::LinExpr::var(tau));
  const conic::Solution sol = conic::solve(pr, s.tolerances().conic_gap);
  Vec y = vn;
  for (int i = 0; i + 1 < n; ++i)
    y += sol.z[static_cast<std::size_t>(mu[static_cast<std::size_t>(i)])] * (verts[static_cast<std::size_t>(i)] - vn);
  out.nearest = y;
  out.distance = s.norm(x - y);
  out.converged = sol.converged;
  return out;
}

inline SetDistance ball_in_subspace_distance(const Space& s, const Vec& x, const std::vector<Vec>& basis, double r) {
  SetDistance out;
  if (basis.empty()) {
    out.nearest = Vec::Zero(x.size());
    out.distance = s.norm(x);
    return out;
  }
  const Mat b = columns(basis, x.size());
  const SubspaceDistance free = s.distance_to_subspace(x, basis);
  if (s.norm(free.nearest) <= r) {
    out.nearest = free.nearest;
    out.distance = free.distance;
    out.exact = s.euclidean();
    return out;
  }
  out.exact = false;
  conic::Problem pr;
  std::vector<int> c;
  for (Eigen::Index j = 0; j < b.cols(); ++j) c.push_back(pr.add_var(0.0));
  conic::AffVec u(static_cast<std::size_t>(x.size())), w(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    u[static_cast<std::size_t>(i)].constant = x(i);
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      u[static_cast<std::size_t>(i)].add(c[static_cast<std::size_t>(j)], -b(i, j));
      w[static_cast<std::size_t>(i)].add(c[static_cast<std::size_t>(j)], b(i, j));
    }
  }
  const int tau = pr.add_var(0.0);
  const double bound = s.emit(pr, u, conic::LinExpr::var(tau), 1.0, false);
  pr.set_initial(tau, bound + 1.0);
  // ||B c|| <= sigma <= r, strictly feasible at c = 0 for a small margin
  const int sigma = pr.add_var(0.0);
  const double need = s.emit(pr, w, conic::LinExpr::var(sigma), 1e-3 * r / (1.0 + s.dim()), false);
  if (!(need < r)) throw DegenerateInput("BallInSubspace: could not build a strictly feasible start");
  pr.set_initial(sigma, 0.5 * (need + r));
  conic::LinExpr cap = conic::LinExpr::var(sigma);
  cap.constant = -r;
  pr.linear_le(cap);
  pr.minimize(conic::LinExpr::var(tau));
  const conic::Solution sol = conic::solve(pr, s.tolerances().conic_gap);
  Vec coef(b.cols());
  for (Eigen::Index j = 0; j < b.cols(); ++j) coef(j) = sol.z[static_cast<std::size_t>(c[static_cast<std::size_t>(j)])];
  out.nearest = b * coef;
  const double nn = s.norm(out.nearest);
  if (nn > r) out.nearest *= r / nn;
  out.distance = s.norm(x - out.nearest);
  out.converged = sol.converged;
  return out;
}

}  // namespace detail

/// d(x, A) with a nearest point of A.
inline SetDistance distance_to_set(const Space& s, const Vec& x, const SetDescriptor& a) {
  validate_set(s, a);
  if (x.size() != s.dim()) throw DimensionMismatch("distance_to_set: point length differs from space dimension");
  SetDistance out;
  switch (a.kind) {
    case SetKind::UnitBall: {
      const double n = s.norm(x);
      out.distance = std::max(n - 1.0, 0.0);
      out.nearest = n > 1.0 ? Vec(x / n) : x;
      return out;
    }
    case SetKind::ScaledSphere: {
      const double n = s.norm(x);
      out.distance = std::fabs(n - a.radius);
      if (n > 0.0) {
        out.nearest = a.radius * x / n;
      } else {
        const Vec e1 = Vec::Unit(s.dim(), 0);
        out.nearest = a.radius * e1 / s.norm(e1);
      }
      return out;
    }
    case SetKind::Subspace: {
      const SubspaceDistance d = s.distance_to_subspace(x, a.vectors);
      out.distance = d.distance;
      out.nearest = d.nearest;
      out.exact = s.euclidean() || a.vectors.empty();
      return out;
    }
    case SetKind::Polytope: return detail::polytope_distance(s, x, a.vectors);
    case SetKind::FinitePointSet: {
      out.distance = std::numeric_limits<double>::infinity();
      for (const auto& p : a.vectors) {
        const double d = s.norm(x - p);
        if (d < out.distance) {
          out.distance = d;
          out.nearest = p;
        }
      }
      return out;
    }
    case SetKind::BallInSubspace: return detail::ball_in_subspace_distance(s, x, a.vectors, a.radius);
  }
  return out;
}

/// Membership predicate with absolute slack `tol`.
inline bool set_contains(const Space& s, const SetDescriptor& a, const Vec& y, double tol = 1e-9) {
  switch (a.kind) {
    case SetKind::UnitBall: return s.norm(y) <= 1.0 + tol;
    case SetKind::ScaledSphere: return std::fabs(s.norm(y) - a.radius) <= tol * std::max(1.0, a.radius);
    case SetKind::Subspace: return (y - detail::project_onto_span(a.vectors, y)).norm() <= tol * std::max(1.0, y.norm());
    case SetKind::BallInSubspace:
      return (y - detail::project_onto_span(a.vectors, y)).norm() <= tol * std::max(1.0, y.norm()) &&
             s.norm(y) <= a.radius + tol;
    case SetKind::Polytope: return detail::polytope_distance(s, y, a.vectors).distance <= tol;
    case SetKind::FinitePointSet:
      for (const auto& p : a.vectors)
        if ((p - y).cwiseAbs().maxCoeff() <= tol) return true;
      return false;
  }
  return false;
}

/// Points of P_A(x, delta).  The first `extreme_count` points are extreme
/// points of P_A(x, delta) when it was enumerated exactly.
struct NearSample {
  std::vector<Vec> points;
  int extreme_count = 0;
  double distance = 0.0;  // d(x, A)
  Vec nearest;
  std::string method;
  bool exhaustive = false;  // every extreme point of P_A(x, delta) is present
  bool flagged = false;     // d(x, A) not certified by the solver
};

namespace detail {

/// Vertices of {y : rows . y <= rhs} by brute force over square subsystems.
inline std::vector<Vec> h_polytope_vertices(const std::vector<Vec>& rows, const std::vector<double>& rhs, int dim,
                                            double tol) {
  std::vector<Vec> out;
  const int n = static_cast<int>(rows.size());
  for_each_combination(n, dim, [&](const std::vector<int>& idx) {
    Mat m(dim, dim);
    Vec b(dim);
    for (int r = 0; r < dim; ++r) {
      m.row(r) = rows[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].transpose();
      b(r) = rhs[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])];
    }
    Eigen::FullPivLU<Mat> lu(m);
    if (lu.rank() < dim) return true;
    const Vec y = lu.solve(b);
    for (int i = 0; i < n; ++i)
      if (rows[static_cast<std::size_t>(i)].dot(y) > rhs[static_cast<std::size_t>(i)] + tol) return true;
    for (const auto& v : out)
      if ((v - y).cwiseAbs().maxCoeff() <= 1e-10) return true;
    out.push_back(y);
    return true;
  });
  std::sort(out.begin(), out.end(), [](const Vec& a, const Vec& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (a(i) != b(i)) return a(i) < b(i);
    return false;
  });
  return out;
}

/// Pulls a point back into A (approximately the closest point in simple cases).
inline Vec repair(const Space& s, const SetDescriptor& a, const Vec& y) {
  switch (a.kind) {
    case SetKind::UnitBall: {
      const double n = s.norm(y);
      return n > 1.0 ? Vec(y / n) : y;
    }
    case SetKind::ScaledSphere: {
      const double n = s.norm(y);
      return n > 0.0 ? Vec(a.radius * y / n) : y;
    }
    case SetKind::Subspace: return project_onto_span(a.vectors, y);
    case SetKind::BallInSubspace: {
      const Vec p = project_onto_span(a.vectors, y);
      const double n = s.norm(p);
      return n > a.radius ? Vec(a.radius * p / n) : p;
    }
    default: return y;
  }
}

}  // namespace detail

/// Samples of P_A(x, delta) = {y in A : ||x - y|| <= d(x, A) + delta}.
inline NearSample near_projection_sample(const Space& s, const Vec& x, const SetDescriptor& a, double delta,
                                         const Budget& budget = Budget{}) {
  if (!(delta >= 0.0)) throw ValidationError("near_projection_sample: delta must be >= 0");
  const SetDistance d = distance_to_set(s, x, a);
  NearSample out;
  out.distance = d.distance;
  out.nearest = d.nearest;
  out.flagged = !d.converged;
  const double reach = d.distance + delta;
  auto within = [&](const Vec& y) { return s.norm(x - y) <= reach; };

  if (a.kind == SetKind::FinitePointSet) {
    out.method = "exhaustive-points";
    out.exhaustive = true;
    out.points.push_back(d.nearest);
    for (const auto& p : a.vectors)
      if (within(p) && (p - d.nearest).cwiseAbs().maxCoeff() > 0.0) out.points.push_back(p);
    out.extreme_count = static_cast<int>(out.points.size());
    return out;
  }

  std::mt19937_64 rng(budget.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  if (a.kind == SetKind::UnitBall && s.polyhedral()) {
    // B_X intersected with x + reach B_X is an H-polytope
    const PolyData& pd = s.poly_data();
    const int nrows = 2 * static_cast<int>(pd.facets.size());
    if (binomial(nrows, s.dim()) <= 2e5) {
      std::vector<Vec> rows;
      std::vector<double> rhs;
      for (const auto& f : pd.facets) {
        rows.push_back(f);
        rhs.push_back(1.0);
        rows.push_back(f);
        rhs.push_back(f.dot(x) + reach);
      }
      out.points = detail::h_polytope_vertices(rows, rhs, s.dim(), 1e-10);
      out.extreme_count = static_cast<int>(out.points.size());
      out.exhaustive = true;
      out.method = "face-vertices";
      const std::vector<Vec> verts = out.points;
      if (delta > 0.0 || verts.size() > 1) {
        std::gamma_distribution<double> gam(1.0, 1.0);
        for (int t = 0; t < budget.samples / 4 && !verts.empty(); ++t) {
          Vec y = Vec::Zero(s.dim());
          double tot = 0.0;
          for (const auto& v : verts) {
            const double w = gam(rng);
            y += w * v;
            tot += w;
          }
          out.points.push_back(y / tot);
        }
      }
      bool has_nearest = false;
      for (const auto& p : out.points)
        if ((p - d.nearest).cwiseAbs().maxCoeff() <= 1e-12) has_nearest = true;
      if (!has_nearest) out.points.push_back(d.nearest);
      return out;
    }
  }

  out.points.push_back(d.nearest);
  if (a.kind == SetKind::Polytope) {
    out.method = "vertex-mixing";
    std::vector<Vec> verts;
    for (const auto& v : a.vectors)
      if (within(v)) verts.push_back(v);
    for (const auto& v : verts) out.points.push_back(v);
    out.extreme_count = static_cast<int>(verts.size());
    std::gamma_distribution<double> gam(1.0, 1.0);
    for (int t = 0; t < budget.samples; ++t) {
      Vec c = Vec::Zero(s.dim());
      double tot = 0.0;
      for (const auto& v : a.vectors) {
        const double w = gam(rng);
        c += w * v;
        tot += w;
      }
      c /= tot;
      const double mix = std::pow(2.0, -static_cast<double>(t % 24));
      const Vec y = (1.0 - mix) * d.nearest + mix * c;
      if (within(y)) out.points.push_back(y);
    }
    // extreme points first
    std::rotate(out.points.begin(), out.points.begin() + 1, out.points.begin() + 1 + out.extreme_count);
    return out;
  }

  out.method = "multiscale-rejection";
  if (delta == 0.0 && a.kind != SetKind::ScaledSphere) return out;
  std::vector<double> scales;
  for (double r = 2.0 * std::max(1.0, d.distance); r >= std::max(delta / 64.0, 1e-9) && scales.size() < 40; r *= 0.5)
    scales.push_back(r);
  const int per = std::max(1, budget.samples / static_cast<int>(scales.size()));
  std::normal_distribution<double> g(0.0, 1.0);
  for (double r : scales)
    for (int t = 0; t < per; ++t) {
      Vec step(s.dim());
      for (Eigen::Index i = 0; i < step.size(); ++i) step(i) = g(rng);
      const Vec y = detail::repair(s, a, d.nearest + r * step / step.norm());
      if (within(y)) out.points.push_back(y);
    }
  return out;
}

namespace detail {

struct TupleSup {
  double value = 0.0;
  std::vector<int> tuple;
};

/// Largest |D_k| over (k+1)-subsets of `pts` at fixed functionals.  Exhaustive
/// when affordable, otherwise exhaustive over the extreme prefix plus random
/// subsets.
inline TupleSup tuple_sup(const std::vector<Vec>& pts, int extreme_count, const std::vector<Vec>& fs,
                          const Budget& budget, std::mt19937_64& rng) {
  TupleSup best;
  const int n = static_cast<int>(pts.size());
  const int k = static_cast<int>(fs.size());
  if (n < k + 1) return best;
  auto eval = [&](const std::vector<int>& idx) {
    std::vector<Vec> t;
    for (int i : idx) t.push_back(pts[static_cast<std::size_t>(i)]);
    const double v = std::fabs(dk_determinant(t, fs));
    if (v > best.value) {
      best.value = v;
      best.tuple = idx;
    }
  };
  if (binomial(n, k + 1) <= budget.tuples) {
    for_each_combination(n, k + 1, [&](const std::vector<int>& idx) {
      eval(idx);
      return true;
    });
    return best;
  }
  if (extreme_count >= k + 1 && binomial(extreme_count, k + 1) <= std::max(budget.tuples, 100000))
    for_each_combination(extreme_count, k + 1, [&](const std::vector<int>& idx) {
      eval(idx);
      return true;
    });
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int t = 0; t < budget.tuples; ++t) {
    std::vector<int> idx;
    while (static_cast<int>(idx.size()) < k + 1) {
      const int i = pick(rng);
      if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end());
    eval(idx);
  }
  return best;
}

inline void check_schedule(const std::vector<double>& schedule) {
  if (schedule.empty()) throw ValidationError("schedule: at least one step required");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] >= 0.0)) throw ValidationError("schedule: steps must be >= 0");
    if (i > 0 && !(schedule[i] < schedule[i - 1])) throw ValidationError("schedule: steps must strictly decrease");
  }
}

inline void check_functionals(const Space& s, const std::vector<Vec>& fs, int k) {
  if (static_cast<int>(fs.size()) != k) throw ValidationError("diagnostic: expected k functionals");
  for (const auto& f : fs) {
    if (f.size() != s.dim()) throw DimensionMismatch("diagnostic: functional length differs from space dimension");
    if (std::fabs(s.dual_norm(f) - 1.0) > s.tolerances().unit_dual)
      throw ValidationError("diagnostic: functionals must lie on the unit dual sphere");
  }
}

}  // namespace detail

/// delta_m = 2^-m, m = 0..12.
inline std::vector<double> default_delta_schedule() {
  std::vector<double> out;
  for (int m = 0; m <= 12; ++m) out.push_back(std::ldexp(1.0, -m));
  return out;
}

/// Uniform version over a finite sample of B: per delta, the largest ksch
/// statistic over the points of B.
inline DecayReport kwusch_diagnostic(const Space& s, const SetDescriptor& a, const std::vector<Vec>& b_points, int k,
                                     const std::vector<Vec>& functionals, const std::vector<double>& schedule,
                                     const Budget& budget = Budget{}, const Tolerances& tol = default_tolerances());

/// Weak strong-Chebyshev diagnostic at x: per delta, the largest |D_k| at the
/// fixed functionals over tuples from P_A(x, delta), with diam_k alongside.
inline DecayReport ksch_diagnostic(const Space& s, const SetDescriptor& a, const Vec& x, int k,
                                   const std::vector<Vec>& functionals, const std::vector<double>& schedule,
                                   const Budget& budget = Budget{}, const Tolerances& tol = default_tolerances()) {
  validate_set(s, a);
  detail::check_schedule(schedule);
  detail::check_functionals(s, functionals, k);
  if (k < 1 || k > kMaxOrder) throw ValidationError("diagnostic: k must lie in 1.." + std::to_string(kMaxOrder));
  DecayReport rep;
  rep.schedule = schedule;
  rep.floor = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < schedule.size(); ++m) {
    Budget step = budget;
    step.seed = budget.seed * 1000003ULL + m;
    const NearSample ns = near_projection_sample(s, x, a, schedule[m], step);
    if (ns.flagged) rep.notes.push_back("d(x,A) not certified at delta index " + std::to_string(m));
    std::mt19937_64 rng(step.seed);
    const detail::TupleSup sup = detail::tuple_sup(ns.points, ns.extreme_count, functionals, step, rng);
    rep.sup_det.push_back(sup.value);
    if (sup.value < rep.floor) {
      rep.floor = sup.value;
      rep.floor_points.clear();
      for (int i : sup.tuple) rep.floor_points.push_back(ns.points[static_cast<std::size_t>(i)]);
      rep.floor_functionals = functionals;
    }
    std::vector<Vec> sub;
    const int cap = 25;
    for (int i = 0; i < static_cast<int>(ns.points.size()) && static_cast<int>(sub.size()) < cap; ++i)
      sub.push_back(ns.points[static_cast<std::size_t>(i)]);
    rep.diam.push_back(static_cast<int>(sub.size()) >= k + 1 ? diam_k(s, sub, k, step).value : 0.0);
    if (static_cast<int>(ns.points.size()) > cap && m == 0) rep.notes.push_back("diamK evaluated on a 25-point subsample");
  }
  rep.verdict = classify_decay(rep.schedule, rep.sup_det, tol.decay_floor, &rep.slope);
  if (rep.verdict == Verdict::StallsAboveFloor && rep.floor_points.empty()) rep.verdict = Verdict::Inconclusive;
  return rep;
}

inline DecayReport kwusch_diagnostic(const Space& s, const SetDescriptor& a, const std::vector<Vec>& b_points, int k,
                                     const std::vector<Vec>& functionals, const std::vector<double>& schedule,
                                     const Budget& budget, const Tolerances& tol) {
  if (b_points.empty()) throw ValidationError("kwusch_diagnostic: at least one point of B required");
  std::vector<DecayReport> per;
  for (const auto& x : b_points) per.push_back(ksch_diagnostic(s, a, x, k, functionals, schedule, budget, tol));
  if (per.size() == 1) return per.front();
  DecayReport rep;
  rep.schedule = schedule;
  rep.floor = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < schedule.size(); ++m) {
    std::size_t arg = 0;
    double diam = 0.0;
    for (std::size_t p = 0; p < per.size(); ++p) {
      if (per[p].sup_det[m] > per[arg].sup_det[m]) arg = p;
      diam = std::max(diam, per[p].diam[m]);
    }
    rep.sup_det.push_back(per[arg].sup_det[m]);
    rep.diam.push_back(diam);
  }
  // floor certificate: the point of B whose own floor is largest carries it
  std::size_t carrier = 0;
  for (std::size_t p = 0; p < per.size(); ++p)
    if (per[p].floor > per[carrier].floor) carrier = p;
  rep.floor = *std::min_element(rep.sup_det.begin(), rep.sup_det.end());
  rep.floor_points = per[carrier].floor_points;
  rep.floor_functionals = functionals;
  for (const auto& p : per) rep.notes.insert(rep.notes.end(), p.notes.begin(), p.notes.end());
  rep.verdict = classify_decay(rep.schedule, rep.sup_det, tol.decay_floor, &rep.slope);
  if (rep.verdict == Verdict::DecaysBelowTol) {
    for (std::size_t p = 0; p < per.size(); ++p)
      if (per[p].verdict != Verdict::DecaysBelowTol) {
        rep.verdict = Verdict::Inconclusive;
        rep.notes.push_back("uniform maximum decays but point " + std::to_string(p) + " does not");
        break;
      }
  }
  return rep;
}

struct SetGap {
  double distance = 0.0;  // d(A, B)
  bool exact = true;
  std::string method;
};

/// d(A, B) for the combinations the property test supports.
inline SetGap set_distance(const Space& s, const SetDescriptor& a, const SetDescriptor& b,
                           const std::vector<Vec>& b_samples = {}) {
  validate_set(s, a);
  validate_set(s, b);
  SetGap out;
  if (b.kind == SetKind::FinitePointSet) {
    out.method = "min-over-points";
    out.distance = std::numeric_limits<double>::infinity();
    for (const auto& y : b.vectors) {
      const SetDistance d = distance_to_set(s, y, a);
      out.distance = std::min(out.distance, d.distance);
      out.exact = out.exact && d.exact;
    }
    return out;
  }
  if (a.kind == SetKind::FinitePointSet) return set_distance(s, b, a);
  if (b.kind == SetKind::ScaledSphere) {
    double reach = -1.0;
    if (a.kind == SetKind::UnitBall) reach = 1.0;
    if (a.kind == SetKind::BallInSubspace) reach = a.radius;
    if (a.kind == SetKind::Polytope)
      for (const auto& v : a.vectors) reach = std::max(reach, s.norm(v));
    if (reach >= 0.0 && reach <= b.radius) {
      out.method = "radial";
      out.distance = b.radius - reach;
      return out;
    }
  }
  if (b_samples.empty()) throw UnsupportedStrategy("set_distance: this pair needs sample points of B");
  out.method = "min-over-samples";
  out.exact = false;
  out.distance = std::numeric_limits<double>::infinity();
  for (const auto& y : b_samples) out.distance = std::min(out.distance, distance_to_set(s, y, a).distance);
  return out;
}

/// Property test for the pair (A, B): sequences x_n^(i) in A and y_n in B with
/// ||x_n^(i) - y_n|| -> d(A, B); tracks max |D_k[(x_n^(i)); f]| over the
/// functional tuples.  The hypothesis is checked, not assumed.
inline DecayReport property_kwuc_test(const Space& s, const SetDescriptor& a, const SetDescriptor& b, int k,
                                      const std::vector<std::vector<Vec>>& functional_tuples,
                                      const std::vector<std::vector<Vec>>& x_sequences, const std::vector<Vec>& y_sequence,
                                      const Tolerances& tol = default_tolerances()) {
  if (static_cast<int>(x_sequences.size()) != k + 1) throw ValidationError("property test: need k+1 sequences in A");
  const std::size_t n = y_sequence.size();
  if (n == 0) throw ValidationError("property test: sequences must be nonempty");
  for (const auto& seq : x_sequences)
    if (seq.size() != n) throw ValidationError("property test: sequences must share a length");
  if (functional_tuples.empty()) throw ValidationError("property test: at least one functional tuple required");
  for (const auto& ft : functional_tuples) detail::check_functionals(s, ft, k);
  const SetGap gap = set_distance(s, a, b, y_sequence);
  DecayReport rep;
  if (!gap.exact) rep.notes.push_back("d(A,B) estimated by " + gap.method);
  rep.floor = std::numeric_limits<double>::infinity();
  bool members = true;
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<Vec> pts;
    double resid = 0.0;
    for (const auto& seq : x_sequences) {
      if (!set_contains(s, a, seq[t], tol.membership)) members = false;
      pts.push_back(seq[t]);
      resid = std::max(resid, std::fabs(s.norm(seq[t] - y_sequence[t]) - gap.distance));
    }
    if (b.kind != SetKind::FinitePointSet && !set_contains(s, b, y_sequence[t], tol.membership)) members = false;
    rep.hypothesis_residuals.push_back(resid);
    double best = 0.0;
    const std::vector<Vec>* arg = &functional_tuples.front();
    for (const auto& ft : functional_tuples) {
      const double v = std::fabs(dk_determinant(pts, ft));
      if (v > best) {
        best = v;
        arg = &ft;
      }
    }
    rep.schedule.push_back(1.0 / static_cast<double>(t + 1));
    rep.sup_det.push_back(best);
    if (best < rep.floor) {
      rep.floor = best;
      rep.floor_points = pts;
      rep.floor_functionals = *arg;
    }
  }
  if (!members) rep.notes.push_back("sequence terms outside their sets");
  const Verdict hyp = classify_decay(rep.schedule, rep.hypothesis_residuals, tol.decay_floor);
  rep.vacuous = !members || hyp != Verdict::DecaysBelowTol;
  if (hyp != Verdict::DecaysBelowTol) rep.notes.push_back("||x_n - y_n|| -> d(A,B) not observed");
  rep.verdict = classify_decay(rep.schedule, rep.sup_det, tol.decay_floor, &rep.slope);
  return rep;
}

struct LiftingReport {
  DecayReport order_k;       // max over all order-k subfamilies
  DecayReport order_k_plus;  // the full order-(k+1) determinant
  bool violation = false;    // order k decays while order k+1 does not
};

/// For k+2 sequences and k+1 functionals, compares decay of every order-k
/// subfamily determinant with decay of the full order-(k+1) determinant.
inline LiftingReport order_lifting_check(const std::vector<std::vector<Vec>>& sequences,
                                         const std::vector<Vec>& functionals,
                                         const Tolerances& tol = default_tolerances()) {
  const int k = static_cast<int>(functionals.size()) - 1;
  if (k < 1) throw ValidationError("order lifting: at least two functionals required");
  if (static_cast<int>(sequences.size()) != k + 2) throw ValidationError("order lifting: need k+2 sequences");
  const std::size_t n = sequences.front().size();
  for (const auto& seq : sequences)
    if (seq.size() != n || n == 0) throw ValidationError("order lifting: sequences must share a positive length");
  LiftingReport out;
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<Vec> pts;
    for (const auto& seq : sequences) pts.push_back(seq[t]);
    const SubfamilyTable tab = subfamily_scan(pts, functionals);
    const double sched = 1.0 / static_cast<double>(t + 1);
    out.order_k.schedule.push_back(sched);
    out.order_k.sup_det.push_back(tab.max_abs());
    out.order_k_plus.schedule.push_back(sched);
    out.order_k_plus.sup_det.push_back(std::fabs(tab.full));
  }
  for (DecayReport* r : {&out.order_k, &out.order_k_plus}) {
    r->floor = *std::min_element(r->sup_det.begin(), r->sup_det.end());
    r->verdict = classify_decay(r->schedule, r->sup_det, tol.decay_floor, &r->slope);
  }
  out.violation = out.order_k.verdict == Verdict::DecaysBelowTol && out.order_k_plus.verdict != Verdict::DecaysBelowTol;
  return out;
}

}  // namespace kgeom

#endif  // KGEOM_APPROXIMATION_HPP
