#ifndef KGEOM_CONIC_HPP
#define KGEOM_CONIC_HPP

// Small dense log-barrier interior point method for problems of the form
//
//   minimize    c . z
//   subject to  a_i . z + b_i <= 0                 (linear)
//               || U_j z + u_j ||_2 <= g_j . z + t_j  (second order cone)
//               || R_l z + r_l ||_p <= h_l . z + s_l  (p-cone, R z + r > 0)
//
// Every norm in the library has an epigraph made of these pieces, so one
// solver covers quotient norms, dual norms without a closed form and
// distances to convex sets.  Callers always supply a strictly feasible
// starting point, so no phase-I problem is needed.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "kgeom/config.hpp"

namespace kgeom::conic {

struct LinExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  static LinExpr var(int index, double coeff = 1.0) {
    LinExpr e;
    e.terms.emplace_back(index, coeff);
    return e;
  }
  static LinExpr constant_of(double c) {
    LinExpr e;
    e.constant = c;
    return e;
  }
  LinExpr& add(int index, double coeff) {
    if (coeff != 0.0) terms.emplace_back(index, coeff);
    return *this;
  }
  LinExpr& add(const LinExpr& other, double scale = 1.0) {
    for (const auto& [i, c] : other.terms) terms.emplace_back(i, c * scale);
    constant += other.constant * scale;
    return *this;
  }
  LinExpr scaled(double s) const {
    LinExpr e;
    e.add(*this, s);
    return e;
  }
  double eval(const std::vector<double>& z) const {
    double v = constant;
    for (const auto& [i, c] : terms) v += c * z[static_cast<std::size_t>(i)];
    return v;
  }
};

using AffVec = std::vector<LinExpr>;

inline AffVec constant_vec(const Vec& x) {
  AffVec out(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) out[static_cast<std::size_t>(i)] = LinExpr::constant_of(x(i));
  return out;
}

/// Linear map applied to an affine vector: out_r = sum_c m(r, c) * in_c.
inline AffVec apply(const Mat& m, const AffVec& in) {
  AffVec out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0.0) out[static_cast<std::size_t>(r)].add(in[static_cast<std::size_t>(c)], m(r, c));
  return out;
}

class Problem {
 public:
  int add_var(double initial) {
    init_.push_back(initial);
    return static_cast<int>(init_.size()) - 1;
  }
  int num_vars() const { return static_cast<int>(init_.size()); }
  const std::vector<double>& initial() const { return init_; }
  void set_initial(int index, double v) { init_[static_cast<std::size_t>(index)] = v; }
  double value(const LinExpr& e) const { return e.eval(init_); }
  Vec value(const AffVec& u) const {
    Vec v(static_cast<Eigen::Index>(u.size()));
    for (std::size_t i = 0; i < u.size(); ++i) v(static_cast<Eigen::Index>(i)) = u[i].eval(init_);
    return v;
  }

  void linear_le(LinExpr e) { linear_.push_back(std::move(e)); }
  void soc(AffVec u, LinExpr t) { socs_.push_back({std::move(u), std::move(t)}); }
  void pcone(AffVec r, LinExpr t, double p) { pows_.push_back({std::move(r), std::move(t), p}); }
  void minimize(LinExpr obj) { objective_ = std::move(obj); }

  struct Soc {
    AffVec u;
    LinExpr t;
  };
  struct Pow {
    AffVec r;
    LinExpr t;
    double p;
  };

  const std::vector<LinExpr>& linear() const { return linear_; }
  const std::vector<Soc>& socs() const { return socs_; }
  const std::vector<Pow>& pows() const { return pows_; }
  const LinExpr& objective() const { return objective_; }

 private:
  std::vector<double> init_;
  std::vector<LinExpr> linear_;
  std::vector<Soc> socs_;
  std::vector<Pow> pows_;
  LinExpr objective_;
};

struct Solution {
  std::vector<double> z;
  double objective = 0.0;
  bool converged = false;
  int newton_steps = 0;
};

namespace detail {

struct DenseAff {
  Mat m;
  Vec c;
};

inline Vec dense_row(const LinExpr& e, int n, double& constant) {
  Vec a = Vec::Zero(n);
  for (const auto& [i, c] : e.terms) a(i) += c;
  constant = e.constant;
  return a;
}

inline DenseAff dense(const AffVec& u, int n) {
  DenseAff d{Mat::Zero(static_cast<Eigen::Index>(u.size()), n), Vec::Zero(static_cast<Eigen::Index>(u.size()))};
  for (std::size_t r = 0; r < u.size(); ++r) {
    for (const auto& [i, c] : u[r].terms) d.m(static_cast<Eigen::Index>(r), i) += c;
    d.c(static_cast<Eigen::Index>(r)) = u[r].constant;
  }
  return d;
}

class Barrier {
 public:
  Barrier(const Problem& pr) : n_(pr.num_vars()) {
    for (const auto& e : pr.linear()) {
      double b = 0.0;
      Vec a = dense_row(e, n_, b);
      lin_a_.push_back(std::move(a));
      lin_b_.push_back(b);
    }
    for (const auto& s : pr.socs()) {
      double t0 = 0.0;
      Vec g = dense_row(s.t, n_, t0);
      socs_.push_back({dense(s.u, n_), std::move(g), t0, 2.0});
    }
    for (const auto& s : pr.pows()) {
      double t0 = 0.0;
      Vec g = dense_row(s.t, n_, t0);
      pows_.push_back({dense(s.r, n_), std::move(g), t0, s.p});
    }
    double c0 = 0.0;
    obj_ = dense_row(pr.objective(), n_, c0);
    obj_const_ = c0;
  }

  double complexity() const {
    return static_cast<double>(lin_a_.size()) + 2.0 * static_cast<double>(socs_.size()) +
           static_cast<double>(pows_.size());
  }

  double objective(const Vec& z) const { return obj_.dot(z) + obj_const_; }
  const Vec& objective_vec() const { return obj_; }

  /// Barrier value; +inf outside the domain.
  double value(const Vec& z) const {
    double phi = 0.0;
    for (std::size_t i = 0; i < lin_a_.size(); ++i) {
      const double s = -(lin_a_[i].dot(z) + lin_b_[i]);
      if (!(s > 0.0)) return kInf;
      phi -= std::log(s);
    }
    for (const auto& c : socs_) {
      const Vec u = c.aff.m * z + c.aff.c;
      const double t = c.g.dot(z) + c.t0;
      const double nu = u.norm();
      if (!(t > nu)) return kInf;
      phi -= std::log((t - nu) * (t + nu));
    }
    for (const auto& c : pows_) {
      const Vec r = c.aff.m * z + c.aff.c;
      if (r.size() > 0 && !(r.minCoeff() > 0.0)) return kInf;
      const double t = c.g.dot(z) + c.t0;
      const double s = t - pnorm(r, c.p);
      if (!(s > 0.0)) return kInf;
      phi -= std::log(s);
    }
    return phi;
  }

  void derivatives(const Vec& z, Vec& grad, Mat& hess) const {
    grad = Vec::Zero(n_);
    hess = Mat::Zero(n_, n_);
    for (std::size_t i = 0; i < lin_a_.size(); ++i) {
      const double s = -(lin_a_[i].dot(z) + lin_b_[i]);
      grad += lin_a_[i] / s;
      hess += lin_a_[i] * lin_a_[i].transpose() / (s * s);
    }
    for (const auto& c : socs_) {
      const Vec u = c.aff.m * z + c.aff.c;
      const double t = c.g.dot(z) + c.t0;
      const double s = t * t - u.squaredNorm();
      const Vec ds = 2.0 * t * c.g - 2.0 * c.aff.m.transpose() * u;
      const Mat d2s = 2.0 * c.g * c.g.transpose() - 2.0 * c.aff.m.transpose() * c.aff.m;
      grad -= ds / s;
      hess += ds * ds.transpose() / (s * s) - d2s / s;
    }
    for (const auto& c : pows_) {
      const Vec r = c.aff.m * z + c.aff.c;
      const double t = c.g.dot(z) + c.t0;
      const double nr = pnorm(r, c.p);
      const double s = t - nr;
      const Vec q = r / nr;
      Vec w(r.size());
      Vec d(r.size());
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        w(i) = std::pow(q(i), c.p - 1.0);
        d(i) = std::pow(q(i), c.p - 2.0);
      }
      Mat hn = (c.p - 1.0) / nr * (Mat(d.asDiagonal()) - w * w.transpose());
      const Vec ds = c.g - c.aff.m.transpose() * w;
      const Mat d2s = -c.aff.m.transpose() * hn * c.aff.m;
      grad -= ds / s;
      hess += ds * ds.transpose() / (s * s) - d2s / s;
    }
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  static double pnorm(const Vec& r, double p) {
    if (r.size() == 0) return 0.0;
    const double m = r.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) acc += std::pow(std::fabs(r(i)) / m, p);
    return m * std::pow(acc, 1.0 / p);
  }

  struct Cone {
    DenseAff aff;
    Vec g;
    double t0;
    double p;
  };

  int n_;
  std::vector<Vec> lin_a_;
  std::vector<double> lin_b_;
  std::vector<Cone> socs_;
  std::vector<Cone> pows_;
  Vec obj_;
  double obj_const_ = 0.0;
};

}  // namespace detail

/// Runs the barrier method from the problem's (strictly feasible) initial
/// point.  Stops when the barrier duality gap m/t falls below
/// gap_tol * max(1, |objective|).
inline Solution solve(const Problem& pr, double gap_tol = 1e-11) {
  const int n = pr.num_vars();
  detail::Barrier bar(pr);
  Vec z(n);
  for (int i = 0; i < n; ++i) z(i) = pr.initial()[static_cast<std::size_t>(i)];
  Solution sol;
  if (!std::isfinite(bar.value(z))) {
    sol.z = pr.initial();
    sol.objective = bar.objective(z);
    return sol;
  }
  const double m = std::max(1.0, bar.complexity());
  double t = 1.0;
  Vec grad;
  Mat hess;
  int steps = 0;
  bool ok = true;
  for (int outer = 0; outer < 60; ++outer) {
    for (int inner = 0; inner < 80; ++inner) {
      bar.derivatives(z, grad, hess);
      const Vec g = t * bar.objective_vec() + grad;
      Eigen::LDLT<Mat> ldlt(hess);
      Vec dz = ldlt.solve(-g);
      if (ldlt.info() != Eigen::Success || !dz.allFinite()) {
        const double ridge = 1e-12 * (hess.diagonal().cwiseAbs().maxCoeff() + 1.0);
        dz = (hess + ridge * Mat::Identity(n, n)).colPivHouseholderQr().solve(-g);
      }
      const double lambda2 = -g.dot(dz);
      ++steps;
      if (!(lambda2 > 1e-12)) break;
      const double lambda = std::sqrt(lambda2);
      double alpha = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
      const double f0 = t * bar.objective(z) + bar.value(z);
      Vec trial = z + alpha * dz;
      double f1 = t * bar.objective(trial) + bar.value(trial);
      int backtracks = 0;
      while ((!std::isfinite(f1) || f1 > f0 - 0.1 * alpha * lambda2 + 1e-13 * (std::fabs(f0) + 1.0)) &&
             backtracks < 60) {
        alpha *= 0.5;
        trial = z + alpha * dz;
        f1 = t * bar.objective(trial) + bar.value(trial);
        ++backtracks;
      }
      if (!std::isfinite(f1)) break;
      z = trial;
      if (lambda2 / 2.0 < 1e-10) break;
    }
    const double obj = bar.objective(z);
    if (m / t <= gap_tol * std::max(1.0, std::fabs(obj))) break;
    if (outer == 59) ok = false;
    t *= 10.0;
  }
  sol.z.assign(z.data(), z.data() + n);
  sol.objective = bar.objective(z);
  sol.converged = ok;
  sol.newton_steps = steps;
  return sol;
}

}  // namespace kgeom::conic

#endif  // KGEOM_CONIC_HPP
