#ifndef KGEOM_SPACES_HPP
#define KGEOM_SPACES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kgeom/conic.hpp"
#include "kgeom/config.hpp"
#include "kgeom/linalg.hpp"

namespace kgeom {

enum class Variant { Lp, SullivanSum, SmithTurett, Polyhedral, Product, Quotient };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Lp: return "Lp";
    case Variant::SullivanSum: return "SullivanSum";
    case Variant::SmithTurett: return "SmithTurett";
    case Variant::Polyhedral: return "Polyhedral";
    case Variant::Product: return "Product";
    case Variant::Quotient: return "Quotient";
  }
  return "?";
}

/// Declarative recipe for a finite-dimensional normed space.
///
///  - Lp(p, dim)                 ||x||_p, p in [1, inf]
///  - SullivanSum(dim, indices)  ||x||^2 = (sum_{j in J} |x_j|)^2 + sum_{i not in J} x_i^2
///  - SmithTurett(dim, weights)  ||x||^2 = ||x||_1^2 + sum_n (w_n x_n)^2, default w_n = 2^{-n/2}
///  - Polyhedral(vertices)       unit ball = conv(vertices), vertex set symmetric
///  - Product(p, factors)        ||(x_1..x_m)|| = ||(||x_1||, .., ||x_m||)||_p
///  - Quotient(base, basis)      X / span(basis), coordinates on the Euclidean
///                               orthogonal complement of span(basis)
///
/// Indices are 1-based, as in the JSON encoding.
struct NormDescriptor {
  Variant variant = Variant::Lp;
  double p = 2.0;
  int dim = 0;
  std::vector<int> indices;
  std::vector<double> weights;
  std::vector<Vec> vertices;
  std::vector<NormDescriptor> children;  // Product factors, or {base} for Quotient
  std::vector<Vec> basis;

  static NormDescriptor lp(double p, int dim) {
    NormDescriptor d;
    d.variant = Variant::Lp;
    d.p = p;
    d.dim = dim;
    return d;
  }
  static NormDescriptor sullivan(int dim, std::vector<int> indices) {
    NormDescriptor d;
    d.variant = Variant::SullivanSum;
    d.dim = dim;
    d.indices = std::move(indices);
    return d;
  }
  static NormDescriptor smith_turett(int dim, std::vector<double> weights = {}) {
    NormDescriptor d;
    d.variant = Variant::SmithTurett;
    d.dim = dim;
    d.weights = std::move(weights);
    return d;
  }
  static NormDescriptor polyhedral(std::vector<Vec> vertices) {
    NormDescriptor d;
    d.variant = Variant::Polyhedral;
    d.vertices = std::move(vertices);
    d.dim = d.vertices.empty() ? 0 : static_cast<int>(d.vertices.front().size());
    return d;
  }
  static NormDescriptor product(double p, std::vector<NormDescriptor> factors) {
    NormDescriptor d;
    d.variant = Variant::Product;
    d.p = p;
    d.children = std::move(factors);
    return d;
  }
  static NormDescriptor quotient(NormDescriptor base, std::vector<Vec> basis) {
    NormDescriptor d;
    d.variant = Variant::Quotient;
    d.children.push_back(std::move(base));
    d.basis = std::move(basis);
    return d;
  }
};

/// A dual vector with its dual norm cached.
struct Functional {
  Vec coords;
  double dual_norm = 0.0;

  double operator()(const Vec& x) const { return coords.dot(x); }
};

/// Vertex / facet description of a polyhedral unit ball.  `facets` are the
/// normals a with a.x <= 1 on the ball, i.e. the extreme points of the dual ball.
struct PolyData {
  std::vector<Vec> vertices;
  std::vector<Vec> facets;
};

struct DualNormResult {
  double value = 0.0;
  bool exact = true;
  bool flagged = false;  // numeric route did not certify convergence
  Vec certificate;       // x with ||x|| <= 1 and f(x) ~ value, when computed
};

struct SubspaceDistance {
  double distance = 0.0;
  Vec nearest;       // nearest point of span(basis)
  Vec coefficients;  // nearest = sum_j coefficients_j basis_j
};

namespace detail {

inline std::vector<Vec> dedupe(const std::vector<Vec>& pts, double tol) {
  std::vector<Vec> out;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : out)
      if ((p - q).cwiseAbs().maxCoeff() <= tol * std::max(1.0, p.cwiseAbs().maxCoeff())) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(p);
  }
  return out;
}

/// Brute-force facet enumeration of conv(points) for a symmetric point set
/// spanning R^d.  Also filters the points down to the extreme ones.
inline PolyData enumerate_facets(const std::vector<Vec>& raw, int d) {
  const std::vector<Vec> pts = dedupe(raw, 1e-12);
  const int n = static_cast<int>(pts.size());
  if (binomial(n, d) > 3e6) throw UnsupportedStrategy("polytope too large for facet enumeration");
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  PolyData out;
  Mat m(d, d);
  for_each_combination(n, d, [&](const std::vector<int>& idx) {
    for (int r = 0; r < d; ++r) m.row(r) = pts[static_cast<std::size_t>(idx[r])].transpose();
    Eigen::FullPivLU<Mat> lu(m);
    lu.setThreshold(1e-10);
    if (lu.rank() < d) return true;
    Vec a = lu.solve(Vec::Ones(d));
    if (!a.allFinite()) return true;
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts) mx = std::max(mx, a.dot(p));
    if (mx > 1.0 + 1e-9) return true;
    for (const auto& f : out.facets)
      if ((f - a).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff())) return true;
    out.facets.push_back(a);
    return true;
  });
  for (const auto& p : pts) {
    std::vector<Vec> tight;
    for (const auto& a : out.facets)
      if (std::fabs(a.dot(p) - 1.0) <= 1e-9) tight.push_back(a);
    if (static_cast<int>(tight.size()) < d) continue;
    if (numerical_rank(columns(tight, d), 1e-9) == d) out.vertices.push_back(p);
  }
  (void)scale;
  return out;
}

inline Vec signs_or_zero(const Vec& x) {
  Vec s(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) s(i) = x(i) > 0 ? 1.0 : (x(i) < 0 ? -1.0 : 0.0);
  return s;
}

/// Support functional of x in l_p^n with barycentric tie-breaking for p = inf.
inline Vec lp_support(const Vec& x, double p, double face_tol) {
  const double nx = lp_norm(x, p);
  if (std::isinf(p)) {
    Vec f = Vec::Zero(x.size());
    int count = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (std::fabs(x(i)) >= nx * (1.0 - face_tol)) ++count;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (std::fabs(x(i)) >= nx * (1.0 - face_tol)) f(i) = (x(i) > 0 ? 1.0 : -1.0) / count;
    return f;
  }
  if (p == 1.0) return signs_or_zero(x);
  if (p == 2.0) return x / nx;
  Vec f(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double r = std::fabs(x(i)) / nx;
    f(i) = (x(i) > 0 ? 1.0 : (x(i) < 0 ? -1.0 : 0.0)) * std::pow(r, p - 1.0);
  }
  return f;
}

inline std::vector<Vec> sign_cube(int d) {
  std::vector<Vec> out;
  const int n = 1 << d;
  for (int mask = 0; mask < n; ++mask) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v(i) = (mask >> i) & 1 ? -1.0 : 1.0;
    out.push_back(v);
  }
  return out;
}

inline std::vector<Vec> cross_polytope(int d) {
  std::vector<Vec> out;
  for (int i = 0; i < d; ++i) {
    Vec v = Vec::Zero(d);
    v(i) = 1.0;
    out.push_back(v);
    out.push_back(-v);
  }
  return out;
}

}  // namespace detail

/// Immutable handle to a constructed normed space.  Cheap to copy and safe to
/// share between threads.
class Space {
 public:
  struct Node;

  /// Validates the descriptor and precomputes everything evaluation needs.
  static Space make(const NormDescriptor& d, const Tolerances& tol = default_tolerances());

  int dim() const;
  const NormDescriptor& descriptor() const;
  /// Unit ball (equivalently the dual ball) is a polytope with an available
  /// vertex/facet list.
  bool polyhedral() const;
  /// The norm is the Euclidean norm of the coordinates.
  bool euclidean() const;
  const Tolerances& tolerances() const;

  double norm(const Vec& x) const;
  DualNormResult dual_norm_eval(const Vec& f) const;
  double dual_norm(const Vec& f) const { return dual_norm_eval(f).value; }
  Functional functional(const Vec& f) const;
  Functional support_functional(const Vec& x) const;
  std::vector<Vec> extreme_points(bool dual) const;
  SubspaceDistance distance_to_subspace(const Vec& x, const std::vector<Vec>& basis) const;

  /// Adds the epigraph constraint ||u|| <= bound (or ||u||_* <= bound when
  /// `dual`) to `pr`, allocating auxiliary variables initialised with slack
  /// `margin`.  Returns R such that every bound > R is strictly feasible at
  /// the initial point.
  double emit(conic::Problem& pr, const conic::AffVec& u, const conic::LinExpr& bound, double margin,
              bool dual) const;

  const PolyData& poly_data() const;

 private:
  std::shared_ptr<const Node> node_;
  void check_dim(const Vec& x, const char* what) const;
};

struct Space::Node {
  NormDescriptor desc;
  Tolerances tol;
  int dim = 0;
  bool euclidean = false;
  bool polyhedral = false;
  PolyData poly;
  std::vector<char> in_j;            // SullivanSum membership mask
  Vec weights;                       // SmithTurett weights
  std::vector<Space> factors;        // Product
  std::vector<int> offsets;          // Product coordinate offsets
  std::vector<Space> base;           // Quotient base (0 or 1 entries)
  Mat basis;                         // Quotient subspace basis (columns)
  Mat complement;                    // Quotient coordinates (orthonormal columns)
};

namespace detail {

/// Numeric norm / dual norm through the conic solver.
inline double conic_norm(const Space& s, const Vec& x, bool dual, bool* converged = nullptr) {
  conic::Problem pr;
  const int tau = pr.add_var(0.0);
  const double r = s.emit(pr, conic::constant_vec(x), conic::LinExpr::var(tau), 1.0, dual);
  pr.set_initial(tau, r + 1.0);
  pr.minimize(conic::LinExpr::var(tau));
  const conic::Solution sol = conic::solve(pr, s.tolerances().conic_gap);
  if (converged) *converged = sol.converged;
  return std::max(0.0, sol.objective);
}

/// argmin ||g||_* subject to g.x = 1, through the conic solver.
inline Vec conic_min_dual_with_unit_value(const Space& s, const Vec& x, bool dual_ball) {
  const Eigen::Index n = x.size();
  const Mat comp = orthogonal_complement(x);
  const Vec g0 = x / x.squaredNorm();
  conic::Problem pr;
  std::vector<int> w;
  for (Eigen::Index j = 0; j < comp.cols(); ++j) w.push_back(pr.add_var(0.0));
  const int tau = pr.add_var(0.0);
  conic::AffVec g(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    g[static_cast<std::size_t>(i)].constant = g0(i);
    for (Eigen::Index j = 0; j < comp.cols(); ++j) g[static_cast<std::size_t>(i)].add(w[static_cast<std::size_t>(j)], comp(i, j));
  }
  const double r = s.emit(pr, g, conic::LinExpr::var(tau), 1.0, dual_ball);
  pr.set_initial(tau, r + 1.0);
  pr.minimize(conic::LinExpr::var(tau));
  const conic::Solution sol = conic::solve(pr, s.tolerances().conic_gap);
  Vec out = g0;
  for (Eigen::Index j = 0; j < comp.cols(); ++j) out += sol.z[static_cast<std::size_t>(w[static_cast<std::size_t>(j)])] * comp.col(j);
  return out;
}

}  // namespace detail

inline int Space::dim() const { return node_->dim; }
inline const NormDescriptor& Space::descriptor() const { return node_->desc; }
inline bool Space::polyhedral() const { return node_->polyhedral; }
inline bool Space::euclidean() const { return node_->euclidean; }
inline const Tolerances& Space::tolerances() const { return node_->tol; }
inline const PolyData& Space::poly_data() const {
  if (!node_->polyhedral) throw UnsupportedStrategy("unit ball is not polyhedral");
  return node_->poly;
}

inline void Space::check_dim(const Vec& x, const char* what) const {
  if (x.size() != node_->dim)
    throw DimensionMismatch(std::string(what) + ": expected length " + std::to_string(node_->dim) + ", got " +
                            std::to_string(x.size()));
  if (!x.allFinite()) throw ValidationError(std::string(what) + ": non-finite entry");
}

inline Space Space::make(const NormDescriptor& d, const Tolerances& tol) {
  auto node = std::make_shared<Node>();
  node->desc = d;
  node->tol = tol;
  switch (d.variant) {
    case Variant::Lp: {
      if (!(d.p >= 1.0)) throw ValidationError("Lp: p must be >= 1");
      if (d.dim < 1) throw ValidationError("Lp: dim must be >= 1");
      node->dim = d.dim;
      node->euclidean = d.p == 2.0 || d.dim == 1;
      if (d.p == 1.0 || std::isinf(d.p) || d.dim == 1) {
        node->polyhedral = true;
        if (d.dim == 1) {
          node->poly.vertices = detail::cross_polytope(1);
          node->poly.facets = detail::cross_polytope(1);
        } else if (d.p == 1.0) {
          node->poly.vertices = detail::cross_polytope(d.dim);
          if (d.dim <= 14) node->poly.facets = detail::sign_cube(d.dim);
          else node->polyhedral = false;
        } else {
          if (d.dim <= 14) node->poly.vertices = detail::sign_cube(d.dim);
          else node->polyhedral = false;
          node->poly.facets = detail::cross_polytope(d.dim);
        }
      }
      break;
    }
    case Variant::SullivanSum: {
      if (d.dim < 1) throw ValidationError("SullivanSum: dim must be >= 1");
      if (d.indices.empty()) throw ValidationError("SullivanSum: indices must be non-empty");
      node->dim = d.dim;
      node->in_j.assign(static_cast<std::size_t>(d.dim), 0);
      int prev = 0;
      for (int i : d.indices) {
        if (i <= prev || i > d.dim) throw ValidationError("SullivanSum: indices must be strictly increasing within 1..dim");
        node->in_j[static_cast<std::size_t>(i - 1)] = 1;
        prev = i;
      }
      if (d.indices.size() == 1) node->euclidean = true;
      break;
    }
    case Variant::SmithTurett: {
      if (d.dim < 1) throw ValidationError("SmithTurett: dim must be >= 1");
      node->dim = d.dim;
      node->weights.resize(d.dim);
      if (d.weights.empty()) {
        for (int n = 1; n <= d.dim; ++n) node->weights(n - 1) = std::pow(2.0, -0.5 * n);
      } else {
        if (static_cast<int>(d.weights.size()) != d.dim) throw ValidationError("SmithTurett: weights length must equal dim");
        for (int i = 0; i < d.dim; ++i) {
          if (!(d.weights[static_cast<std::size_t>(i)] >= 0.0)) throw ValidationError("SmithTurett: weights must be >= 0");
          node->weights(i) = d.weights[static_cast<std::size_t>(i)];
        }
      }
      break;
    }
    case Variant::Polyhedral: {
      if (d.vertices.empty()) throw ValidationError("Polyhedral: vertices must be non-empty");
      const Eigen::Index n = d.vertices.front().size();
      if (n < 1) throw ValidationError("Polyhedral: vertices must have positive length");
      for (const auto& v : d.vertices) {
        if (v.size() != n) throw ValidationError("Polyhedral: vertices must share one length");
        if (!v.allFinite()) throw ValidationError("Polyhedral: non-finite vertex");
      }
      for (const auto& v : d.vertices) {
        bool found = false;
        for (const auto& w : d.vertices)
          if ((v + w).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, v.cwiseAbs().maxCoeff())) {
            found = true;
            break;
          }
        if (!found) throw ValidationError("Polyhedral: vertex set is not symmetric (v present without -v)");
      }
      if (numerical_rank(columns(d.vertices, n), 1e-10) < n) throw ValidationError("Polyhedral: vertices do not span the space");
      node->dim = static_cast<int>(n);
      node->polyhedral = true;
      node->poly = detail::enumerate_facets(d.vertices, static_cast<int>(n));
      break;
    }
    case Variant::Product: {
      if (!(d.p >= 1.0)) throw ValidationError("Product: p must be >= 1");
      if (d.children.empty()) throw ValidationError("Product: factors must be non-empty");
      int off = 0;
      bool all_poly = true;
      bool all_euclid = true;
      for (const auto& c : d.children) {
        Space f = Space::make(c, tol);
        node->offsets.push_back(off);
        off += f.dim();
        all_poly = all_poly && f.polyhedral();
        all_euclid = all_euclid && f.euclidean();
        node->factors.push_back(std::move(f));
      }
      node->dim = off;
      node->euclidean = all_euclid && d.p == 2.0;
      const bool flat = d.p == 1.0 || std::isinf(d.p);
      if (flat && all_poly) {
        auto embed = [&](std::size_t i, const Vec& v) {
          Vec out = Vec::Zero(off);
          out.segment(node->offsets[i], v.size()) = v;
          return out;
        };
        auto cartesian = [&](auto getter) {
          std::vector<Vec> acc{Vec::Zero(off)};
          for (std::size_t i = 0; i < node->factors.size(); ++i) {
            std::vector<Vec> next;
            for (const auto& a : acc)
              for (const auto& v : getter(node->factors[i].poly_data())) {
                Vec w = a;
                w.segment(node->offsets[i], v.size()) = v;
                next.push_back(std::move(w));
              }
            acc = std::move(next);
            if (acc.size() > 100000) throw UnsupportedStrategy("Product: vertex list too large");
          }
          return acc;
        };
        auto verts = [](const PolyData& p) -> const std::vector<Vec>& { return p.vertices; };
        auto facs = [](const PolyData& p) -> const std::vector<Vec>& { return p.facets; };
        node->polyhedral = true;
        if (d.p == 1.0) {
          for (std::size_t i = 0; i < node->factors.size(); ++i)
            for (const auto& v : node->factors[i].poly_data().vertices) node->poly.vertices.push_back(embed(i, v));
          node->poly.facets = cartesian(facs);
        } else {
          node->poly.vertices = cartesian(verts);
          for (std::size_t i = 0; i < node->factors.size(); ++i)
            for (const auto& a : node->factors[i].poly_data().facets) node->poly.facets.push_back(embed(i, a));
        }
      }
      break;
    }
    case Variant::Quotient: {
      if (d.children.size() != 1) throw ValidationError("Quotient: exactly one base descriptor required");
      Space base = Space::make(d.children.front(), tol);
      if (d.basis.empty()) return base;  // X/{0} is X
      const int n = base.dim();
      const int m = static_cast<int>(d.basis.size());
      for (const auto& b : d.basis)
        if (b.size() != n) throw ValidationError("Quotient: basis vector length differs from base dimension");
      if (m >= n) throw ValidationError("Quotient: quotient dimension must be >= 1");
      Mat bm = m > 0 ? columns(d.basis, n) : Mat(n, 0);
      if (m > 0 && numerical_rank(bm, 1e-10) < m) throw ValidationError("Quotient: subspace basis is linearly dependent");
      node->dim = n - m;
      node->basis = bm;
      node->complement = orthogonal_complement(bm);
      node->euclidean = base.euclidean();
      if (base.polyhedral()) {
        std::vector<Vec> proj;
        for (const auto& v : base.poly_data().vertices) proj.push_back(node->complement.transpose() * v);
        node->poly = detail::enumerate_facets(proj, node->dim);
        node->polyhedral = true;
      }
      node->base.push_back(std::move(base));
      break;
    }
  }
  Space s;
  s.node_ = std::move(node);
  return s;
}

inline double Space::norm(const Vec& x) const {
  check_dim(x, "norm_eval");
  const Node& n = *node_;
  switch (n.desc.variant) {
    case Variant::Lp: return lp_norm(x, n.desc.p);
    case Variant::SullivanSum: {
      double l = 0.0, r = 0.0;
      for (int i = 0; i < n.dim; ++i) {
        if (n.in_j[static_cast<std::size_t>(i)]) l += std::fabs(x(i));
        else r += x(i) * x(i);
      }
      return std::sqrt(l * l + r);
    }
    case Variant::SmithTurett: {
      const double l = x.cwiseAbs().sum();
      return std::sqrt(l * l + x.cwiseProduct(n.weights).squaredNorm());
    }
    case Variant::Polyhedral: {
      double m = 0.0;
      for (const auto& a : n.poly.facets) m = std::max(m, a.dot(x));
      return m;
    }
    case Variant::Product: {
      Vec t(static_cast<Eigen::Index>(n.factors.size()));
      for (std::size_t i = 0; i < n.factors.size(); ++i)
        t(static_cast<Eigen::Index>(i)) = n.factors[i].norm(x.segment(n.offsets[i], n.factors[i].dim()));
      return lp_norm(t, n.desc.p);
    }
    case Variant::Quotient: {
      if (n.euclidean) return x.norm();
      if (n.polyhedral) {
        double m = 0.0;
        for (const auto& a : n.poly.facets) m = std::max(m, a.dot(x));
        return m;
      }
      return detail::conic_norm(*this, x, false);
    }
  }
  return 0.0;
}

inline DualNormResult Space::dual_norm_eval(const Vec& f) const {
  check_dim(f, "dual_norm_eval");
  const Node& n = *node_;
  DualNormResult out;
  switch (n.desc.variant) {
    case Variant::Lp: out.value = lp_norm(f, conjugate_exponent(n.desc.p)); break;
    case Variant::SullivanSum: {
      double l = 0.0, r = 0.0;
      for (int i = 0; i < n.dim; ++i) {
        if (n.in_j[static_cast<std::size_t>(i)]) l = std::max(l, std::fabs(f(i)));
        else r += f(i) * f(i);
      }
      out.value = std::sqrt(l * l + r);
      break;
    }
    case Variant::SmithTurett: {
      bool conv = true;
      out.value = detail::conic_norm(*this, f, true, &conv);
      out.exact = false;
      out.flagged = !conv;
      if (f.norm() > 0.0) {
        // maximiser from the primal side: argmin ||x|| subject to f.x = 1
        Vec x = detail::conic_min_dual_with_unit_value(*this, f, false);
        out.certificate = x / norm(x);
      }
      break;
    }
    case Variant::Polyhedral: {
      double m = 0.0;
      for (const auto& v : n.poly.vertices) m = std::max(m, std::fabs(v.dot(f)));
      out.value = m;
      break;
    }
    case Variant::Product: {
      Vec t(static_cast<Eigen::Index>(n.factors.size()));
      for (std::size_t i = 0; i < n.factors.size(); ++i) {
        const DualNormResult r = n.factors[i].dual_norm_eval(f.segment(n.offsets[i], n.factors[i].dim()));
        t(static_cast<Eigen::Index>(i)) = r.value;
        out.exact = out.exact && r.exact;
        out.flagged = out.flagged || r.flagged;
      }
      out.value = lp_norm(t, conjugate_exponent(n.desc.p));
      break;
    }
    case Variant::Quotient: {
      if (n.polyhedral) {
        double m = 0.0;
        for (const auto& v : n.poly.vertices) m = std::max(m, std::fabs(v.dot(f)));
        out.value = m;
      } else {
        const DualNormResult r = n.base.front().dual_norm_eval(n.complement * f);
        out.value = r.value;
        out.exact = r.exact;
        out.flagged = r.flagged;
      }
      break;
    }
  }
  return out;
}

inline Functional Space::functional(const Vec& f) const { return Functional{f, dual_norm(f)}; }

inline Functional Space::support_functional(const Vec& x) const {
  check_dim(x, "support_functional");
  if (x.cwiseAbs().maxCoeff() == 0.0) throw ValidationError("support_functional: zero vector has no support direction");
  const Node& n = *node_;
  const double face = n.tol.face;
  Vec f;
  if (n.polyhedral && !(n.desc.variant == Variant::Lp)) {
    // barycentre of the optimal face of the dual ball
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& a : n.poly.facets) best = std::max(best, a.dot(x));
    f = Vec::Zero(n.dim);
    int count = 0;
    for (const auto& a : n.poly.facets)
      if (a.dot(x) >= best - face * std::max(1.0, std::fabs(best))) {
        f += a;
        ++count;
      }
    f /= count;
    return Functional{f, dual_norm(f)};
  }
  switch (n.desc.variant) {
    case Variant::Lp: f = detail::lp_support(x, n.desc.p, face); break;
    case Variant::SullivanSum: {
      const double nx = norm(x);
      double l = 0.0;
      for (int i = 0; i < n.dim; ++i)
        if (n.in_j[static_cast<std::size_t>(i)]) l += std::fabs(x(i));
      f = Vec::Zero(n.dim);
      for (int i = 0; i < n.dim; ++i) {
        if (n.in_j[static_cast<std::size_t>(i)]) f(i) = l * (x(i) > 0 ? 1.0 : (x(i) < 0 ? -1.0 : 0.0)) / nx;
        else f(i) = x(i) / nx;
      }
      break;
    }
    case Variant::SmithTurett: {
      const double nx = norm(x);
      const double l = x.cwiseAbs().sum();
      f = (l * detail::signs_or_zero(x) + n.weights.cwiseProduct(n.weights).cwiseProduct(x)) / nx;
      break;
    }
    case Variant::Product: {
      Vec t(static_cast<Eigen::Index>(n.factors.size()));
      for (std::size_t i = 0; i < n.factors.size(); ++i)
        t(static_cast<Eigen::Index>(i)) = n.factors[i].norm(x.segment(n.offsets[i], n.factors[i].dim()));
      const Vec w = detail::lp_support(t, n.desc.p, face);
      f = Vec::Zero(n.dim);
      for (std::size_t i = 0; i < n.factors.size(); ++i) {
        const Eigen::Index ii = static_cast<Eigen::Index>(i);
        if (w(ii) == 0.0 || t(ii) == 0.0) continue;
        f.segment(n.offsets[i], n.factors[i].dim()) =
            w(ii) * n.factors[i].support_functional(x.segment(n.offsets[i], n.factors[i].dim())).coords;
      }
      break;
    }
    case Variant::Quotient: {
      if (n.euclidean) {
        f = x / x.norm();
      } else {
        const Vec g = detail::conic_min_dual_with_unit_value(*this, x, true);
        f = g / dual_norm(g);
      }
      break;
    }
    case Variant::Polyhedral: break;  // handled above
  }
  return Functional{f, dual_norm(f)};
}

inline std::vector<Vec> Space::extreme_points(bool dual) const {
  if (!node_->polyhedral)
    throw UnsupportedStrategy(std::string("extreme_points: ") + (dual ? "dual" : "primal") +
                              " unit ball of this space is not polyhedral");
  return detail::dedupe(dual ? node_->poly.facets : node_->poly.vertices, node_->tol.dedupe);
}

inline SubspaceDistance Space::distance_to_subspace(const Vec& x, const std::vector<Vec>& basis) const {
  check_dim(x, "distance_to_subspace");
  const Eigen::Index m = static_cast<Eigen::Index>(basis.size());
  SubspaceDistance out;
  if (m == 0) {
    out.distance = norm(x);
    out.nearest = Vec::Zero(x.size());
    out.coefficients = Vec(0);
    return out;
  }
  const Mat b = columns(basis, x.size());
  if (numerical_rank(b, node_->tol.rank) < m) throw DegenerateInput("distance_to_subspace: basis is linearly dependent");
  if (node_->euclidean) {
    out.coefficients = b.colPivHouseholderQr().solve(x);
    out.nearest = b * out.coefficients;
    out.distance = (x - out.nearest).norm();
    return out;
  }
  conic::Problem pr;
  std::vector<int> c;
  for (Eigen::Index j = 0; j < m; ++j) c.push_back(pr.add_var(0.0));
  const int tau = pr.add_var(0.0);
  conic::AffVec u(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    u[static_cast<std::size_t>(i)].constant = x(i);
    for (Eigen::Index j = 0; j < m; ++j) u[static_cast<std::size_t>(i)].add(c[static_cast<std::size_t>(j)], -b(i, j));
  }
  const double r = emit(pr, u, conic::LinExpr::var(tau), 1.0, false);
  pr.set_initial(tau, r + 1.0);
  pr.minimize(conic::LinExpr::var(tau));
  const conic::Solution sol = conic::solve(pr, node_->tol.conic_gap);
  out.coefficients.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) out.coefficients(j) = sol.z[static_cast<std::size_t>(c[static_cast<std::size_t>(j)])];
  out.nearest = b * out.coefficients;
  out.distance = norm(x - out.nearest);
  return out;
}

inline double Space::emit(conic::Problem& pr, const conic::AffVec& u, const conic::LinExpr& bound, double margin,
                          bool dual) const {
  using conic::LinExpr;
  const Node& n = *node_;
  const Vec uv = pr.value(u);
  // |u_i| <= s_i for the given coordinates; returns the new variables.
  auto abs_bounds = [&](const std::vector<int>& coords) {
    std::vector<int> s;
    for (int i : coords) {
      const int v = pr.add_var(std::fabs(uv(i)) + margin);
      LinExpr a = u[static_cast<std::size_t>(i)];
      a.add(v, -1.0);
      pr.linear_le(a);
      LinExpr b = u[static_cast<std::size_t>(i)].scaled(-1.0);
      b.add(v, -1.0);
      pr.linear_le(b);
      s.push_back(v);
    }
    return s;
  };
  auto all_coords = [&](int d) {
    std::vector<int> c(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] = i;
    return c;
  };
  // ||v||_p <= bound for an affine vector v with known current value.
  auto lp_cone = [&](const conic::AffVec& v, const Vec& vv, double p) -> double {
    if (std::isinf(p)) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        LinExpr a = v[i];
        a.add(bound, -1.0);
        pr.linear_le(a);
        LinExpr b = v[i].scaled(-1.0);
        b.add(bound, -1.0);
        pr.linear_le(b);
      }
      return vv.size() ? vv.cwiseAbs().maxCoeff() : 0.0;
    }
    if (p == 2.0) {
      pr.soc(v, bound);
      return vv.norm();
    }
    std::vector<int> s;
    double total = 0.0;
    {
      // aux magnitudes
      for (std::size_t i = 0; i < v.size(); ++i) {
        const int w = pr.add_var(std::fabs(vv(static_cast<Eigen::Index>(i))) + margin);
        LinExpr a = v[i];
        a.add(w, -1.0);
        pr.linear_le(a);
        LinExpr b = v[i].scaled(-1.0);
        b.add(w, -1.0);
        pr.linear_le(b);
        s.push_back(w);
      }
    }
    if (p == 1.0) {
      LinExpr sum;
      for (int w : s) {
        sum.add(w, 1.0);
        total += pr.initial()[static_cast<std::size_t>(w)];
      }
      sum.add(bound, -1.0);
      pr.linear_le(sum);
      return total;
    }
    conic::AffVec r;
    Vec rv(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
      r.push_back(LinExpr::var(s[i]));
      rv(static_cast<Eigen::Index>(i)) = pr.initial()[static_cast<std::size_t>(s[i])];
    }
    pr.pcone(r, bound, p);
    return lp_norm(rv, p);
  };

  if (n.polyhedral && n.desc.variant != Variant::Lp && n.desc.variant != Variant::Product) {
    const std::vector<Vec>& rows = dual ? n.poly.vertices : n.poly.facets;
    double r = 0.0;
    for (const auto& a : rows) {
      LinExpr e;
      for (Eigen::Index i = 0; i < a.size(); ++i) e.add(u[static_cast<std::size_t>(i)], a(i));
      r = std::max(r, a.dot(uv));
      e.add(bound, -1.0);
      pr.linear_le(e);
    }
    return r;
  }

  switch (n.desc.variant) {
    case Variant::Lp: {
      const double p = dual ? conjugate_exponent(n.desc.p) : n.desc.p;
      return lp_cone(u, uv, p);
    }
    case Variant::SullivanSum: {
      std::vector<int> jset, rest;
      for (int i = 0; i < n.dim; ++i) (n.in_j[static_cast<std::size_t>(i)] ? jset : rest).push_back(i);
      conic::AffVec v;
      Vec vv(static_cast<Eigen::Index>(rest.size() + 1));
      if (!dual) {
        const std::vector<int> s = abs_bounds(jset);
        LinExpr sum;
        double total = 0.0;
        for (int w : s) {
          sum.add(w, 1.0);
          total += pr.initial()[static_cast<std::size_t>(w)];
        }
        v.push_back(sum);
        vv(0) = total;
      } else {
        double mx = 0.0;
        for (int i : jset) mx = std::max(mx, std::fabs(uv(i)));
        const int w = pr.add_var(mx + margin);
        for (int i : jset) {
          LinExpr a = u[static_cast<std::size_t>(i)];
          a.add(w, -1.0);
          pr.linear_le(a);
          LinExpr b = u[static_cast<std::size_t>(i)].scaled(-1.0);
          b.add(w, -1.0);
          pr.linear_le(b);
        }
        v.push_back(LinExpr::var(w));
        vv(0) = mx + margin;
      }
      for (std::size_t k = 0; k < rest.size(); ++k) {
        v.push_back(u[static_cast<std::size_t>(rest[k])]);
        vv(static_cast<Eigen::Index>(k + 1)) = uv(rest[k]);
      }
      pr.soc(v, bound);
      return vv.norm();
    }
    case Variant::SmithTurett: {
      if (!dual) {
        const std::vector<int> s = abs_bounds(all_coords(n.dim));
        conic::AffVec v;
        Vec vv(n.dim + 1);
        LinExpr sum;
        double total = 0.0;
        for (int w : s) {
          sum.add(w, 1.0);
          total += pr.initial()[static_cast<std::size_t>(w)];
        }
        v.push_back(sum);
        vv(0) = total;
        for (int i = 0; i < n.dim; ++i) {
          v.push_back(u[static_cast<std::size_t>(i)].scaled(n.weights(i)));
          vv(i + 1) = n.weights(i) * uv(i);
        }
        pr.soc(v, bound);
        return vv.norm();
      }
      // ||f||_* = min_h sqrt(||f - W h||_inf^2 + ||h||_2^2)
      std::vector<int> h;
      for (int i = 0; i < n.dim; ++i) h.push_back(pr.add_var(0.0));
      const int m = pr.add_var(uv.cwiseAbs().maxCoeff() + margin);
      for (int i = 0; i < n.dim; ++i) {
        LinExpr d = u[static_cast<std::size_t>(i)];
        d.add(h[static_cast<std::size_t>(i)], -n.weights(i));
        LinExpr a = d;
        a.add(m, -1.0);
        pr.linear_le(a);
        LinExpr b = d.scaled(-1.0);
        b.add(m, -1.0);
        pr.linear_le(b);
      }
      conic::AffVec v{LinExpr::var(m)};
      for (int i = 0; i < n.dim; ++i) v.push_back(LinExpr::var(h[static_cast<std::size_t>(i)]));
      pr.soc(v, bound);
      return uv.cwiseAbs().maxCoeff() + margin;
    }
    case Variant::Product: {
      conic::AffVec t;
      Vec tv(static_cast<Eigen::Index>(n.factors.size()));
      for (std::size_t i = 0; i < n.factors.size(); ++i) {
        const int ti = pr.add_var(0.0);
        conic::AffVec ui(u.begin() + n.offsets[i], u.begin() + n.offsets[i] + n.factors[i].dim());
        const double r = n.factors[i].emit(pr, ui, LinExpr::var(ti), margin, dual);
        pr.set_initial(ti, r + margin);
        t.push_back(LinExpr::var(ti));
        tv(static_cast<Eigen::Index>(i)) = r + margin;
      }
      const double p = dual ? conjugate_exponent(n.desc.p) : n.desc.p;
      if (std::isinf(p)) {
        for (const auto& ti : t) {
          LinExpr a = ti;
          a.add(bound, -1.0);
          pr.linear_le(a);
        }
        return tv.maxCoeff();
      }
      if (p == 1.0) {
        LinExpr sum;
        for (const auto& ti : t) sum.add(ti);
        sum.add(bound, -1.0);
        pr.linear_le(sum);
        return tv.sum();
      }
      if (p == 2.0) pr.soc(t, bound);
      else pr.pcone(t, bound, p);
      return lp_norm(tv, p);
    }
    case Variant::Quotient: {
      const Space& base = n.base.front();
      if (dual) return base.emit(pr, conic::apply(n.complement, u), bound, margin, true);
      if (n.euclidean) {
        pr.soc(u, bound);
        return uv.norm();
      }
      conic::AffVec lifted = conic::apply(n.complement, u);
      for (Eigen::Index j = 0; j < n.basis.cols(); ++j) {
        const int w = pr.add_var(0.0);
        for (Eigen::Index i = 0; i < n.basis.rows(); ++i)
          if (n.basis(i, j) != 0.0) lifted[static_cast<std::size_t>(i)].add(w, n.basis(i, j));
      }
      return base.emit(pr, lifted, bound, margin, false);
    }
    case Variant::Polyhedral: break;
  }
  return 0.0;
}

}  // namespace kgeom

#endif  // KGEOM_SPACES_HPP
