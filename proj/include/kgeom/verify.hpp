#ifndef KGEOM_VERIFY_HPP
#define KGEOM_VERIFY_HPP

// Invariant checks shared by `kgeom verify` and the acceptance runner.  Every
// check is a pure function of its seed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "kgeom/approximation.hpp"
#include "kgeom/determinant.hpp"
#include "kgeom/presets.hpp"
#include "kgeom/report.hpp"
#include "kgeom/rotundity.hpp"
#include "kgeom/volume.hpp"
#include "kgeom/zoo.hpp"

namespace kgeom {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
};

namespace checks {
namespace detail {

inline std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

inline Vec gauss(std::mt19937_64& rng, int n) { return kgeom::detail::random_gaussian(rng, n); }

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<Vec> gauss_list(std::mt19937_64& rng, int count, int n) {
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) out.push_back(gauss(rng, n));
  return out;
}

/// Largest determinant of a (k+1)x(k+1) matrix with a row of ones and all
/// other entries +-1, by enumerating sign patterns.
inline double max_signed_bordered_det(int k) {
  const int cells = k * (k + 1);
  double best = 0.0;
  for (long mask = 0; mask < (1L << cells); ++mask) {
    Mat m(k + 1, k + 1);
    m.row(0).setOnes();
    for (int c = 0; c < cells; ++c) m(1 + c / (k + 1), c % (k + 1)) = (mask >> c) & 1 ? 1.0 : -1.0;
    best = std::max(best, std::fabs(m.determinant()));
  }
  return best;
}

/// 1 - ||x_1 + x_2|| / 2 minimised over x_1 = e_1 and x_2 on a 0.5 degree
/// grid of S^2 with ||x_1 - x_2|| >= eps.
inline double euclidean_modulus_grid(double eps) {
  const double step = M_PI / 360.0;
  double best = 1.0;
  for (int a = 0; a <= 360; ++a) {
    const double th = a * step;
    for (int b = 0; b < 720; ++b) {
      const double ph = b * step;
      const double x2[3] = {std::cos(th), std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph)};
      const double dx = 1.0 - x2[0], sx = 1.0 + x2[0];
      const double diff = std::sqrt(dx * dx + x2[1] * x2[1] + x2[2] * x2[2]);
      if (diff < eps * (1.0 - 1e-12)) continue;
      const double sum = std::sqrt(sx * sx + x2[1] * x2[1] + x2[2] * x2[2]);
      best = std::min(best, 1.0 - sum / 2.0);
    }
  }
  return best;
}

}  // namespace detail

/// Translation, c^k homogeneity and antisymmetry of D_k, and agreement of
/// V > 0 with rank k of the differences.
inline Check determinant_axioms(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  const double inf = std::numeric_limits<double>::infinity();
  double trans = 0.0, homog = 0.0;
  int antisym = 0, rank_mismatch = 0;
  for (int t = 0; t < instances; ++t) {
    const int d = detail::uniform_int(rng, 1, 6);
    const int k = detail::uniform_int(rng, 1, 4);
    auto xs = detail::gauss_list(rng, k + 1, d);
    if (t % 3 == 0 && k >= 2) xs[0] = xs[1] + 0.5 * (xs[2] - xs[1]);
    const auto fs = detail::gauss_list(rng, k, d);
    const double base = dk_determinant(xs, fs);
    const Vec w = detail::gauss(rng, d);
    auto shifted = xs;
    for (auto& x : shifted) x += w;
    trans = std::max(trans, std::fabs(dk_determinant(shifted, fs) - base));
    const double c = detail::uniform(rng, -2.0, 2.0);
    auto scaled = xs;
    for (auto& x : scaled) x *= c;
    const double ref = std::pow(c, k) * base;
    homog = std::max(homog, std::fabs(dk_determinant(scaled, fs) - ref) / std::max(1.0, std::fabs(ref)));
    auto swapped = xs;
    std::swap(swapped[0], swapped[static_cast<std::size_t>(k)]);
    if (dk_determinant(swapped, fs) != -base) ++antisym;
    const Space s = Space::make(NormDescriptor::lp(t % 2 ? inf : 2.0, d));
    const bool positive = vk_volume(s, xs).value > 1e-9;
    if (positive == degeneracy_test(s, xs).degenerate) ++rank_mismatch;
  }
  Check c{"determinant-axioms", trans <= 1e-10 && homog <= 1e-9 && antisym == 0 && rank_mismatch == 0, ""};
  c.detail = detail::fmt("translation %.3e, homogeneity %.3e, ", trans, homog) +
             detail::fmt("antisymmetry failures %.0f, rank mismatches %.0f", antisym, rank_mismatch);
  return c;
}

/// Sylvester's identity det(A) D_{r-1}^{k-r+1} = det(B) for the D_{k+1}
/// matrix A of k+2 points and k+1 functionals, 2 <= r <= k <= 4.
inline Check sylvester_identity(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  int done = 0;
  while (done < instances) {
    const int k = detail::uniform_int(rng, 2, 4);
    const int d = detail::uniform_int(rng, k + 1, 6);
    const int r = detail::uniform_int(rng, 2, k);
    const auto xs = detail::gauss_list(rng, k + 2, d);
    const auto fs = detail::gauss_list(rng, k + 1, d);
    if (std::fabs(dk_determinant(xs, fs)) < 1e-6) continue;
    try {
      worst = std::max(worst, sylvester_check(xs, fs, r).relative_error);
      ++done;
    } catch (const DegenerateInput&) {
    }
  }
  return {"sylvester-identity", worst <= 1e-8, detail::fmt("max relative error %.3e over %.0f families", worst, done)};
}

/// |D_k[(x_i)]| <= sum over k-subsets of |D_k[y, (x_alpha)]| for any anchor y.
inline Check subfamily_bound(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  for (int t = 0; t < instances; ++t) {
    const int k = detail::uniform_int(rng, 1, 4);
    const int d = detail::uniform_int(rng, 1, 5);
    const auto xs = detail::gauss_list(rng, k + 1, d);
    const auto fs = detail::gauss_list(rng, k, d);
    const Vec y = 2.0 * detail::gauss(rng, d);
    double sum = 0.0;
    for_each_combination(k + 1, k, [&](const std::vector<int>& a) {
      std::vector<Vec> ps{y};
      for (int i : a) ps.push_back(xs[static_cast<std::size_t>(i)]);
      sum += std::fabs(dk_determinant(ps, fs));
      return true;
    });
    if (std::fabs(dk_determinant(xs, fs)) > sum * (1.0 + 1e-12) + 1e-12) ++failures;
  }
  return {"subfamily-bound", failures == 0, detail::fmt("%.0f violations in %.0f instances", failures, instances)};
}

/// |D_k| <= k! prod ||x_i - x_{k+1}|| prod ||f_j||_*.
inline Check hadamard_type_bound(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  const std::vector<NormDescriptor> descs{NormDescriptor::lp(2.0, 4), NormDescriptor::lp(1.0, 4),
                                          NormDescriptor::sullivan(4, {1, 2})};
  for (int t = 0; t < instances; ++t) {
    const Space s = Space::make(descs[static_cast<std::size_t>(t) % descs.size()]);
    const int k = detail::uniform_int(rng, 1, 4);
    const auto xs = detail::gauss_list(rng, k + 1, 4);
    const auto fs = detail::gauss_list(rng, k, 4);
    double bound = factorial(k);
    for (int i = 0; i < k; ++i) bound *= s.norm(xs[static_cast<std::size_t>(i)] - xs.back());
    for (const auto& f : fs) bound *= s.dual_norm(f);
    if (std::fabs(dk_determinant(xs, fs)) > bound * (1.0 + 1e-12)) ++failures;
  }
  return {"hadamard-type-bound", failures == 0, detail::fmt("%.0f violations in %.0f instances", failures, instances)};
}

/// V[x_1, x_2] = ||x_1 - x_2|| in every zoo space.
inline Check order_one_volume_is_distance(std::uint64_t seed, int pairs) {
  std::mt19937_64 rng(seed);
  double worst_exact = 0.0, worst_iter = 0.0;
  for (const auto& z : zoo()) {
    const Space s = Space::make(z.descriptor);
    const bool exact = s.euclidean() || s.polyhedral();
    for (int t = 0; t < pairs; ++t) {
      const Vec a = detail::gauss(rng, s.dim()), b = detail::gauss(rng, s.dim());
      const double err = std::fabs(vk_volume(s, {a, b}).value - s.norm(a - b));
      (exact ? worst_exact : worst_iter) = std::max(exact ? worst_exact : worst_iter, err);
    }
  }
  return {"order-one-volume-is-distance", worst_exact <= 1e-10 && worst_iter <= 1e-6,
          detail::fmt("max error %.3e (exact strategies), %.3e (iterative)", worst_exact, worst_iter)};
}

/// Alternating maximisation against sqrt(det(G^T G)) in Euclidean spaces.
inline Check euclidean_volume_oracle(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < instances; ++t) {
    const int d = detail::uniform_int(rng, 2, 5);
    const int k = detail::uniform_int(rng, 1, std::min(3, d));
    const Space s = Space::make(NormDescriptor::lp(2.0, d));
    const auto xs = detail::gauss_list(rng, k + 1, d);
    Mat g(d, k);
    for (int i = 0; i < k; ++i) g.col(i) = xs[static_cast<std::size_t>(i)] - xs.back();
    const double gram = std::sqrt((g.transpose() * g).determinant());
    const double iter = vk_volume(s, xs, VolumeStrategy::Iterative).value;
    worst = std::max(worst, std::fabs(iter - gram) / gram);
  }
  return {"euclidean-volume-oracle", worst <= 1e-4, detail::fmt("max relative error %.3e", worst)};
}

/// Iterative volume stays within [exact - 1e-6, exact + 1e-9] on polytopes.
inline Check strategy_agreement(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<NormDescriptor> descs{NormDescriptor::lp(inf, 3), NormDescriptor::lp(1.0, 3),
                                          NormDescriptor::polyhedral(hexagon_vertices())};
  double over = 0.0, under = 0.0;
  for (int t = 0; t < instances; ++t) {
    const Space s = Space::make(descs[static_cast<std::size_t>(t) % descs.size()]);
    const int k = detail::uniform_int(rng, 1, std::min(3, s.dim()));
    const auto xs = detail::gauss_list(rng, k + 1, s.dim());
    const double exact = vk_volume(s, xs, VolumeStrategy::Exact).value;
    const double iter = vk_volume(s, xs, VolumeStrategy::Iterative).value;
    over = std::max(over, iter - exact);
    under = std::max(under, exact - iter);
  }
  return {"strategy-agreement", over <= 1e-9 && under <= 1e-6,
          detail::fmt("max overshoot %.3e, max undershoot %.3e", over, under)};
}

/// d(x, ker f) = |f(x)| / ||f||_* over random zoo spaces.
inline Check ascoli_distances(std::uint64_t seed, int triples) {
  std::mt19937_64 rng(seed);
  const auto& z = zoo();
  double worst = 0.0;
  for (int t = 0; t < triples; ++t) {
    const Space s = Space::make(z[static_cast<std::size_t>(t) % z.size()].descriptor);
    const Vec f = detail::gauss(rng, s.dim());
    const Vec x = detail::gauss(rng, s.dim());
    const Mat ker = orthogonal_complement(f);
    std::vector<Vec> basis;
    for (Eigen::Index j = 0; j < ker.cols(); ++j) basis.push_back(ker.col(j));
    const double d = s.distance_to_subspace(x, basis).distance;
    worst = std::max(worst, std::fabs(d - std::fabs(f.dot(x)) / s.dual_norm(f)));
  }
  return {"ascoli-distances", worst <= default_tolerances().ascoli, detail::fmt("max error %.3e", worst)};
}

/// Norm axioms and support functionals on every zoo space.
inline Check norm_axioms(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  double homog = 0.0, tri = 0.0, support = 0.0;
  for (const auto& z : zoo()) {
    const Space s = Space::make(z.descriptor);
    for (int t = 0; t < samples; ++t) {
      const Vec x = detail::gauss(rng, s.dim()), y = detail::gauss(rng, s.dim());
      const double c = detail::uniform(rng, -3.0, 3.0);
      homog = std::max(homog, std::fabs(s.norm(c * x) - std::fabs(c) * s.norm(x)) / std::max(1.0, s.norm(x)));
      tri = std::max(tri, s.norm(x + y) - s.norm(x) - s.norm(y));
      const Functional f = s.support_functional(x);
      support = std::max({support, std::fabs(f.dual_norm - 1.0), s.norm(x) - f.coords.dot(x)});
    }
  }
  return {"norm-axioms", homog <= 1e-9 && tri <= 1e-9 && support <= 1e-6,
          detail::fmt("homogeneity %.3e, triangle excess %.3e, support defect %.3e", homog, tri, support)};
}

/// kUR modulus of Euclidean R^3 at k = 1, eps = 1 against the grid oracle.
inline Check euclidean_modulus(const Budget& budget) {
  const double oracle = detail::euclidean_modulus_grid(1.0);
  ModulusQuery q;
  q.mode = Mode::kUR;
  q.k = 1;
  q.epsilon = 1.0;
  q.budget = budget;
  const ModulusEstimate m = modulus_estimate(Space::make(NormDescriptor::lp(2.0, 3)), q);
  const bool ok = m.converged && m.value >= 0.114 && m.value <= 0.154 && std::fabs(m.value - oracle) <= 0.02;
  return {"euclidean-modulus", ok, detail::fmt("estimate %.6f, grid oracle %.6f, target %.6f", m.value, oracle,
                                               1.0 - std::sqrt(3.0) / 2.0)};
}

/// Square ball, kWUR at e_2*, eps = 1.5: the flat face gives exactly 0.
inline Check flat_face_modulus(const Budget& budget) {
  ModulusQuery q;
  q.mode = Mode::kWUR;
  q.k = 1;
  q.epsilon = 1.5;
  q.functionals = {Vec::Unit(2, 1)};
  q.budget = budget;
  const ModulusEstimate m =
      modulus_estimate(Space::make(NormDescriptor::lp(std::numeric_limits<double>::infinity(), 2)), q);
  const bool ok = m.converged && m.value == 0.0 && m.feasibility_gap >= 0.0 && m.feasibility_gap <= 1e-9;
  return {"flat-face-modulus", ok, detail::fmt("estimate %.3e, feasibility gap %.3e", m.value, m.feasibility_gap)};
}

/// Sum norm (|x1|+|x2|)^2 + x3^2 + x4^2: a segment on the sphere at order 1,
/// nothing flat at order 2.
inline Check sullivan_separation(const Budget& budget) {
  const Space s = Space::make(NormDescriptor::sullivan(4, {1, 2}));
  const RotundityVerdict one = classify_k_rotund(s, 1, budget, 0.5);
  bool ok1 = one.witness_found && one.points.size() == 2;
  double unit_err = 0.0;
  if (ok1) {
    for (const auto& x : one.points) unit_err = std::max(unit_err, std::fabs(s.norm(x) - 1.0));
    ok1 = unit_err <= 1e-7 && std::fabs(one.sum_norm - 2.0) <= 1e-6 && std::fabs(one.volume - 2.0) <= 1e-9;
  }
  const RotundityVerdict two = classify_k_rotund(s, 2, budget, 0.5);
  return {"sullivan-separation", ok1 && !two.witness_found,
          detail::fmt("order 1: V = %.12f, sum norm %.12f; ", one.volume, one.sum_norm) +
              detail::fmt("order 2: best V on near-flat tuples %.3e", two.best_volume)};
}

/// Staircase witnesses in l_p products: |D_k| = k^(-k/p) prod |f_i(x_i - y_i)|.
inline Check product_identity(std::uint64_t seed, int sets) {
  std::mt19937_64 rng(seed);
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<NormDescriptor> factors{NormDescriptor::lp(2.0, 2), NormDescriptor::lp(inf, 2),
                                            NormDescriptor::lp(1.0, 3), NormDescriptor::lp(3.0, 2),
                                            NormDescriptor::polyhedral(hexagon_vertices())};
  double worst = 0.0;
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    for (int t = 0; t < sets; ++t) {
      const int k = detail::uniform_int(rng, 1, 3);
      std::vector<FactorWitness> ws;
      for (int i = 0; i < k; ++i) {
        const NormDescriptor& d =
            factors[static_cast<std::size_t>(detail::uniform_int(rng, 0, static_cast<int>(factors.size()) - 1))];
        const Space s = Space::make(d);
        const Vec x = detail::gauss(rng, s.dim()), y = detail::gauss(rng, s.dim()), f = detail::gauss(rng, s.dim());
        ws.push_back({d, x / s.norm(x), y / s.norm(y), f / s.dual_norm(f)});
      }
      worst = std::max(worst, product_witness_build(ws, p).relative_error);
    }
  }
  return {"product-identity", worst <= 1e-10, detail::fmt("max relative error %.3e", worst)};
}

/// cube-3e1 preset against the exhaustive +-1 determinant oracle, k = 1..3.
inline Check cube_face_stall(const Budget& budget) {
  bool ok = true;
  std::string info;
  for (int k = 1; k <= 3; ++k) {
    const Json j = run_preset("cube-3e1", k, budget);
    const double floor = j["report"]["floor"].get<double>();
    const double diam = j["nearest_face"]["diam_k"]["value"].get<double>();
    const double oracle = detail::max_signed_bordered_det(k);
    ok = ok && j["report"]["verdict"] == "stalls-above-floor" && std::fabs(floor - oracle) <= 1e-9 &&
         diam >= std::pow(2.0, k) - 1e-9;
    info += detail::fmt("k=%.0f: floor %.9g (oracle %.9g); ", k, floor, oracle);
  }
  return {"cube-face-stall", ok, info};
}

/// line-sum-kwuc preset: hypothesis holds, D_k stays at the direct constant.
inline Check line_sum_stall() {
  bool ok = true;
  std::string info;
  for (int k = 1; k <= 3; ++k) {
    const Json j = run_preset("line-sum-kwuc", k);
    const double c = j["direct_constant"]["value"].get<double>();
    double dev = 0.0;
    for (const auto& v : j["report"]["sup_det"]) dev = std::max(dev, std::fabs(v.get<double>() - c));
    ok = ok && !j["report"]["vacuous"].get<bool>() && j["report"]["verdict"] == "stalls-above-floor" && c > 0.0 &&
         dev <= 1e-9;
    info += detail::fmt("k=%.0f: constant %.9g, max deviation %.3e; ", k, c, dev);
  }
  return {"line-sum-stall", ok, info};
}

/// sphere-kwusch preset decays, and so does ksch at each sampled point.
inline Check sphere_uniform_decay(const Budget& budget) {
  const Json j = run_preset("sphere-kwusch", 1, budget);
  bool ok = j["report"]["verdict"] == "decays-below-tol";
  const Space s = Space::make(NormDescriptor::lp(2.0, 3));
  for (const auto& b : j["b_points"]) {
    const DecayReport r = ksch_diagnostic(s, SetDescriptor::unit_ball(), vec_from_json(b, "b"), 1, {Vec::Unit(3, 1)},
                                          default_delta_schedule(), budget);
    ok = ok && r.verdict == Verdict::DecaysBelowTol;
  }
  return {"sphere-uniform-decay", ok, "uniform floor " + j["report"]["floor"].dump()};
}

/// Order-k decay forces order-(k+1) decay on collapsing sequence families.
inline Check order_lifting(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  int violations = 0, decaying = 0;
  for (int inst = 0; inst < instances; ++inst) {
    const int k = detail::uniform_int(rng, 1, 3);
    const int d = detail::uniform_int(rng, k + 1, 5);
    const double rate = detail::uniform(rng, 0.5, 2.0);
    const Vec c = detail::gauss(rng, d);
    const auto dirs = detail::gauss_list(rng, k + 2, d);
    std::vector<std::vector<Vec>> seqs(static_cast<std::size_t>(k + 2));
    for (int t = 1; t <= 64; ++t)
      for (int i = 0; i < k + 2; ++i)
        seqs[static_cast<std::size_t>(i)].push_back(c + std::pow(t, -rate) * dirs[static_cast<std::size_t>(i)]);
    std::vector<Vec> fs;
    for (int j = 0; j <= k; ++j) fs.push_back(detail::gauss(rng, d).normalized());
    const LiftingReport r = order_lifting_check(seqs, fs);
    if (r.order_k.verdict == Verdict::DecaysBelowTol) ++decaying;
    if (r.violation) ++violations;
  }
  return {"order-lifting", violations == 0 && decaying == instances,
          detail::fmt("%.0f violations, %.0f of %.0f instances decay at order k", violations, decaying, instances)};
}

/// distance_to_set for the unit ball equals ||x|| - 1 outside the ball.
inline Check unit_ball_distance(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const auto& z : zoo()) {
    const Space s = Space::make(z.descriptor);
    for (int t = 0; t < samples; ++t) {
      Vec x = detail::gauss(rng, s.dim());
      x *= detail::uniform(rng, 1.0, 4.0) / s.norm(x);
      worst = std::max(worst, std::fabs(distance_to_set(s, x, SetDescriptor::unit_ball()).distance - (s.norm(x) - 1.0)));
    }
  }
  return {"unit-ball-distance", worst <= 1e-12, detail::fmt("max error %.3e", worst)};
}

/// Samples of P_A(x, delta) lie in A and within d(x, A) + delta of x.
inline Check membership_soundness(std::uint64_t seed, const Budget& budget) {
  std::mt19937_64 rng(seed);
  int failures = 0, total = 0;
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto& desc : {NormDescriptor::lp(2.0, 3), NormDescriptor::lp(inf, 3), NormDescriptor::lp(1.0, 3),
                           NormDescriptor::polyhedral(hexagon_vertices())}) {
    const Space s = Space::make(desc);
    const int d = s.dim();
    const std::vector<SetDescriptor> sets{
        SetDescriptor::unit_ball(), SetDescriptor::scaled_sphere(1.5), SetDescriptor::subspace({detail::gauss(rng, d)}),
        SetDescriptor::points(detail::gauss_list(rng, 3, d)), SetDescriptor::polytope(detail::gauss_list(rng, 3, d))};
    for (const auto& a : sets) {
      const Vec x = 2.0 * detail::gauss(rng, d);
      const double delta = detail::uniform(rng, 0.0, 0.5);
      const NearSample ns = near_projection_sample(s, x, a, delta, budget);
      for (const auto& y : ns.points) {
        ++total;
        if (!set_contains(s, a, y, 1e-8) || s.norm(x - y) > ns.distance + delta + 1e-9) ++failures;
      }
    }
  }
  return {"membership-soundness", failures == 0 && total > 0,
          detail::fmt("%.0f of %.0f samples outside their bounds", failures, total)};
}

}  // namespace checks

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"spaces", "determinant", "volume", "rotundity", "approximation"};
  return names;
}

/// Budget used by the suites: the library default with a reduced modulus
/// search so that the full run stays in seconds.
inline Budget verify_budget(std::uint64_t seed) {
  Budget b;
  b.seed = seed;
  b.starts = 16;
  b.local_steps = 300;
  b.samples = 200;
  b.tuples = 2000;
  return b;
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  const Budget b = verify_budget(seed);
  SuiteResult r{name, {}};
  if (name == "spaces") {
    r.checks.push_back(checks::norm_axioms(seed, 20));
    r.checks.push_back(checks::ascoli_distances(seed + 1, 200));
  } else if (name == "determinant") {
    r.checks.push_back(checks::determinant_axioms(seed, 1000));
    r.checks.push_back(checks::sylvester_identity(seed + 1, 100));
    r.checks.push_back(checks::subfamily_bound(seed + 2, 1000));
    r.checks.push_back(checks::hadamard_type_bound(seed + 3, 300));
  } else if (name == "volume") {
    r.checks.push_back(checks::order_one_volume_is_distance(seed, 50));
    r.checks.push_back(checks::euclidean_volume_oracle(seed + 1, 100));
    r.checks.push_back(checks::strategy_agreement(seed + 2, 60));
  } else if (name == "rotundity") {
    r.checks.push_back(checks::euclidean_modulus(b));
    r.checks.push_back(checks::flat_face_modulus(b));
    r.checks.push_back(checks::sullivan_separation(b));
    r.checks.push_back(checks::product_identity(seed, 25));
  } else if (name == "approximation") {
    r.checks.push_back(checks::unit_ball_distance(seed, 10));
    r.checks.push_back(checks::membership_soundness(seed + 1, b));
    r.checks.push_back(checks::cube_face_stall(b));
    r.checks.push_back(checks::line_sum_stall());
    r.checks.push_back(checks::sphere_uniform_decay(b));
    r.checks.push_back(checks::order_lifting(seed + 2, 50));
  } else {
    throw ValidationError("verify: unknown suite \"" + name + "\"");
  }
  return r;
}

inline Json to_json(const SuiteResult& s) {
  Json j;
  j["name"] = s.name;
  j["passed"] = s.passed();
  Json a = Json::array();
  for (const auto& c : s.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    cj["detail"] = c.detail;
    a.push_back(cj);
  }
  j["checks"] = a;
  return j;
}

/// Runs the named suites in order and collects them into one payload.
inline Json run_verify(const std::vector<std::string>& suites, std::uint64_t seed) {
  Json j;
  j["seed"] = seed;
  Json a = Json::array();
  bool all = true;
  for (const auto& name : suites) {
    const SuiteResult r = run_suite(name, seed);
    all = all && r.passed();
    a.push_back(to_json(r));
  }
  j["suites"] = a;
  j["passed"] = all;
  return j;
}

}  // namespace kgeom

#endif  // KGEOM_VERIFY_HPP
